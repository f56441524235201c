#include "exactn/vector_addition.hpp"

#include <limits>
#include <stdexcept>

namespace exactn {
namespace {

using u128 = unsigned __int128;

// Coordinates are digit-scale in every caller; the 2^31 ceiling keeps the
// scaled difference far from int64 overflow.
constexpr std::int64_t kEntryCeiling = std::int64_t{1} << 31;

u128 sq_dist_wide(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                  std::int64_t scale_a) {
  if (a.size() != b.size())
    throw std::invalid_argument("squared distance: dimension mismatch");
  u128 acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > kEntryCeiling || a[i] < -kEntryCeiling || b[i] > kEntryCeiling ||
        b[i] < -kEntryCeiling)
      throw std::invalid_argument("squared distance: coordinate exceeds 2^31");
    std::int64_t diff = scale_a * a[i] - b[i];
    std::uint64_t mag = diff < 0 ? static_cast<std::uint64_t>(-diff)
                                 : static_cast<std::uint64_t>(diff);
    acc += u128(mag) * mag;
  }
  return acc;
}

std::uint64_t narrow(u128 v, const char* what) {
  if (v > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error(what);
  return static_cast<std::uint64_t>(v);
}

}  // namespace

unsigned norm_field_width(std::uint64_t d, std::uint64_t entry_bound) {
  if (d == 0) throw std::invalid_argument("norm_field_width: dimension must be positive");
  u128 max_norm = u128(entry_bound) * entry_bound * d;
  unsigned w = 0;
  while (max_norm > 0) {
    ++w;
    max_norm >>= 1;
  }
  if (w > 64) throw std::overflow_error("norm field exceeds 64 bits");
  return w;
}

std::uint64_t squared_distance(std::span<const std::int64_t> a,
                               std::span<const std::int64_t> b) {
  return narrow(sq_dist_wide(a, b, 1), "squared distance exceeds 64 bits");
}

std::uint64_t squared_distance_2x(std::span<const std::int64_t> a,
                                  std::span<const std::int64_t> b) {
  return narrow(sq_dist_wide(a, b, 2), "squared distance exceeds 64 bits");
}

GDecision decide_g(std::span<const std::int64_t> alpha,
                   std::span<const std::int64_t> beta,
                   std::span<const std::int64_t> gamma, std::uint64_t q,
                   std::uint64_t d) {
  if (q < 2) throw std::invalid_argument("decide_g: radix must be at least 2");
  if (d == 0 || alpha.size() != d || beta.size() != d || gamma.size() != d)
    throw std::invalid_argument("decide_g: vectors must all have length d");

  GDecision g;
  g.announced_norm = squared_distance(alpha, beta);
  g.bit_y = (g.announced_norm == squared_distance_2x(alpha, gamma));
  g.bit_x = (g.announced_norm == squared_distance_2x(beta, gamma));
  g.accept = g.bit_y && g.bit_x;
  g.cost_bits = norm_field_width(d, q - 1) + 2;
  return g;
}

}  // namespace exactn
