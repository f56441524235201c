#include "exactn/carry_code.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace exactn {
namespace {

using boost::multiprecision::cpp_int;

// Pascal's triangle in uint64 for n <= 64; every C(64, k) fits. The wide
// table handles larger bucket sizes (reachable only through r overrides)
// and is grown lazily under a lock.
constexpr unsigned kSmallMax = 64;

const std::uint64_t* small_binomials() {
  static const auto table = [] {
    std::array<std::uint64_t, (kSmallMax + 1) * (kSmallMax + 1)> t{};
    auto at = [&](unsigned n, unsigned k) -> std::uint64_t& {
      return t[n * (kSmallMax + 1) + k];
    };
    for (unsigned n = 0; n <= kSmallMax; ++n) {
      at(n, 0) = 1;
      for (unsigned k = 1; k <= n; ++k)
        at(n, k) = at(n - 1, k - 1) + (k <= n - 1 ? at(n - 1, k) : 0);
    }
    return t;
  }();
  return table.data();
}

inline std::uint64_t binom64(unsigned n, unsigned k) {
  return small_binomials()[n * (kSmallMax + 1) + k];
}

cpp_int binom_wide(unsigned n, unsigned k) {
  if (k > n) return 0;
  static std::mutex mu;
  static std::vector<std::vector<cpp_int>> rows;  // rows[n][k] for k <= n
  std::lock_guard<std::mutex> lock(mu);
  while (rows.size() <= n) {
    unsigned m = rows.size();
    std::vector<cpp_int> row(m + 1);
    row[0] = 1;
    for (unsigned j = 1; j <= m; ++j)
      row[j] = (j <= m - 1 ? rows[m - 1][j] : 0) + rows[m - 1][j - 1];
    rows.push_back(std::move(row));
  }
  return rows[n][k];
}

inline unsigned width_for_count(std::uint64_t values) {
  // Field width for integers in [0, values): ceil(log2(values)).
  return values <= 1 ? 0 : std::bit_width(values - 1);
}

unsigned width_for_count(const cpp_int& values) {
  if (values <= 1) return 0;
  cpp_int m = values - 1;
  return static_cast<unsigned>(msb(m)) + 1;
}

void append_wide(BitString& bits, const cpp_int& value, unsigned width) {
  for (unsigned i = width; i-- > 0;) bits.push_back(bit_test(value, i));
}

cpp_int read_wide(BitReader& in, unsigned width) {
  cpp_int v = 0;
  for (unsigned i = 0; i < width; ++i) {
    v <<= 1;
    if (in.read_bit()) v |= 1;
  }
  return v;
}

// Colex rank of the ascending index set {a_0 < a_1 < ...}: sum of
// C(a_t, t+1). Runs in the integer type the bucket size calls for.
std::uint64_t colex_rank64(const std::vector<std::uint32_t>& members) {
  std::uint64_t rank = 0;
  for (std::size_t t = 0; t < members.size(); ++t)
    rank += binom64(members[t], static_cast<unsigned>(t) + 1);
  return rank;
}

cpp_int colex_rank_wide(const std::vector<std::uint32_t>& members) {
  cpp_int rank = 0;
  for (std::size_t t = 0; t < members.size(); ++t)
    rank += binom_wide(members[t], static_cast<unsigned>(t) + 1);
  return rank;
}

// Inverse of colex_rank64 into `out` (size k), local indices over [0, s).
void colex_unrank64(std::uint64_t rank, unsigned s, unsigned k,
                    std::vector<std::uint32_t>& out) {
  out.resize(k);
  unsigned c = s;
  for (unsigned t = k; t >= 1; --t) {
    unsigned cc = c - 1;
    while (binom64(cc, t) > rank) --cc;
    out[t - 1] = cc;
    rank -= binom64(cc, t);
    c = cc;
  }
}

void colex_unrank_wide(cpp_int rank, unsigned s, unsigned k,
                       std::vector<std::uint32_t>& out) {
  out.resize(k);
  unsigned c = s;
  for (unsigned t = k; t >= 1; --t) {
    unsigned cc = c - 1;
    while (binom_wide(cc, t) > rank) --cc;
    out[t - 1] = cc;
    rank -= binom_wide(cc, t);
    c = cc;
  }
}

void check_carry_arg(const CarryVector& c, const ProtocolParams& p) {
  if (c.size() != p.d)
    throw std::invalid_argument("carry code: carry vector has wrong length");
  for (std::uint8_t b : c)
    if (b > 1) throw std::invalid_argument("carry code: carry entries must be 0 or 1");
}

}  // namespace

double binary_entropy(double u) {
  if (!(u >= 0.0 && u <= 1.0))
    throw std::invalid_argument("binary_entropy: argument outside [0, 1]");
  if (u == 0.0 || u == 1.0) return 0.0;
  return -u * std::log2(u) - (1.0 - u) * std::log2(1.0 - u);
}

BucketPartition make_buckets(const DigitVec& y_digits, const ProtocolParams& p) {
  if (y_digits.size() != p.d)
    throw std::invalid_argument("make_buckets: expected d digits");
  BucketPartition part;
  part.buckets.resize(p.r);
  for (std::uint32_t i = 0; i < p.d; ++i) {
    std::int64_t v = y_digits[i];
    if (v < 0 || static_cast<std::uint64_t>(v) >= p.q)
      throw std::invalid_argument("make_buckets: digit out of [0, q)");
    std::uint64_t j = static_cast<std::uint64_t>(v) * p.r / p.q;
    part.buckets[j].push_back(i);
  }
  return part;
}

CarryCode encode_carry(const CarryVector& c, const DigitVec& y_digits,
                       const ProtocolParams& p) {
  check_carry_arg(c, p);
  BucketPartition part = make_buckets(y_digits, p);
  CarryCode out;
  std::vector<std::uint32_t> members;
  for (const auto& bucket : part.buckets) {
    unsigned s = static_cast<unsigned>(bucket.size());
    members.clear();
    for (unsigned t = 0; t < s; ++t)
      if (c[bucket[t]]) members.push_back(t);
    unsigned k = static_cast<unsigned>(members.size());
    append_field(out, k, width_for_count(std::uint64_t{s} + 1));
    if (s <= kSmallMax) {
      append_field(out, colex_rank64(members), width_for_count(binom64(s, k)));
    } else {
      append_wide(out, colex_rank_wide(members), width_for_count(binom_wide(s, k)));
    }
  }
  return out;
}

std::size_t carry_code_length(const CarryVector& c, const DigitVec& y_digits,
                              const ProtocolParams& p) {
  check_carry_arg(c, p);
  if (y_digits.size() != p.d)
    throw std::invalid_argument("carry_code_length: expected d digits");
  constexpr std::size_t kStack = 128;
  std::uint32_t s_buf[kStack], k_buf[kStack];
  std::vector<std::uint32_t> heap_s, heap_k;
  std::uint32_t* s_of = s_buf;
  std::uint32_t* k_of = k_buf;
  if (p.r > kStack) {
    heap_s.resize(p.r);
    heap_k.resize(p.r);
    s_of = heap_s.data();
    k_of = heap_k.data();
  }
  for (std::uint64_t j = 0; j < p.r; ++j) s_of[j] = k_of[j] = 0;
  for (std::uint64_t i = 0; i < p.d; ++i) {
    std::int64_t v = y_digits[i];
    if (v < 0 || static_cast<std::uint64_t>(v) >= p.q)
      throw std::invalid_argument("carry_code_length: digit out of [0, q)");
    std::uint64_t j = static_cast<std::uint64_t>(v) * p.r / p.q;
    ++s_of[j];
    k_of[j] += c[i];
  }
  std::size_t total = 0;
  for (std::uint64_t j = 0; j < p.r; ++j) {
    unsigned s = s_of[j], k = k_of[j];
    total += width_for_count(std::uint64_t{s} + 1);
    total += s <= kSmallMax ? width_for_count(binom64(s, k))
                            : width_for_count(binom_wide(s, k));
  }
  return total;
}

CarryVector decode_carry_stream(BitReader& in, const DigitVec& y_digits,
                                const ProtocolParams& p) {
  BucketPartition part = make_buckets(y_digits, p);
  CarryVector c(p.d, 0);
  std::vector<std::uint32_t> members;
  for (const auto& bucket : part.buckets) {
    unsigned s = static_cast<unsigned>(bucket.size());
    std::uint64_t k = in.read_field(width_for_count(std::uint64_t{s} + 1));
    if (k > s)
      throw std::invalid_argument("malformed carry code: popcount exceeds bucket size");
    if (s <= kSmallMax) {
      std::uint64_t total = binom64(s, static_cast<unsigned>(k));
      std::uint64_t rank = in.read_field(width_for_count(total));
      if (rank >= total)
        throw std::invalid_argument("malformed carry code: rank out of range");
      colex_unrank64(rank, s, static_cast<unsigned>(k), members);
    } else {
      cpp_int total = binom_wide(s, static_cast<unsigned>(k));
      cpp_int rank = read_wide(in, width_for_count(total));
      if (rank >= total)
        throw std::invalid_argument("malformed carry code: rank out of range");
      colex_unrank_wide(std::move(rank), s, static_cast<unsigned>(k), members);
    }
    for (std::uint32_t local : members) c[bucket[local]] = 1;
  }
  return c;
}

CarryVector decode_carry(const CarryCode& code, const DigitVec& y_digits,
                         const ProtocolParams& p) {
  BitReader in(code);
  CarryVector c = decode_carry_stream(in, y_digits, p);
  if (in.remaining() != 0)
    throw std::invalid_argument("malformed carry code: trailing bits");
  return c;
}

BitString encode_carry_raw(const CarryVector& c) {
  BitString out;
  out.reserve(c.size());
  for (std::uint8_t b : c) {
    if (b > 1) throw std::invalid_argument("carry vector: entries must be 0 or 1");
    out.push_back(b != 0);
  }
  return out;
}

double entropy_bound_bits(const DigitVec& y_digits, const ProtocolParams& p) {
  BucketPartition part = make_buckets(y_digits, p);
  double total = 0.0;
  for (std::uint64_t j = 1; j <= p.r; ++j) {
    double u = (p.r == 1) ? 0.5 : static_cast<double>(j) / static_cast<double>(p.r);
    total += static_cast<double>(part.buckets[j - 1].size()) * binary_entropy(u);
  }
  return total;
}

}  // namespace exactn
