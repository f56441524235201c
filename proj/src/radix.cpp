#include "exactn/radix.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace exactn {
namespace {

using u128 = unsigned __int128;

// q^d saturated at UINT64_MAX; sets `exact` to false on overflow.
std::uint64_t pow_saturating(std::uint64_t q, std::uint64_t d, bool& exact) {
  exact = true;
  u128 v = 1;
  for (std::uint64_t i = 0; i < d; ++i) {
    v *= q;
    if (v > std::numeric_limits<std::uint64_t>::max()) {
      exact = false;
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(v);
}

// Least q >= 2 with q^d >= m.
std::uint64_t least_radix(std::uint64_t m, std::uint64_t d) {
  std::uint64_t q = static_cast<std::uint64_t>(
      std::floor(std::pow(static_cast<double>(m), 1.0 / static_cast<double>(d))));
  if (q < 2) q = 2;
  bool exact = true;
  while (q > 2 && pow_saturating(q - 1, d, exact) >= m) --q;
  while (pow_saturating(q, d, exact) < m) ++q;
  return q;
}

void check_digit_shape(const DigitVec& digits, const ProtocolParams& p,
                       const char* what) {
  if (digits.size() != p.d)
    throw std::invalid_argument(std::string(what) + ": expected " +
                                std::to_string(p.d) + " digits, got " +
                                std::to_string(digits.size()));
  for (std::int64_t v : digits)
    if (v < 0 || static_cast<std::uint64_t>(v) >= p.q)
      throw std::invalid_argument(std::string(what) + ": digit out of [0, q)");
}

void check_carry_shape(const CarryVector& c, const ProtocolParams& p) {
  if (c.size() != p.d)
    throw std::invalid_argument("carry vector: expected " + std::to_string(p.d) +
                                " entries, got " + std::to_string(c.size()));
  for (std::uint8_t b : c)
    if (b > 1) throw std::invalid_argument("carry vector: entries must be 0 or 1");
}

}  // namespace

ProtocolParams select_params(std::uint64_t n, const ParamOverrides& ov) {
  if (n < 2) throw std::invalid_argument("problem size must be at least 2");
  if (n > (std::uint64_t{1} << 62))
    throw std::invalid_argument("problem size exceeds the 2^62 ceiling");

  const std::uint64_t m = 2 * n + 1;  // q^d must reach this
  ProtocolParams p;
  p.n = n;

  std::uint64_t d =
      ov.d.value_or(std::max<std::uint64_t>(
          2, static_cast<std::uint64_t>(std::llround(
                 std::sqrt((2.0 / kLambda) * std::log2(2.0 * static_cast<double>(n)))))));
  if (d < 2) throw std::invalid_argument("digit count must be at least 2");

  const bool pinned = ov.q.has_value() || ov.d.has_value();
  for (;;) {
    std::uint64_t q = ov.q ? *ov.q : least_radix(m, d);
    if (q < 2) throw std::invalid_argument("radix must be at least 2");
    bool exact = true;
    std::uint64_t qd = pow_saturating(q, d, exact);
    if (exact && qd < m)
      throw std::invalid_argument("q^d must cover the range [0, 2n]");
    // In the intended regime q^d also stays below 2qn; when it does not, the
    // code-length analysis is loose but every operation is still sound.
    bool tight = exact && u128(2) * q * n > u128(qd);
    if (tight || pinned || d == 2) {
      p.q = q;
      p.d = d;
      p.qd_cap = qd;
      p.qd_exact = exact;
      p.asymptotic = tight;
      break;
    }
    --d;
  }

  p.r = ov.r.value_or(std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(p.d))))));
  if (p.r < 1 || p.r > p.d)
    throw std::invalid_argument("bucket count must lie in [1, d]");

  const double dd = static_cast<double>(p.d);
  std::uint64_t slack = ov.budget_slack.value_or(static_cast<std::uint64_t>(
      std::ceil(2.0 * std::sqrt(dd) * std::log2(dd + 1.0))));
  p.budget = static_cast<std::uint64_t>(std::ceil(kLambda * dd)) + slack;
  return p;
}

DigitVec to_digits(std::uint64_t w, const ProtocolParams& p) {
  if (p.qd_exact && w >= p.qd_cap)
    throw std::out_of_range("value does not fit in d base-q digits");
  DigitVec digits(p.d);
  for (std::uint64_t i = 0; i < p.d; ++i) {
    digits[i] = static_cast<std::int64_t>(w % p.q);
    w /= p.q;
  }
  return digits;
}

std::uint64_t from_digits(const DigitVec& digits, const ProtocolParams& p) {
  check_digit_shape(digits, p, "from_digits");
  u128 w = 0;
  for (std::uint64_t i = p.d; i-- > 0;) {
    w = w * p.q + static_cast<std::uint64_t>(digits[i]);
    if (w > std::numeric_limits<std::uint64_t>::max())
      throw std::out_of_range("digit vector value exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(w);
}

CarryVector carry_vector(const DigitVec& x_digits, const DigitVec& y_digits,
                         const ProtocolParams& p) {
  check_digit_shape(x_digits, p, "carry_vector x");
  check_digit_shape(y_digits, p, "carry_vector y");
  CarryVector c(p.d);
  std::uint8_t carry = 0;
  for (std::uint64_t i = 0; i < p.d; ++i) {
    carry = (static_cast<std::uint64_t>(x_digits[i] + y_digits[i]) + carry >= p.q) ? 1 : 0;
    c[i] = carry;
  }
  return c;
}

CarryVector carry_vector(std::uint64_t x, std::uint64_t y, const ProtocolParams& p) {
  if (p.qd_exact && u128(x) + y >= u128(p.qd_cap))
    throw std::out_of_range("carry_vector: x + y does not fit in d digits");
  return carry_vector(to_digits(x, p), to_digits(y, p), p);
}

DigitVec eta(const DigitVec& y_digits, const CarryVector& c, const ProtocolParams& p) {
  check_digit_shape(y_digits, p, "eta");
  check_carry_shape(c, p);
  DigitVec out(p.d);
  for (std::uint64_t i = 0; i < p.d; ++i) {
    std::int64_t prev = (i == 0) ? 0 : c[i - 1];
    out[i] = y_digits[i] - static_cast<std::int64_t>(p.q) * c[i] + prev;
  }
  return out;
}

DigitVec eta(std::uint64_t y, const CarryVector& c, const ProtocolParams& p) {
  return eta(to_digits(y, p), c, p);
}

DigitVec zeta(const DigitVec& z_digits, const CarryVector& c, const ProtocolParams& p) {
  check_digit_shape(z_digits, p, "zeta");
  check_carry_shape(c, p);
  DigitVec out(p.d);
  for (std::uint64_t i = 0; i < p.d; ++i) {
    std::int64_t prev = (i == 0) ? 0 : c[i - 1];
    out[i] = z_digits[i] + static_cast<std::int64_t>(p.q) * c[i] - prev;
  }
  return out;
}

DigitVec zeta(std::uint64_t z, const CarryVector& c, const ProtocolParams& p) {
  return zeta(to_digits(z, p), c, p);
}

}  // namespace exactn
