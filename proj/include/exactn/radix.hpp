#pragma once

// Parameter selection and base-q digit arithmetic: digit decomposition,
// carry vectors of grade-school addition, and the digit-wise adjustment
// vectors eta and zeta that stand in for raw values on the board.

#include <cstdint>
#include <optional>
#include <vector>

namespace exactn {

// (log2 e) / 2: the per-digit entropy rate that drives both the digit-count
// choice and the good-pair budget.
inline constexpr double kLambda = 0.72134752044448170368;

struct ParamOverrides {
  std::optional<std::uint64_t> q;
  std::optional<std::uint64_t> d;
  std::optional<std::uint64_t> r;
  std::optional<std::uint64_t> budget_slack;
};

struct ProtocolParams {
  std::uint64_t n = 0;       // inputs x, y range over [0, n]; z over [0, 2n]
  std::uint64_t q = 0;       // digit radix, >= 2
  std::uint64_t d = 0;       // digit count, >= 2; q^d >= 2n + 1
  std::uint64_t r = 0;       // bucket count for the carry code, in [1, d]
  std::uint64_t budget = 0;  // good-pair code length budget B, in bits
  bool asymptotic = true;    // false: q^d overshoots 2qn, so the cost
                             // analysis is loose at this size (still valid)
  std::uint64_t qd_cap = 0;  // q^d, saturated at UINT64_MAX
  bool qd_exact = true;      // false when q^d overflowed 64 bits
};

// Chooses d near sqrt((2/lambda) * log2(2n)), backs d off while q^d lands at
// or above 2qn, then takes the least q with q^d >= 2n + 1. Any overridden
// field is taken as given (no back-off) and only validated, which may leave
// the params flagged non-asymptotic. Throws std::invalid_argument for n < 2
// or inconsistent overrides.
ProtocolParams select_params(std::uint64_t n, const ParamOverrides& ov = {});

using DigitVec = std::vector<std::int64_t>;
using CarryVector = std::vector<std::uint8_t>;

// Little-endian expansion: w = sum_i digits[i] * q^i, exactly d digits.
DigitVec to_digits(std::uint64_t w, const ProtocolParams& p);
std::uint64_t from_digits(const DigitVec& digits, const ProtocolParams& p);

// Carry chain of x + y in base q. Entry i is the carry out of digit position
// i. The integer overload requires the sum to fit in d digits (out_of_range
// otherwise), so its top carry is always 0; the digit-level overload returns
// the raw chain, whose top entry is 1 exactly when the sum overflows.
CarryVector carry_vector(std::uint64_t x, std::uint64_t y, const ProtocolParams& p);
CarryVector carry_vector(const DigitVec& x_digits, const DigitVec& y_digits,
                         const ProtocolParams& p);

// eta[i] = y[i] - q*C[i] + C[i-1] (with C[-1] = 0): adding eta to the digits
// of x gives the digits of x + y, coordinate by coordinate.
DigitVec eta(std::uint64_t y, const CarryVector& c, const ProtocolParams& p);
DigitVec eta(const DigitVec& y_digits, const CarryVector& c, const ProtocolParams& p);

// zeta[i] = z[i] + q*C[i] - C[i-1]: the matching adjustment on the z side.
// With C the carry vector of (x, y), x + y == z exactly when the digits of x
// plus the digits of y equal zeta coordinate by coordinate.
DigitVec zeta(std::uint64_t z, const CarryVector& c, const ProtocolParams& p);
DigitVec zeta(const DigitVec& z_digits, const CarryVector& c, const ProtocolParams& p);

}  // namespace exactn
