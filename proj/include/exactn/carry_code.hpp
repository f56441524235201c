#pragma once

// Entropy coding of carry vectors. The y-digits are split into r buckets by
// magnitude; carries in a bucket of size s are sent as a popcount field plus
// the colexicographic rank of their support set, hence
// ceil(log2(s+1)) + ceil(log2 C(s, k)) bits. Digits near 0 or q-1 make their
// carries nearly deterministic, so on random inputs this runs well below the
// d-bit raw encoding. Decoding needs y but never x.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "exactn/bitstring.hpp"
#include "exactn/radix.hpp"

namespace exactn {

// h(u) = -u*log2(u) - (1-u)*log2(1-u), with h(0) = h(1) = 0. Throws outside
// [0, 1].
double binary_entropy(double u);

// buckets[j] lists the digit positions i with floor(y[i]*r/q) == j, in
// ascending order; the r lists partition {0, ..., d-1}.
struct BucketPartition {
  std::vector<std::vector<std::uint32_t>> buckets;
};
BucketPartition make_buckets(const DigitVec& y_digits, const ProtocolParams& p);

using CarryCode = BitString;

CarryCode encode_carry(const CarryVector& c, const DigitVec& y_digits,
                       const ProtocolParams& p);

// Length of encode_carry(...) in bits without materializing it; safe for
// tight loops over many pairs.
std::size_t carry_code_length(const CarryVector& c, const DigitVec& y_digits,
                              const ProtocolParams& p);

// Inverse of encode_carry given the same y. Throws std::invalid_argument on
// any malformed code: truncated input, popcount exceeding the bucket size,
// or a rank field at or above C(s, k).
CarryVector decode_carry(const CarryCode& code, const DigitVec& y_digits,
                         const ProtocolParams& p);

// Streaming variant: consumes exactly one code from the reader's current
// position, leaving anything after it unread. decode_carry additionally
// rejects trailing bits.
CarryVector decode_carry_stream(BitReader& in, const DigitVec& y_digits,
                                const ProtocolParams& p);

// Baseline d-bit encoding, one bit per position in digit order.
BitString encode_carry_raw(const CarryVector& c);

// Upper-bound curve for the mean rank-field payload over random x: each
// bucket contributes |S_j| * h(u_j) with u_j = j/r, read at the midpoint 1/2
// when r == 1. Count-field overhead is not included.
double entropy_bound_bits(const DigitVec& y_digits, const ProtocolParams& p);

}  // namespace exactn
