#pragma once

// One-round acceptance test for "gamma = alpha + beta" on integer vectors.
// The announcing player posts ||alpha - beta||^2 and the other two compare it
// against the one quantity each can compute from its own view. Both checks
// pass exactly when gamma = alpha + beta, because
//
//   ||2a - g||^2 + ||2b - g||^2 - 2*||a - b||^2 = 2*||a + b - g||^2
//
// forces the right-hand side to zero once both sides agree with the
// announced norm.

#include <cstdint>
#include <span>

namespace exactn {

struct GDecision {
  bool accept = false;
  std::uint64_t announced_norm = 0;  // ||alpha - beta||^2
  bool bit_y = false;                // announced norm == ||2*alpha - gamma||^2
  bool bit_x = false;                // announced norm == ||2*beta - gamma||^2
  unsigned cost_bits = 0;            // norm field plus the two vote bits
};

// Smallest field width that holds every squared distance of two vectors in
// dimension d whose coordinates differ by at most entry_bound in absolute
// value, i.e. ceil(log2(d * entry_bound^2 + 1)).
unsigned norm_field_width(std::uint64_t d, std::uint64_t entry_bound);

std::uint64_t squared_distance(std::span<const std::int64_t> a,
                               std::span<const std::int64_t> b);

// ||2a - b||^2, the one-sided quantity a verifier recomputes locally.
std::uint64_t squared_distance_2x(std::span<const std::int64_t> a,
                                  std::span<const std::int64_t> b);

// The decision itself is pure integer geometry; q enters only through the
// cost accounting, which sizes the norm field for base-q digit vectors.
GDecision decide_g(std::span<const std::int64_t> alpha,
                   std::span<const std::int64_t> beta,
                   std::span<const std::int64_t> gamma, std::uint64_t q,
                   std::uint64_t d);

}  // namespace exactn
