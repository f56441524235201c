#pragma once

// Three-party runs of the addition check "x + y = z" on a shared board. The
// announcing player sees (x, y) and posts a pair-determined prefix: an
// optional shift index, the carry code, and a fixed-width norm field. The
// two verifiers then post one bit each, computed from disjoint views:
//
//   bit_y is computed from (x, z) and the norm field alone;
//   bit_x is computed from (y, z) by decoding the carry code.
//
// Both bits are 1 exactly when x + y = z. exactly_n reduces the forehead
// game "do the three values sum to n?" to a typical run.

#include <cstdint>
#include <optional>

#include "exactn/bitstring.hpp"
#include "exactn/carry_code.hpp"
#include "exactn/radix.hpp"
#include "exactn/shift_cover.hpp"
#include "exactn/vector_addition.hpp"

namespace exactn {

struct Transcript {
  std::optional<std::uint32_t> shift_index;  // smeared runs only
  unsigned shift_width = 0;                  // ceil(log2 |family|) when present
  CarryCode carry_code;
  std::uint64_t announced_norm = 0;
  unsigned norm_width = 0;
  bool bit_y = false;
  bool bit_x = false;

  // Everything the pair (x, y) determines: shift, code, norm.
  BitString pair_prefix() const;
  // The full board: prefix plus the two verification bits.
  BitString bits() const;
  std::size_t length() const { return pair_prefix().size() + 2; }
};

struct Outcome {
  bool accept = false;
  bool good_pair = false;   // carry code fit within the length budget
  std::size_t cost_bits = 0;
  Transcript transcript;
};

// Width of the norm field under params p. Coordinates of the announced
// difference vector lie in [-(2q-1), 2q-1].
unsigned protocol_norm_width(const ProtocolParams& p);

// Typical-mode pair prefix: carry code for (x, y) followed by the announced
// norm. Built from (x, y) only.
BitString transcript_prefix(std::uint64_t x, std::uint64_t y, const ProtocolParams& p);

// Verification bit of the player seeing (x, z): reads just the fixed-width
// tail of the prefix, never the variable-length code.
bool verifier_bit_y(std::uint64_t x, std::uint64_t z, const BitString& prefix,
                    const ProtocolParams& p);

// Verification bit of the player seeing (y, z): decodes the carry code from
// the front of the prefix (y suffices to parse it) and checks the norm.
bool verifier_bit_x(std::uint64_t y, std::uint64_t z, const BitString& prefix,
                    const ProtocolParams& p);

// One run on x, y in [0, n] and z in [0, 2n]; accepts iff x + y == z.
Outcome run_typical(std::uint64_t x, std::uint64_t y, std::uint64_t z,
                    const ProtocolParams& p);

// Forehead form: accepts iff x + y + z == n, for x, y, z in [0, n].
Outcome exactly_n(std::uint64_t x, std::uint64_t y, std::uint64_t z,
                  const ProtocolParams& p);

// Shifted run: the first family shift moving (x, y) into `good` is announced
// as an index, and the typical protocol runs on the shifted triple. A shifted
// z outside [0, 2n] makes both verifiers vote reject on sight. Throws
// std::runtime_error if no shift in the family works.
Outcome run_smeared(std::uint64_t x, std::uint64_t y, std::uint64_t z,
                    const ProtocolParams& p, const ShiftFamily& family,
                    const GridSet& good);

enum class Mode { typical, smeared };

struct SamplePlan {
  std::uint64_t samples = 0;  // 0: exhaust all pairs (grid permitting)
  std::uint64_t seed = 0;
};

struct CostReport {
  Mode mode = Mode::typical;
  std::uint64_t pairs = 0;
  std::size_t min_bits = 0;
  double mean_bits = 0.0;
  std::size_t max_bits = 0;
  std::uint64_t good_pairs = 0;
  double good_fraction = 0.0;
  std::size_t max_good_bits = 0;  // worst cost among good pairs
  std::uint64_t family_size = 0;  // smeared runs
  unsigned shift_width = 0;       // smeared runs
};

// Transcript length statistics over pairs (x, y); z never affects length.
// Smeared mode builds the good set and its greedy cover internally.
CostReport measure_costs(const ProtocolParams& p, Mode mode, const SamplePlan& plan);

}  // namespace exactn
