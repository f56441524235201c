#pragma once

// Corner-free structure extracted from the protocol. Grouping good pairs by
// their pair-determined prefix partitions them into classes in which no two
// distinct pairs can share a prefix while disagreeing about any candidate
// sum, which forbids corners {(x, y), (x+delta, y), (x, y+delta)} outright.
// A classical difference-set construction serves as the density baseline.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "exactn/bitstring.hpp"
#include "exactn/protocol.hpp"
#include "exactn/radix.hpp"
#include "exactn/shift_cover.hpp"

namespace exactn {

struct TranscriptClasses {
  std::uint64_t n = 0;
  // Prefix bits -> member pairs, each list in (y, x) scan order.
  std::map<BitString, std::vector<GridPoint>> by_prefix;
};

// Partitions all good pairs of [0, n]^2 by typical-mode prefix.
TranscriptClasses transcript_classes(const ProtocolParams& p);

// The biggest class as a grid set; ties go to the smallest prefix. Throws
// std::invalid_argument when there are no classes at all.
GridSet largest_class(const TranscriptClasses& classes);

struct CornerWitness {
  std::uint64_t x = 0, y = 0;
  std::int64_t delta = 0;  // nonzero
};

// First corner in the set, scanning y, then x, then delta ascending; nullopt
// when the set is corner-free.
std::optional<CornerWitness> verify_corner_free(const GridSet& s);

// {(x, y) in [0, n)^2 : x - y in diffs}, as a grid set over [0, n]^2 whose
// top row and column stay empty.
GridSet difference_grid(std::uint64_t n, const std::vector<std::int64_t>& diffs);

// Subset of [0, m) with no three-term arithmetic progression: digit vectors
// on a sphere, maximized over base and dimension, falling back to {0, 1}
// when every sphere is a single point.
std::vector<std::uint64_t> behrend_ap3_set(std::uint64_t m);

// Baseline corner-free subset of [0, n)^2: pairs whose difference lies in a
// recentered progression-free set of [0, 2n - 1).
GridSet behrend_corner_free(std::uint64_t n);

struct DensityRow {
  std::uint64_t n = 0;
  std::uint64_t d = 0, q = 0, r = 0, budget = 0;
  std::uint64_t good_size = 0;
  double good_fraction = 0.0;
  std::uint64_t class_count = 0;
  std::uint64_t largest_class_size = 0;
  double protocol_density = 0.0;  // largest class / (n+1)^2
  std::uint64_t behrend_size = 0;
  double behrend_density = 0.0;   // baseline / n^2
};

DensityRow density_report(const ProtocolParams& p);

}  // namespace exactn
