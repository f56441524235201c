#pragma once

// Dense subsets of the (n+1) x (n+1) input grid, and translate covers: small
// families of shifts whose translates of a good set blanket the whole grid,
// so every pair can be moved onto a good one.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "exactn/radix.hpp"

namespace exactn {

struct GridPoint {
  std::uint64_t x = 0, y = 0;
  bool operator==(const GridPoint&) const = default;
};

struct Shift {
  std::int64_t dx = 0, dy = 0;
  auto operator<=>(const Shift&) const = default;
};

struct ShiftFamily {
  std::vector<Shift> shifts;
};

// Bit matrix over [0, n]^2, one packed row per y so shifted-row intersections
// are word operations. Membership queries outside the grid return false;
// mutations outside it throw.
class GridSet {
 public:
  explicit GridSet(std::uint64_t n);

  std::uint64_t n() const { return n_; }
  std::uint64_t size() const { return size_; }
  std::size_t words_per_row() const { return wpr_; }

  bool contains(std::int64_t x, std::int64_t y) const {
    if (x < 0 || y < 0 || static_cast<std::uint64_t>(x) > n_ ||
        static_cast<std::uint64_t>(y) > n_)
      return false;
    return (bits_[static_cast<std::uint64_t>(y) * wpr_ + static_cast<std::uint64_t>(x) / 64] >>
            (x % 64)) & 1u;
  }

  void insert(std::uint64_t x, std::uint64_t y);
  void erase(std::uint64_t x, std::uint64_t y);

  std::span<const std::uint64_t> row(std::uint64_t y) const {
    return {bits_.data() + y * wpr_, wpr_};
  }

  bool operator==(const GridSet&) const = default;

 private:
  std::uint64_t n_ = 0;
  std::uint64_t size_ = 0;
  std::size_t wpr_ = 0;
  std::vector<std::uint64_t> bits_;
};

// All pairs whose carry code fits the length budget.
GridSet good_set(const ProtocolParams& p);

// Exact integer test 10 * |S| >= n^2: the threshold at which uniform weights
// 10 / n^2 on the shifts of S fractionally cover every grid point.
bool fractional_cover_check(const GridSet& s);

// Greedy translate cover by shifts in [-n, n]^2, largest uncovered gain
// first, ties to the lexicographically smallest (dx, dy). Above n = 512 each
// round scores a seeded sample of 4096 shifts plus one targeted shift that
// is guaranteed to make progress. Throws if s is empty.
ShiftFamily greedy_cover(const GridSet& s, const ProtocolParams& p);

// Sampled variant: per round, the best of 256 seeded random shifts plus the
// targeted one. Throws if no cover is found within max_rounds.
ShiftFamily randomized_cover(const GridSet& s, const ProtocolParams& p,
                             std::uint64_t seed, std::uint64_t max_rounds);

// First grid point no translate reaches (scanning y, then x), or nullopt if
// the family covers everything.
std::optional<GridPoint> verify_cover(const GridSet& s, const ShiftFamily& family);

// Text formats. Grid sets: "N <n>" header, then one "x y" line per member,
// ordered by y then x. Shift families: one "dx dy" line per shift, in family
// order. Loaders throw std::invalid_argument naming the offending line.
void save_grid_set(const GridSet& s, std::ostream& out);
GridSet load_grid_set(std::istream& in);
void save_shift_family(const ShiftFamily& family, std::ostream& out);
ShiftFamily load_shift_family(std::istream& in);

}  // namespace exactn
