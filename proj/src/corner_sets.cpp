#include "exactn/corner_sets.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace exactn {
namespace {

// Enumeration ceiling for one digit box in the progression-free search.
constexpr std::uint64_t kBoxCap = std::uint64_t{1} << 24;

struct ShellChoice {
  std::uint64_t size = 0;
  std::uint64_t base = 0, dim = 0, radius_sq = 0;
};

// Walks every digit vector u in [0, half]^dim with value < m (most
// significant digit first, pruning on partial value) and reports
// (value, |u|^2) pairs.
template <typename Fn>
void walk_sphere_digits(std::uint64_t base, std::uint64_t dim, std::uint64_t half,
                        std::uint64_t m, Fn&& fn) {
  std::vector<std::uint64_t> powers(dim);
  std::uint64_t pw = 1;
  for (std::uint64_t i = 0; i < dim; ++i) {
    powers[i] = pw;
    pw *= base;
  }
  // Iterative DFS over digit choices, most significant position first.
  std::vector<std::uint64_t> digit(dim, 0);
  std::vector<std::uint64_t> value(dim + 1, 0);
  std::vector<std::uint64_t> norm(dim + 1, 0);
  std::uint64_t level = 0;
  for (;;) {
    if (level == dim) {
      fn(value[dim], norm[dim]);
      // Backtrack to the deepest level that can still advance.
      do {
        if (level == 0) return;
        --level;
      } while (digit[level] == half);
      ++digit[level];
    }
    std::uint64_t pos = dim - 1 - level;  // most significant first
    std::uint64_t v = value[level] + digit[level] * powers[pos];
    if (v >= m) {
      // Larger digits at this level only grow the value: backtrack.
      do {
        if (level == 0) return;
        --level;
      } while (digit[level] == half);
      ++digit[level];
      continue;
    }
    value[level + 1] = v;
    norm[level + 1] = norm[level] + digit[level] * digit[level];
    ++level;
    if (level < dim) digit[level] = 0;
  }
}

}  // namespace

TranscriptClasses transcript_classes(const ProtocolParams& p) {
  if (static_cast<unsigned __int128>(p.n + 1) * (p.n + 1) > (std::uint64_t{1} << 24))
    throw std::invalid_argument("transcript_classes: grid too large to enumerate");
  TranscriptClasses classes;
  classes.n = p.n;
  for (std::uint64_t y = 0; y <= p.n; ++y) {
    DigitVec yd = to_digits(y, p);
    for (std::uint64_t x = 0; x <= p.n; ++x) {
      DigitVec xd = to_digits(x, p);
      CarryVector c = carry_vector(xd, yd, p);
      CarryCode code = encode_carry(c, yd, p);
      if (code.size() > p.budget) continue;
      std::uint64_t norm = squared_distance(eta(yd, c, p), xd);
      BitString prefix = std::move(code);
      append_field(prefix, norm, protocol_norm_width(p));
      classes.by_prefix[std::move(prefix)].push_back(GridPoint{x, y});
    }
  }
  return classes;
}

GridSet largest_class(const TranscriptClasses& classes) {
  if (classes.by_prefix.empty())
    throw std::invalid_argument("largest_class: no classes to choose from");
  const std::vector<GridPoint>* best = nullptr;
  for (const auto& [prefix, members] : classes.by_prefix) {
    if (!best || members.size() > best->size()) best = &members;
  }
  GridSet out(classes.n);
  for (const GridPoint& pt : *best) out.insert(pt.x, pt.y);
  return out;
}

std::optional<CornerWitness> verify_corner_free(const GridSet& s) {
  const std::int64_t n = static_cast<std::int64_t>(s.n());
  for (std::int64_t y = 0; y <= n; ++y) {
    for (std::int64_t x = 0; x <= n; ++x) {
      if (!s.contains(x, y)) continue;
      for (std::int64_t delta = -x; x + delta <= n; ++delta) {
        if (delta == 0) continue;
        if (s.contains(x + delta, y) && s.contains(x, y + delta))
          return CornerWitness{static_cast<std::uint64_t>(x),
                               static_cast<std::uint64_t>(y), delta};
      }
    }
  }
  return std::nullopt;
}

GridSet difference_grid(std::uint64_t n, const std::vector<std::int64_t>& diffs) {
  GridSet out(n);
  for (std::int64_t c : diffs) {
    for (std::int64_t y = 0; y < static_cast<std::int64_t>(n); ++y) {
      std::int64_t x = y + c;
      if (x >= 0 && x < static_cast<std::int64_t>(n))
        out.insert(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y));
    }
  }
  return out;
}

std::vector<std::uint64_t> behrend_ap3_set(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("behrend_ap3_set: range must be nonempty");
  if (m <= 2) {
    std::vector<std::uint64_t> tiny;
    for (std::uint64_t v = 0; v < m; ++v) tiny.push_back(v);
    return tiny;
  }

  // Pass 1: count every sphere shell, keep the fullest (ties: smaller base,
  // then dimension, then radius).
  ShellChoice best;
  std::unordered_map<std::uint64_t, std::uint64_t> shell_count;
  for (std::uint64_t base = 2; base <= 40; ++base) {
    std::uint64_t half = (base - 1) / 2;
    for (std::uint64_t dim = 2; dim <= 20; ++dim) {
      unsigned __int128 box = 1;
      for (std::uint64_t i = 0; i < dim; ++i) box *= (half + 1);
      if (box > kBoxCap) break;
      shell_count.clear();
      walk_sphere_digits(base, dim, half, m,
                         [&](std::uint64_t, std::uint64_t norm) { ++shell_count[norm]; });
      for (const auto& [norm, count] : shell_count) {
        if (count > best.size ||
            (count == best.size &&
             std::tuple(base, dim, norm) <
                 std::tuple(best.base, best.dim, best.radius_sq))) {
          best = ShellChoice{count, base, dim, norm};
        }
      }
    }
  }

  // Digits bounded by half with no carries in pairwise sums force any
  // progression onto one sphere, where the midpoint of two distinct points
  // has strictly smaller norm. A one-point shell carries no structure, so
  // fall back to {0, 1}.
  if (best.size < 2) return {0, 1};

  std::vector<std::uint64_t> out;
  out.reserve(best.size);
  walk_sphere_digits(best.base, best.dim, (best.base - 1) / 2, m,
                     [&](std::uint64_t value, std::uint64_t norm) {
                       if (norm == best.radius_sq) out.push_back(value);
                     });
  std::sort(out.begin(), out.end());
  return out;
}

GridSet behrend_corner_free(std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("behrend_corner_free: n must be at least 2");
  std::vector<std::uint64_t> base = behrend_ap3_set(2 * n - 1);
  std::vector<std::int64_t> diffs;
  diffs.reserve(base.size());
  for (std::uint64_t a : base)
    diffs.push_back(static_cast<std::int64_t>(a) - static_cast<std::int64_t>(n - 1));
  return difference_grid(n, diffs);
}

DensityRow density_report(const ProtocolParams& p) {
  DensityRow row;
  row.n = p.n;
  row.d = p.d;
  row.q = p.q;
  row.r = p.r;
  row.budget = p.budget;

  GridSet good = good_set(p);
  row.good_size = good.size();
  row.good_fraction = static_cast<double>(good.size()) /
                      (static_cast<double>(p.n + 1) * static_cast<double>(p.n + 1));

  TranscriptClasses classes = transcript_classes(p);
  row.class_count = classes.by_prefix.size();
  for (const auto& [prefix, members] : classes.by_prefix)
    row.largest_class_size = std::max<std::uint64_t>(row.largest_class_size, members.size());
  row.protocol_density = static_cast<double>(row.largest_class_size) /
                         (static_cast<double>(p.n + 1) * static_cast<double>(p.n + 1));

  GridSet behrend = behrend_corner_free(p.n);
  row.behrend_size = behrend.size();
  row.behrend_density = static_cast<double>(behrend.size()) /
                        (static_cast<double>(p.n) * static_cast<double>(p.n));
  return row;
}

}  // namespace exactn
