#include "exactn/shift_cover.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "exactn/carry_code.hpp"

namespace exactn {
namespace {

using u128 = unsigned __int128;

// (n+1)^2 bits at the ceiling is ~32 MB; anything bigger is a caller bug.
constexpr std::uint64_t kMaxGridN = 16384;

std::uint64_t tail_mask(std::uint64_t n) {
  unsigned used = static_cast<unsigned>((n + 1) % 64);
  return used == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << used) - 1;
}

// Word w of a row shifted left by dx bits (dx may be negative), reading
// beyond-range source bits as zero.
std::uint64_t shifted_word(std::span<const std::uint64_t> src, std::size_t w,
                           std::int64_t dx) {
  std::int64_t base = static_cast<std::int64_t>(w) * 64 - dx;  // src bit index
  std::int64_t fw = base >= 0 ? base / 64 : -((-base + 63) / 64);
  unsigned off = static_cast<unsigned>(base - fw * 64);
  auto word_at = [&](std::int64_t i) -> std::uint64_t {
    return (i < 0 || i >= static_cast<std::int64_t>(src.size())) ? 0 : src[i];
  };
  std::uint64_t lo = word_at(fw) >> off;
  std::uint64_t hi = off == 0 ? 0 : word_at(fw + 1) << (64 - off);
  return lo | hi;
}

struct Bitmap {
  std::uint64_t n = 0;
  std::size_t wpr = 0;
  std::vector<std::uint64_t> words;

  explicit Bitmap(std::uint64_t grid_n, bool full) : n(grid_n) {
    wpr = (n + 1 + 63) / 64;
    words.assign((n + 1) * wpr, full ? ~std::uint64_t{0} : 0);
    if (full) {
      for (std::uint64_t y = 0; y <= n; ++y) words[y * wpr + wpr - 1] = tail_mask(n);
    }
  }

  std::span<std::uint64_t> row(std::uint64_t y) { return {words.data() + y * wpr, wpr}; }
  std::span<const std::uint64_t> row(std::uint64_t y) const {
    return {words.data() + y * wpr, wpr};
  }

  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (std::uint64_t w : words) c += std::popcount(w);
    return c;
  }
};

std::uint64_t gain_of_shift(const Bitmap& unc, const GridSet& s, std::int64_t dx,
                            std::int64_t dy) {
  const std::uint64_t n = s.n();
  std::uint64_t g = 0;
  std::int64_t y_lo = dy > 0 ? dy : 0;
  std::int64_t y_hi = static_cast<std::int64_t>(n) + (dy < 0 ? dy : 0);
  for (std::int64_t y = y_lo; y <= y_hi; ++y) {
    auto src = s.row(static_cast<std::uint64_t>(y - dy));
    auto dst = unc.row(static_cast<std::uint64_t>(y));
    for (std::size_t w = 0; w < dst.size(); ++w)
      g += std::popcount(dst[w] & shifted_word(src, w, dx));
  }
  return g;
}

void remove_shifted(Bitmap& unc, const GridSet& s, std::int64_t dx, std::int64_t dy) {
  const std::uint64_t n = s.n();
  std::int64_t y_lo = dy > 0 ? dy : 0;
  std::int64_t y_hi = static_cast<std::int64_t>(n) + (dy < 0 ? dy : 0);
  for (std::int64_t y = y_lo; y <= y_hi; ++y) {
    auto src = s.row(static_cast<std::uint64_t>(y - dy));
    auto dst = unc.row(static_cast<std::uint64_t>(y));
    for (std::size_t w = 0; w < dst.size(); ++w)
      dst[w] &= ~shifted_word(src, w, dx);
  }
}

std::optional<GridPoint> first_set_point(const Bitmap& map) {
  for (std::uint64_t y = 0; y <= map.n; ++y) {
    auto r = map.row(y);
    for (std::size_t w = 0; w < r.size(); ++w) {
      if (r[w] != 0)
        return GridPoint{w * 64 + static_cast<std::uint64_t>(std::countr_zero(r[w])), y};
    }
  }
  return std::nullopt;
}

std::optional<GridPoint> first_member(const GridSet& s) {
  for (std::uint64_t y = 0; y <= s.n(); ++y) {
    auto r = s.row(y);
    for (std::size_t w = 0; w < r.size(); ++w) {
      if (r[w] != 0)
        return GridPoint{w * 64 + static_cast<std::uint64_t>(std::countr_zero(r[w])), y};
    }
  }
  return std::nullopt;
}

// Unbiased [0, bound) draw; uniform_int_distribution is not pinned down by
// the standard, and these sequences are part of reproducible output.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t v = rng();
    if (v >= threshold) return (v - threshold) % bound;
  }
}

ShiftFamily cover_loop(const GridSet& s, bool full_scan, std::uint64_t pool_size,
                       std::uint64_t seed, std::uint64_t max_rounds) {
  const std::uint64_t n = s.n();
  if (s.size() == 0) throw std::runtime_error("cannot cover the grid with an empty set");

  Bitmap unc(n, true);
  std::uint64_t remaining = unc.count();
  GridPoint anchor = *first_member(s);
  std::mt19937_64 rng(seed);
  const std::int64_t span = 2 * static_cast<std::int64_t>(n) + 1;

  ShiftFamily family;
  std::uint64_t rounds = 0;
  while (remaining > 0) {
    if (max_rounds != 0 && rounds++ >= max_rounds)
      throw std::runtime_error("no cover found within the round limit");

    Shift best{0, 0};
    std::uint64_t best_gain = 0;
    auto consider = [&](std::int64_t dx, std::int64_t dy) {
      std::uint64_t g = gain_of_shift(unc, s, dx, dy);
      if (g > best_gain || (g == best_gain && g > 0 && Shift{dx, dy} < best)) {
        best = Shift{dx, dy};
        best_gain = g;
      }
    };

    if (full_scan) {
      for (std::int64_t dx = -static_cast<std::int64_t>(n); dx <= static_cast<std::int64_t>(n); ++dx)
        for (std::int64_t dy = -static_cast<std::int64_t>(n); dy <= static_cast<std::int64_t>(n); ++dy)
          consider(dx, dy);
    } else {
      // A shift moving the first member onto the first uncovered point makes
      // progress whatever the sample does.
      GridPoint hole = *first_set_point(unc);
      consider(static_cast<std::int64_t>(hole.x) - static_cast<std::int64_t>(anchor.x),
               static_cast<std::int64_t>(hole.y) - static_cast<std::int64_t>(anchor.y));
      for (std::uint64_t t = 0; t < pool_size; ++t) {
        std::int64_t dx = static_cast<std::int64_t>(uniform_below(rng, span)) -
                          static_cast<std::int64_t>(n);
        std::int64_t dy = static_cast<std::int64_t>(uniform_below(rng, span)) -
                          static_cast<std::int64_t>(n);
        consider(dx, dy);
      }
    }

    family.shifts.push_back(best);
    remove_shifted(unc, s, best.dx, best.dy);
    remaining -= best_gain;
  }
  return family;
}

std::invalid_argument parse_error(std::size_t line_no, const std::string& why) {
  return std::invalid_argument("line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

GridSet::GridSet(std::uint64_t n) : n_(n) {
  if (n < 1) throw std::invalid_argument("grid set: n must be at least 1");
  if (n > kMaxGridN) throw std::invalid_argument("grid set: n exceeds the 16384 ceiling");
  wpr_ = (n + 1 + 63) / 64;
  bits_.assign((n + 1) * wpr_, 0);
}

void GridSet::insert(std::uint64_t x, std::uint64_t y) {
  if (x > n_ || y > n_) throw std::out_of_range("grid set: point outside [0, n]^2");
  std::uint64_t& w = bits_[y * wpr_ + x / 64];
  std::uint64_t bit = std::uint64_t{1} << (x % 64);
  if (!(w & bit)) {
    w |= bit;
    ++size_;
  }
}

void GridSet::erase(std::uint64_t x, std::uint64_t y) {
  if (x > n_ || y > n_) throw std::out_of_range("grid set: point outside [0, n]^2");
  std::uint64_t& w = bits_[y * wpr_ + x / 64];
  std::uint64_t bit = std::uint64_t{1} << (x % 64);
  if (w & bit) {
    w &= ~bit;
    --size_;
  }
}

GridSet good_set(const ProtocolParams& p) {
  GridSet g(p.n);
  DigitVec yd(p.d, 0), xd(p.d, 0);
  CarryVector c(p.d);
  auto bump = [&](DigitVec& v) {
    for (auto& e : v) {
      if (static_cast<std::uint64_t>(e) + 1 < p.q) {
        ++e;
        return;
      }
      e = 0;
    }
  };
  for (std::uint64_t y = 0; y <= p.n; ++y) {
    std::fill(xd.begin(), xd.end(), 0);
    for (std::uint64_t x = 0; x <= p.n; ++x) {
      std::uint8_t carry = 0;
      for (std::uint64_t i = 0; i < p.d; ++i) {
        carry = (static_cast<std::uint64_t>(xd[i] + yd[i]) + carry >= p.q) ? 1 : 0;
        c[i] = carry;
      }
      if (carry_code_length(c, yd, p) <= p.budget) g.insert(x, y);
      bump(xd);
    }
    bump(yd);
  }
  return g;
}

bool fractional_cover_check(const GridSet& s) {
  return u128(10) * s.size() >= u128(s.n()) * s.n();
}

ShiftFamily greedy_cover(const GridSet& s, const ProtocolParams& p) {
  if (p.n != s.n())
    throw std::invalid_argument("greedy_cover: params and set disagree on n");
  return cover_loop(s, s.n() <= 512, 4096, 0, 0);
}

ShiftFamily randomized_cover(const GridSet& s, const ProtocolParams& p,
                             std::uint64_t seed, std::uint64_t max_rounds) {
  if (p.n != s.n())
    throw std::invalid_argument("randomized_cover: params and set disagree on n");
  return cover_loop(s, false, 256, seed, max_rounds);
}

std::optional<GridPoint> verify_cover(const GridSet& s, const ShiftFamily& family) {
  const std::uint64_t n = s.n();
  Bitmap unc(n, true);
  for (const Shift& sh : family.shifts) remove_shifted(unc, s, sh.dx, sh.dy);
  return first_set_point(unc);
}

void save_grid_set(const GridSet& s, std::ostream& out) {
  out << "N " << s.n() << "\n";
  for (std::uint64_t y = 0; y <= s.n(); ++y)
    for (std::uint64_t x = 0; x <= s.n(); ++x)
      if (s.contains(static_cast<std::int64_t>(x), static_cast<std::int64_t>(y)))
        out << x << " " << y << "\n";
}

GridSet load_grid_set(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::uint64_t n = 0;
  bool have_header = false;
  std::optional<GridSet> set;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string tag;
      if (!(ls >> tag >> n) || tag != "N")
        throw parse_error(line_no, "expected header 'N <size>'");
      std::string extra;
      if (ls >> extra) throw parse_error(line_no, "trailing token after header");
      set.emplace(n);
      have_header = true;
      continue;
    }
    std::int64_t x = 0, y = 0;
    if (!(ls >> x >> y)) throw parse_error(line_no, "expected 'x y'");
    std::string extra;
    if (ls >> extra) throw parse_error(line_no, "trailing token after point");
    if (x < 0 || y < 0 || static_cast<std::uint64_t>(x) > n ||
        static_cast<std::uint64_t>(y) > n)
      throw parse_error(line_no, "point outside [0, n]^2");
    if (set->contains(x, y)) throw parse_error(line_no, "duplicate point");
    set->insert(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y));
  }
  if (!have_header) throw std::invalid_argument("grid set file is missing its header");
  return std::move(*set);
}

void save_shift_family(const ShiftFamily& family, std::ostream& out) {
  for (const Shift& sh : family.shifts) out << sh.dx << " " << sh.dy << "\n";
}

ShiftFamily load_shift_family(std::istream& in) {
  ShiftFamily family;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::int64_t dx = 0, dy = 0;
    if (!(ls >> dx >> dy)) throw parse_error(line_no, "expected 'dx dy'");
    std::string extra;
    if (ls >> extra) throw parse_error(line_no, "trailing token after shift");
    family.shifts.push_back(Shift{dx, dy});
  }
  return family;
}

}  // namespace exactn
