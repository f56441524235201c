#include "exactn/protocol.hpp"

#include <bit>
#include <random>
#include <stdexcept>

namespace exactn {
namespace {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t v = rng();
    if (v >= threshold) return (v - threshold) % bound;
  }
}

void check_xy(std::uint64_t x, std::uint64_t y, const ProtocolParams& p) {
  if (x > p.n || y > p.n)
    throw std::out_of_range("protocol: x and y must lie in [0, n]");
}

std::uint64_t read_norm_tail(const BitString& prefix, unsigned norm_w) {
  if (prefix.size() < norm_w)
    throw std::invalid_argument("protocol: prefix shorter than its norm field");
  std::uint64_t v = 0;
  for (std::size_t i = prefix.size() - norm_w; i < prefix.size(); ++i)
    v = (v << 1) | (prefix[i] ? 1u : 0u);
  return v;
}

Transcript make_typical_transcript(std::uint64_t x, std::uint64_t y,
                                   const ProtocolParams& p) {
  Transcript t;
  DigitVec xd = to_digits(x, p);
  DigitVec yd = to_digits(y, p);
  CarryVector c = carry_vector(xd, yd, p);
  t.carry_code = encode_carry(c, yd, p);
  t.announced_norm = squared_distance(eta(yd, c, p), xd);
  t.norm_width = protocol_norm_width(p);
  return t;
}

// First family index whose shift lands (x, y) inside the good set.
std::optional<std::size_t> find_shift(std::uint64_t x, std::uint64_t y,
                                      const ShiftFamily& family, const GridSet& good) {
  for (std::size_t i = 0; i < family.shifts.size(); ++i) {
    const Shift& sh = family.shifts[i];
    std::int64_t sx = static_cast<std::int64_t>(x) - sh.dx;
    std::int64_t sy = static_cast<std::int64_t>(y) - sh.dy;
    if (good.contains(sx, sy)) return i;
  }
  return std::nullopt;
}

}  // namespace

unsigned protocol_norm_width(const ProtocolParams& p) {
  return norm_field_width(p.d, 2 * p.q - 1);
}

BitString Transcript::pair_prefix() const {
  BitString out;
  if (shift_index) append_field(out, *shift_index, shift_width);
  out.insert(out.end(), carry_code.begin(), carry_code.end());
  append_field(out, announced_norm, norm_width);
  return out;
}

BitString Transcript::bits() const {
  BitString out = pair_prefix();
  out.push_back(bit_y);
  out.push_back(bit_x);
  return out;
}

BitString transcript_prefix(std::uint64_t x, std::uint64_t y, const ProtocolParams& p) {
  check_xy(x, y, p);
  return make_typical_transcript(x, y, p).pair_prefix();
}

bool verifier_bit_y(std::uint64_t x, std::uint64_t z, const BitString& prefix,
                    const ProtocolParams& p) {
  std::uint64_t announced = read_norm_tail(prefix, protocol_norm_width(p));
  DigitVec xd = to_digits(x, p);
  DigitVec zd = to_digits(z, p);
  return announced == squared_distance_2x(xd, zd);
}

bool verifier_bit_x(std::uint64_t y, std::uint64_t z, const BitString& prefix,
                    const ProtocolParams& p) {
  unsigned norm_w = protocol_norm_width(p);
  if (prefix.size() < norm_w)
    throw std::invalid_argument("protocol: prefix shorter than its norm field");
  DigitVec yd = to_digits(y, p);
  BitReader in(prefix);
  CarryVector c = decode_carry_stream(in, yd, p);
  if (in.remaining() != norm_w)
    throw std::invalid_argument("protocol: carry code length disagrees with prefix");
  std::uint64_t announced = in.read_field(norm_w);
  DigitVec zd = to_digits(z, p);
  return announced == squared_distance_2x(eta(yd, c, p), zd);
}

Outcome run_typical(std::uint64_t x, std::uint64_t y, std::uint64_t z,
                    const ProtocolParams& p) {
  check_xy(x, y, p);
  if (z > 2 * p.n) throw std::out_of_range("protocol: z must lie in [0, 2n]");

  Outcome o;
  o.transcript = make_typical_transcript(x, y, p);
  BitString prefix = o.transcript.pair_prefix();
  o.transcript.bit_y = verifier_bit_y(x, z, prefix, p);
  o.transcript.bit_x = verifier_bit_x(y, z, prefix, p);
  o.accept = o.transcript.bit_y && o.transcript.bit_x;
  o.good_pair = o.transcript.carry_code.size() <= p.budget;
  o.cost_bits = o.transcript.length();
  return o;
}

Outcome exactly_n(std::uint64_t x, std::uint64_t y, std::uint64_t z,
                  const ProtocolParams& p) {
  if (x > p.n || y > p.n || z > p.n)
    throw std::out_of_range("exactly_n: inputs must lie in [0, n]");
  return run_typical(x, y, p.n - z, p);
}

Outcome run_smeared(std::uint64_t x, std::uint64_t y, std::uint64_t z,
                    const ProtocolParams& p, const ShiftFamily& family,
                    const GridSet& good) {
  check_xy(x, y, p);
  if (z > 2 * p.n) throw std::out_of_range("protocol: z must lie in [0, 2n]");
  if (good.n() != p.n)
    throw std::invalid_argument("run_smeared: good set size disagrees with params");

  std::optional<std::size_t> idx = find_shift(x, y, family, good);
  if (!idx)
    throw std::runtime_error("run_smeared: no family shift lands the pair in the good set");
  const Shift& sh = family.shifts[*idx];

  std::uint64_t sx = x - static_cast<std::uint64_t>(sh.dx);
  std::uint64_t sy = y - static_cast<std::uint64_t>(sh.dy);
  std::int64_t sz = static_cast<std::int64_t>(z) - sh.dx - sh.dy;

  Outcome o;
  o.transcript = make_typical_transcript(sx, sy, p);
  BitString typical = o.transcript.pair_prefix();  // before the shift field
  o.transcript.shift_index = static_cast<std::uint32_t>(*idx);
  o.transcript.shift_width =
      family.shifts.size() <= 1
          ? 0
          : static_cast<unsigned>(std::bit_width(family.shifts.size() - 1));
  if (sz >= 0 && sz <= static_cast<std::int64_t>(2 * p.n)) {
    // Verifiers act on the shifted triple; they can each compute sz locally.
    o.transcript.bit_y = verifier_bit_y(sx, static_cast<std::uint64_t>(sz), typical, p);
    o.transcript.bit_x = verifier_bit_x(sy, static_cast<std::uint64_t>(sz), typical, p);
  }  // otherwise both bits stay 0: the sum cannot match
  o.accept = o.transcript.bit_y && o.transcript.bit_x;
  o.good_pair = o.transcript.carry_code.size() <= p.budget;
  o.cost_bits = o.transcript.length();
  return o;
}

CostReport measure_costs(const ProtocolParams& p, Mode mode, const SamplePlan& plan) {
  CostReport rep;
  rep.mode = mode;

  GridSet good(1);
  ShiftFamily family;
  if (mode == Mode::smeared) {
    good = good_set(p);
    family = greedy_cover(good, p);
    rep.family_size = family.shifts.size();
    rep.shift_width =
        family.shifts.size() <= 1
            ? 0
            : static_cast<unsigned>(std::bit_width(family.shifts.size() - 1));
  }
  const unsigned norm_w = protocol_norm_width(p);
  const std::size_t fixed_tail = norm_w + 2;

  unsigned __int128 total = 0;
  rep.min_bits = SIZE_MAX;

  auto account = [&](std::uint64_t x, std::uint64_t y) {
    std::uint64_t cx = x, cy = y;
    std::size_t extra = 0;
    if (mode == Mode::smeared) {
      std::optional<std::size_t> idx = find_shift(x, y, family, good);
      if (!idx)
        throw std::runtime_error("measure_costs: cover misses a pair");
      cx = x - static_cast<std::uint64_t>(family.shifts[*idx].dx);
      cy = y - static_cast<std::uint64_t>(family.shifts[*idx].dy);
      extra = rep.shift_width;
    }
    DigitVec xd = to_digits(cx, p);
    DigitVec yd = to_digits(cy, p);
    CarryVector c = carry_vector(xd, yd, p);
    std::size_t code_len = carry_code_length(c, yd, p);
    std::size_t cost = extra + code_len + fixed_tail;
    ++rep.pairs;
    total += cost;
    rep.min_bits = std::min(rep.min_bits, cost);
    rep.max_bits = std::max(rep.max_bits, cost);
    if (code_len <= p.budget) {
      ++rep.good_pairs;
      rep.max_good_bits = std::max(rep.max_good_bits, cost);
    }
  };

  if (plan.samples == 0) {
    if (static_cast<unsigned __int128>(p.n + 1) * (p.n + 1) > (std::uint64_t{1} << 25))
      throw std::invalid_argument(
          "measure_costs: grid too large to exhaust; pass a sample count");
    for (std::uint64_t y = 0; y <= p.n; ++y)
      for (std::uint64_t x = 0; x <= p.n; ++x) account(x, y);
  } else {
    std::mt19937_64 rng(plan.seed);
    for (std::uint64_t t = 0; t < plan.samples; ++t)
      account(uniform_below(rng, p.n + 1), uniform_below(rng, p.n + 1));
  }

  rep.mean_bits = static_cast<double>(total) / static_cast<double>(rep.pairs);
  rep.good_fraction = static_cast<double>(rep.good_pairs) / static_cast<double>(rep.pairs);
  return rep;
}

}  // namespace exactn
