// Command-line front end: parameter inspection, single runs, correctness
// sweeps, cost measurement, and construction/verification of corner-free
// sets and translate covers.
//
// Exit codes: 0 success (and verified), 1 verification failure, 2 usage or
// configuration error.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "exactn/corner_sets.hpp"
#include "exactn/protocol.hpp"

using nlohmann::json;
using namespace exactn;

namespace {

struct CommonOpts {
  std::uint64_t n = 0;
  std::optional<std::uint64_t> q, d, r, slack;
  std::string format = "table";
  std::string mode = "typical";
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
};

// Grid-wide commands enumerate (n+1)^2 pairs; past this they refuse rather
// than crawl.
constexpr std::uint64_t kGridCommandCap = 4095;
// Exhaustive triple sweeps are (n+1)^3.
constexpr std::uint64_t kExhaustiveVerifyCap = 128;

void add_param_opts(CLI::App* cmd, CommonOpts& c, bool with_sampling) {
  cmd->add_option("--n", c.n, "problem size: inputs range over [0, n]")->required();
  cmd->add_option("--q", c.q, "override the digit radix");
  cmd->add_option("--d", c.d, "override the digit count");
  cmd->add_option("--r", c.r, "override the carry-code bucket count");
  cmd->add_option("--budget-slack", c.slack, "override the budget slack term");
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"table", "json-lines"}));
  if (with_sampling) {
    cmd->add_option("--seed", c.seed, "seed for sampled sweeps");
    cmd->add_option("--samples", c.samples,
                    "sample count (0 = exhaustive where permitted)");
    cmd->add_option("--mode", c.mode, "protocol mode")
        ->check(CLI::IsMember({"typical", "smeared"}));
  }
}

ProtocolParams params_from(const CommonOpts& c) {
  ParamOverrides ov;
  ov.q = c.q;
  ov.d = c.d;
  ov.r = c.r;
  ov.budget_slack = c.slack;
  ProtocolParams p = select_params(c.n, ov);
  if (!p.asymptotic)
    std::cerr << "warning: q^d reaches 2qn at this size; cost analysis is loose\n";
  return p;
}

bool json_mode(const CommonOpts& c) { return c.format == "json-lines"; }

json config_json(const std::string& command, const CommonOpts& c) {
  json j{{"record", "config"}, {"command", command}, {"n", c.n},
         {"seed", c.seed},     {"samples", c.samples}, {"mode", c.mode},
         {"format", c.format}};
  if (c.q) j["q"] = *c.q;
  if (c.d) j["d"] = *c.d;
  if (c.r) j["r"] = *c.r;
  if (c.slack) j["budget_slack"] = *c.slack;
  return j;
}

void echo_config(const std::string& command, const CommonOpts& c) {
  if (json_mode(c)) {
    std::cout << config_json(command, c).dump() << "\n";
    return;
  }
  std::cout << "config: command=" << command << " n=" << c.n;
  if (c.q) std::cout << " q=" << *c.q;
  if (c.d) std::cout << " d=" << *c.d;
  if (c.r) std::cout << " r=" << *c.r;
  if (c.slack) std::cout << " budget_slack=" << *c.slack;
  std::cout << " seed=" << c.seed << " samples=" << c.samples << " mode=" << c.mode
            << " format=" << c.format << "\n";
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

void require_grid_scale(std::uint64_t n, const char* command) {
  if (n > kGridCommandCap)
    throw std::invalid_argument(std::string(command) + ": n exceeds the " +
                                std::to_string(kGridCommandCap) +
                                " ceiling for grid-wide commands");
}

int cmd_params(const CommonOpts& c) {
  ProtocolParams p = params_from(c);
  unsigned norm_w = protocol_norm_width(p);
  double lambda_d = kLambda * static_cast<double>(p.d);
  double leading = 2.0 * std::sqrt(2.0 * kLambda * std::log2(2.0 * static_cast<double>(c.n)));
  echo_config("params", c);
  if (json_mode(c)) {
    std::cout << json{{"record", "params"},
                      {"n", p.n},
                      {"d", p.d},
                      {"q", p.q},
                      {"r", p.r},
                      {"budget", p.budget},
                      {"asymptotic", p.asymptotic},
                      {"norm_width", norm_w},
                      {"lambda_d", lambda_d},
                      {"leading_order_bits", leading}}
                     .dump()
              << "\n";
  } else {
    std::cout << "params: n=" << p.n << " d=" << p.d << " q=" << p.q << " r=" << p.r
              << " budget=" << p.budget
              << " asymptotic=" << (p.asymptotic ? "yes" : "no") << "\n";
    std::cout << "cost: lambda_d=" << fmt(lambda_d) << " norm_width=" << norm_w
              << " fixed_tail=" << norm_w + 2
              << " leading_order_bits=" << fmt(leading) << "\n";
  }
  return 0;
}

int cmd_simulate(const CommonOpts& c, std::uint64_t x, std::uint64_t y,
                 std::uint64_t z) {
  ProtocolParams p = params_from(c);
  echo_config("simulate", c);
  Outcome o;
  if (c.mode == "smeared") {
    require_grid_scale(c.n, "simulate --mode smeared");
    GridSet good = good_set(p);
    ShiftFamily family = greedy_cover(good, p);
    if (z > p.n) throw std::out_of_range("simulate: z must lie in [0, n]");
    o = run_smeared(x, y, p.n - z, p, family, good);
  } else {
    o = exactly_n(x, y, z, p);
  }
  const Transcript& t = o.transcript;
  if (json_mode(c)) {
    json j{{"record", "result"},
           {"accept", o.accept},
           {"cost_bits", o.cost_bits},
           {"good_pair", o.good_pair},
           {"carry_code", to_string(t.carry_code)},
           {"announced_norm", t.announced_norm},
           {"norm_width", t.norm_width},
           {"bit_y", t.bit_y},
           {"bit_x", t.bit_x}};
    if (t.shift_index) {
      j["shift_index"] = *t.shift_index;
      j["shift_width"] = t.shift_width;
    }
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "transcript:";
    if (t.shift_index)
      std::cout << " shift_index=" << *t.shift_index << " shift_width=" << t.shift_width;
    std::cout << " carry_code=" << to_string(t.carry_code)
              << " announced_norm=" << t.announced_norm
              << " norm_width=" << t.norm_width << " bit_y=" << t.bit_y
              << " bit_x=" << t.bit_x << "\n";
    std::cout << "result: " << (o.accept ? "accept" : "reject")
              << " cost_bits=" << o.cost_bits
              << " good_pair=" << (o.good_pair ? "yes" : "no") << "\n";
  }
  return 0;
}

int cmd_verify(const CommonOpts& c, bool inject_fault) {
  ProtocolParams p = params_from(c);
  echo_config("verify", c);
  if (inject_fault && c.mode != "typical")
    throw std::invalid_argument("verify: fault injection supports typical mode only");
  if (c.samples == 0 && c.n > kExhaustiveVerifyCap)
    throw std::invalid_argument(
        "verify: n exceeds the exhaustive ceiling (128); pass --samples");

  GridSet good(1);
  ShiftFamily family;
  if (c.mode == "smeared") {
    require_grid_scale(c.n, "verify --mode smeared");
    good = good_set(p);
    family = greedy_cover(good, p);
  }

  std::uint64_t checked = 0, mismatches = 0;
  std::optional<std::array<std::uint64_t, 3>> first_bad;

  auto check_triple = [&](std::uint64_t X, std::uint64_t Y, std::uint64_t Z) {
    bool expected = (X + Y + Z == p.n);
    bool got;
    if (c.mode == "smeared") {
      got = run_smeared(X, Y, p.n - Z, p, family, good).accept;
    } else if (inject_fault) {
      // Corrupt the first carry-code bit of the board and re-run both
      // verifiers; the sweep must notice that something no longer matches.
      BitString prefix = transcript_prefix(X, Y, p);
      prefix[0] = !prefix[0];
      bool by = verifier_bit_y(X, p.n - Z, prefix, p);
      bool bx = false;
      try {
        bx = verifier_bit_x(Y, p.n - Z, prefix, p);
      } catch (const std::invalid_argument&) {
        bx = false;  // malformed board: the verifier votes reject
      }
      got = by && bx;
    } else {
      got = exactly_n(X, Y, Z, p).accept;
    }
    ++checked;
    if (got != expected) {
      ++mismatches;
      if (!first_bad) first_bad = {X, Y, Z};
    }
  };

  if (c.samples == 0) {
    for (std::uint64_t X = 0; X <= p.n; ++X)
      for (std::uint64_t Y = 0; Y <= p.n; ++Y)
        for (std::uint64_t Z = 0; Z <= p.n; ++Z) check_triple(X, Y, Z);
  } else {
    std::mt19937_64 rng(c.seed);
    auto draw = [&](std::uint64_t bound) {
      std::uint64_t threshold = (0 - bound) % bound;
      for (;;) {
        std::uint64_t v = rng();
        if (v >= threshold) return (v - threshold) % bound;
      }
    };
    for (std::uint64_t t = 0; t < c.samples; ++t)
      check_triple(draw(p.n + 1), draw(p.n + 1), draw(p.n + 1));
  }

  if (json_mode(c)) {
    json j{{"record", "verify"},
           {"checked", checked},
           {"mismatches", mismatches},
           {"ok", mismatches == 0}};
    if (first_bad)
      j["first_mismatch"] = {{"x", (*first_bad)[0]}, {"y", (*first_bad)[1]},
                             {"z", (*first_bad)[2]}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "verify: checked=" << checked << " mismatches=" << mismatches << "\n";
    if (first_bad)
      std::cout << "first mismatch at x=" << (*first_bad)[0] << " y=" << (*first_bad)[1]
                << " z=" << (*first_bad)[2] << "\n";
  }
  return mismatches == 0 ? 0 : 1;
}

int cmd_measure(const CommonOpts& c) {
  ProtocolParams p = params_from(c);
  echo_config("measure", c);
  if (c.mode == "smeared") require_grid_scale(c.n, "measure --mode smeared");
  if (c.samples == 0) require_grid_scale(c.n, "measure (exhaustive)");
  Mode mode = c.mode == "smeared" ? Mode::smeared : Mode::typical;
  CostReport rep = measure_costs(p, mode, SamplePlan{c.samples, c.seed});
  if (json_mode(c)) {
    json j{{"record", "measure"},
           {"mode", c.mode},
           {"pairs", rep.pairs},
           {"min_bits", rep.min_bits},
           {"mean_bits", rep.mean_bits},
           {"max_bits", rep.max_bits},
           {"good_fraction", rep.good_fraction},
           {"max_good_bits", rep.max_good_bits},
           {"budget", p.budget}};
    if (mode == Mode::smeared) {
      j["family_size"] = rep.family_size;
      j["shift_width"] = rep.shift_width;
    }
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "measure: pairs=" << rep.pairs << " min=" << rep.min_bits
              << " mean=" << fmt(rep.mean_bits) << " max=" << rep.max_bits
              << " good_fraction=" << fmt(rep.good_fraction)
              << " max_good=" << rep.max_good_bits << " budget=" << p.budget;
    if (mode == Mode::smeared)
      std::cout << " family_size=" << rep.family_size
                << " shift_width=" << rep.shift_width;
    std::cout << "\n";
  }
  return 0;
}

int cmd_build_set(const CommonOpts& c, const std::string& out_path) {
  ProtocolParams p = params_from(c);
  echo_config("build-set", c);
  require_grid_scale(c.n, "build-set");
  TranscriptClasses classes = transcript_classes(p);
  GridSet set = largest_class(classes);
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("build-set: cannot open " + out_path);
  save_grid_set(set, out);
  if (json_mode(c)) {
    std::cout << json{{"record", "build-set"},
                      {"classes", classes.by_prefix.size()},
                      {"size", set.size()},
                      {"out", out_path}}
                     .dump()
              << "\n";
  } else {
    std::cout << "build-set: classes=" << classes.by_prefix.size()
              << " largest=" << set.size() << " written=" << out_path << "\n";
  }
  return 0;
}

int cmd_check_set(const CommonOpts& c, const std::string& in_path) {
  echo_config("check-set", c);
  std::ifstream in(in_path);
  if (!in) throw std::invalid_argument("check-set: cannot open " + in_path);
  GridSet set = load_grid_set(in);
  std::optional<CornerWitness> w = verify_corner_free(set);
  if (json_mode(c)) {
    json j{{"record", "check-set"}, {"n", set.n()}, {"size", set.size()},
           {"corner_free", !w.has_value()}};
    if (w) j["witness"] = {{"x", w->x}, {"y", w->y}, {"delta", w->delta}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "check-set: n=" << set.n() << " size=" << set.size() << " "
              << (w ? "CORNER FOUND" : "corner-free") << "\n";
    if (w)
      std::cout << "witness: x=" << w->x << " y=" << w->y << " delta=" << w->delta
                << "\n";
  }
  return w ? 1 : 0;
}

int cmd_compare(const CommonOpts& c) {
  ProtocolParams p = params_from(c);
  echo_config("compare", c);
  require_grid_scale(c.n, "compare");
  DensityRow row = density_report(p);
  if (json_mode(c)) {
    std::cout << json{{"record", "compare"},
                      {"n", row.n},
                      {"d", row.d},
                      {"q", row.q},
                      {"r", row.r},
                      {"budget", row.budget},
                      {"good_size", row.good_size},
                      {"good_fraction", row.good_fraction},
                      {"class_count", row.class_count},
                      {"largest_class", row.largest_class_size},
                      {"protocol_density", row.protocol_density},
                      {"behrend_size", row.behrend_size},
                      {"behrend_density", row.behrend_density}}
                     .dump()
              << "\n";
  } else {
    std::cout << "compare: n=" << row.n << " good=" << row.good_size << " ("
              << fmt(row.good_fraction) << ") classes=" << row.class_count
              << " largest=" << row.largest_class_size << " ("
              << fmt(row.protocol_density) << ") baseline=" << row.behrend_size
              << " (" << fmt(row.behrend_density) << ")\n";
  }
  return 0;
}

int cmd_cover(const CommonOpts& c, const std::string& algo,
              std::uint64_t rounds, const std::string& out_path) {
  ProtocolParams p = params_from(c);
  echo_config("cover", c);
  require_grid_scale(c.n, "cover");
  GridSet good = good_set(p);
  bool dense_enough = fractional_cover_check(good);
  ShiftFamily family = algo == "random" ? randomized_cover(good, p, c.seed, rounds)
                                        : greedy_cover(good, p);
  std::optional<GridPoint> miss = verify_cover(good, family);
  double bound = 80.0 * std::log2(static_cast<double>(std::max<std::uint64_t>(c.n, 2)));
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cover: cannot open " + out_path);
    save_shift_family(family, out);
  }
  if (json_mode(c)) {
    json j{{"record", "cover"},
           {"good_size", good.size()},
           {"dense_enough", dense_enough},
           {"family_size", family.shifts.size()},
           {"size_bound", bound},
           {"covered", !miss.has_value()}};
    if (!out_path.empty()) j["out"] = out_path;
    if (miss) j["uncovered"] = {{"x", miss->x}, {"y", miss->y}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "cover: good=" << good.size()
              << " dense_enough=" << (dense_enough ? "yes" : "no")
              << " family_size=" << family.shifts.size()
              << " size_bound=" << fmt(bound)
              << " covered=" << (miss ? "NO" : "yes");
    if (!out_path.empty()) std::cout << " written=" << out_path;
    std::cout << "\n";
    if (miss) std::cout << "uncovered: x=" << miss->x << " y=" << miss->y << "\n";
  }
  return miss ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exactly-n addition protocol toolkit"};
  app.require_subcommand(1);

  int rc = 0;

  CommonOpts params_opts;
  CLI::App* params = app.add_subcommand("params", "derive and print parameters");
  add_param_opts(params, params_opts, false);
  params->callback([&] { rc = cmd_params(params_opts); });

  CommonOpts sim_opts;
  std::uint64_t sim_x = 0, sim_y = 0, sim_z = 0;
  CLI::App* simulate =
      app.add_subcommand("simulate", "run one exactly-n instance and show the board");
  add_param_opts(simulate, sim_opts, true);
  simulate->add_option("--x", sim_x, "first player's forehead value")->required();
  simulate->add_option("--y", sim_y, "second player's forehead value")->required();
  simulate->add_option("--z", sim_z, "third player's forehead value")->required();
  simulate->callback([&] { rc = cmd_simulate(sim_opts, sim_x, sim_y, sim_z); });

  CommonOpts verify_opts;
  bool inject_fault = false;
  CLI::App* verify = app.add_subcommand(
      "verify", "sweep triples against integer arithmetic (exhaustive up to n=128)");
  add_param_opts(verify, verify_opts, true);
  verify->add_flag("--inject-carry-fault", inject_fault)->group("");
  verify->callback([&] { rc = cmd_verify(verify_opts, inject_fault); });

  CommonOpts measure_opts;
  CLI::App* measure = app.add_subcommand("measure", "transcript length statistics");
  add_param_opts(measure, measure_opts, true);
  measure->callback([&] { rc = cmd_measure(measure_opts); });

  CommonOpts build_opts;
  std::string build_out;
  CLI::App* build = app.add_subcommand(
      "build-set", "extract the largest corner-free transcript class (n <= 4095)");
  add_param_opts(build, build_opts, false);
  build->add_option("--out", build_out, "output file for the grid set")->required();
  build->callback([&] { rc = cmd_build_set(build_opts, build_out); });

  CommonOpts check_opts;
  std::string check_in;
  CLI::App* check = app.add_subcommand("check-set", "re-verify a saved grid set");
  check->add_option("file", check_in, "grid set file")->required();
  check->add_option("--format", check_opts.format, "output format")
      ->check(CLI::IsMember({"table", "json-lines"}));
  check->callback([&] { rc = cmd_check_set(check_opts, check_in); });

  CommonOpts compare_opts;
  CLI::App* compare = app.add_subcommand(
      "compare", "protocol class vs. baseline densities (n <= 4095)");
  add_param_opts(compare, compare_opts, false);
  compare->callback([&] { rc = cmd_compare(compare_opts); });

  CommonOpts cover_opts;
  std::string cover_algo = "greedy";
  std::string cover_out;
  std::uint64_t cover_rounds = 4096;
  CLI::App* cover = app.add_subcommand(
      "cover", "build and verify a translate cover of the good set (n <= 4095)");
  add_param_opts(cover, cover_opts, true);
  cover->add_option("--algo", cover_algo, "cover construction")
      ->check(CLI::IsMember({"greedy", "random"}));
  cover->add_option("--rounds", cover_rounds, "round limit for --algo random");
  cover->add_option("--out", cover_out, "output file for the shift family");
  cover->callback([&] { rc = cmd_cover(cover_opts, cover_algo, cover_rounds, cover_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
