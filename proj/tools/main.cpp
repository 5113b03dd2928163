#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "uavnet/allocation.hpp"
#include "uavnet/engine.hpp"
#include "uavnet/experiments.hpp"
#include "uavnet/io.hpp"
#include "uavnet/scenario.hpp"

namespace {

using namespace uavnet;

struct Options {
  std::string scenario_path;
  std::string out_dir;
  std::string seeds;
  std::string scheme = "ruin";
  int tmax = 100;
  double eps0 = 1e-6;
};

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  std::size_t used = 0;
  if (dots == std::string::npos) {
    const std::uint64_t a = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument("bad seed range: " + text);
    return {a, a};
  }
  const std::string lo = text.substr(0, dots);
  const std::string hi = text.substr(dots + 2);
  const std::uint64_t a = std::stoull(lo, &used);
  if (used != lo.size()) throw std::invalid_argument("bad seed range: " + text);
  const std::uint64_t b = std::stoull(hi, &used);
  if (used != hi.size()) throw std::invalid_argument("bad seed range: " + text);
  if (b < a) throw std::invalid_argument("seed range is backwards: " + text);
  return {a, b};
}

std::vector<Scheme> parse_schemes(const std::string& text) {
  if (text == "ruin") return {Scheme::ruin};
  if (text == "sinr") return {Scheme::sinr};
  if (text == "both") return {Scheme::ruin, Scheme::sinr};
  throw std::invalid_argument("unknown scheme: " + text);
}

// Collects output files plus their content hashes, then writes the
// key=value manifest that makes a rerun auditable.
class Manifest {
public:
  explicit Manifest(std::string dir) : dir_(std::move(dir)) {}

  void set(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
  }

  void add_file(const std::string& name, const std::string& content) {
    write_text_file(dir_ + "/" + name, content);
    hashes_.emplace_back(name, to_hex(fnv1a64(content)));
  }

  void finish(const std::string& command) {
    std::string text;
    for (const auto& [k, v] : entries_) text += k + "=" + v + "\n";
    std::sort(hashes_.begin(), hashes_.end());
    std::string combined;
    for (const auto& [name, hash] : hashes_) {
      text += "hash." + name + "=" + hash + "\n";
      combined += hash;
    }
    text += "hash.all=" + to_hex(fnv1a64(combined)) + "\n";
    write_text_file(dir_ + "/manifest_" + command + ".txt", text);
  }

private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::pair<std::string, std::string>> hashes_;
};

NetworkScenario load_or_default(const Options& opt) {
  NetworkScenario s = opt.scenario_path.empty()
                          ? generate_scenario(GenerationParams{}, 1)
                          : load_scenario_file(opt.scenario_path);
  const std::vector<Violation> violations = validate(s);
  if (!violations.empty()) {
    for (const Violation& v : violations)
      std::cerr << "scenario: " << v.code << ": " << v.message << "\n";
    throw std::invalid_argument("scenario failed validation");
  }
  return s;
}

Manifest open_manifest(const Options& opt, const std::string& command,
                       std::uint64_t seed_lo, std::uint64_t seed_hi) {
  std::filesystem::create_directories(opt.out_dir);
  Manifest man(opt.out_dir);
  man.set("command", command);
  man.set("scenario", opt.scenario_path.empty() ? "defaults" : opt.scenario_path);
  man.set("seeds", std::to_string(seed_lo) + ".." + std::to_string(seed_hi));
  man.set("scheme", opt.scheme);
  man.set("tmax", std::to_string(opt.tmax));
  man.set("eps0", fmt_double(opt.eps0));
  return man;
}

RunConfig make_config(const Options& opt) {
  RunConfig cfg;
  cfg.t_max = opt.tmax;
  cfg.eps0_w = opt.eps0;
  return cfg;
}

int cmd_run(const Options& opt) {
  const NetworkScenario s = load_or_default(opt);
  const auto [lo, hi] = parse_seed_range(opt.seeds.empty() ? "1..1" : opt.seeds);
  const RunConfig cfg = make_config(opt);
  Manifest man = open_manifest(opt, "run", lo, hi);
  man.set("scenario_hash", to_hex(fnv1a64(serialize_scenario(s))));

  for (Scheme scheme : parse_schemes(opt.scheme))
    for (std::uint64_t seed = lo; seed <= hi; ++seed) {
      const TtiState state = sample_tti_state(s, seed);
      const TtiResult res = run_tti(s, state, scheme, cfg);
      const std::string tag =
          std::string(to_string(scheme)) + "_" + std::to_string(seed);
      man.add_file("association_" + tag + ".csv",
                   association_csv(s, res, cfg.alpha));
      man.add_file("power_" + tag + ".csv", power_csv(s, res));
    }
  man.finish("run");
  return 0;
}

int cmd_flight(const Options& opt) {
  constexpr int horizon = 100;
  const NetworkScenario s = load_or_default(opt);
  const auto [lo, hi] = parse_seed_range(opt.seeds.empty() ? "1..1" : opt.seeds);
  const RunConfig cfg = make_config(opt);
  Manifest man = open_manifest(opt, "flight", lo, hi);
  man.set("scenario_hash", to_hex(fnv1a64(serialize_scenario(s))));
  man.set("horizon_ttis", std::to_string(horizon));

  std::vector<FlightReport> reports;
  for (Scheme scheme : parse_schemes(opt.scheme))
    for (std::uint64_t seed = lo; seed <= hi; ++seed) {
      reports.push_back(run_flight(s, horizon, scheme, seed, cfg));
      const std::string tag =
          std::string(to_string(scheme)) + "_" + std::to_string(seed);
      man.add_file("flight_" + tag + ".csv", flight_trace_csv(reports.back()));
    }
  man.add_file("flight_summary.csv", flight_summary_csv(reports));

  std::vector<double> psi_grid;
  for (int i = 0; i < 20; ++i) psi_grid.push_back(0.05 * i);
  man.add_file("psi_sweep.csv",
               psi_sweep_csv(psi_association_sweep(s, psi_grid, cfg)));
  man.finish("flight");
  return 0;
}

int cmd_sweep_users(const Options& opt) {
  const auto [lo, hi] = parse_seed_range(opt.seeds.empty() ? "1..10" : opt.seeds);
  const std::size_t n_seeds = static_cast<std::size_t>(hi - lo + 1);
  const RunConfig cfg = make_config(opt);
  Manifest man = open_manifest(opt, "sweep-users", lo, hi);
  const std::vector<std::size_t> counts = {25, 50, 75};
  man.set("counts", "25,50,75");

  man.add_file("users_sweep.csv",
               sweep_csv(sweep_users(counts, parse_schemes(opt.scheme), n_seeds, cfg)));
  man.finish("sweep-users");
  return 0;
}

int cmd_ruin_table(const Options& opt) {
  const auto [lo, hi] = parse_seed_range(opt.seeds.empty() ? "1..1" : opt.seeds);
  constexpr std::size_t n_paths = 100000;
  Manifest man = open_manifest(opt, "ruin-table", lo, hi);
  man.set("mc_paths", std::to_string(n_paths));

  man.add_file("ruin_table.csv", ruin_table_csv(ruin_table(n_paths, lo)));
  man.finish("ruin-table");
  return 0;
}

int cmd_gap(const Options& opt) {
  const auto [lo, hi] = parse_seed_range(opt.seeds.empty() ? "1..20" : opt.seeds);
  const std::size_t n_seeds = static_cast<std::size_t>(hi - lo + 1);
  const RunConfig cfg = make_config(opt);
  Manifest man = open_manifest(opt, "gap", lo, hi);
  man.set("bs_counts", "2,3");
  man.set("user_counts", "3..8");

  man.add_file("gap.csv",
               gap_csv(gap_experiment({2, 3}, {3, 4, 5, 6, 7, 8}, n_seeds, cfg)));
  man.finish("gap");
  return 0;
}

int cmd_waterfill_demo(const Options& opt) {
  const auto [lo, hi] = parse_seed_range(opt.seeds.empty() ? "1..1" : opt.seeds);
  Manifest man = open_manifest(opt, "waterfill-demo", lo, hi);
  man.add_file("waterfill_demo.csv", waterfill_demo_csv(waterfill_demo()));
  man.finish("waterfill-demo");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV-assisted network association and power allocation runner"};
  app.require_subcommand(1);

  Options opt;
  const char* env_out = std::getenv("UAVNET_OUT");
  opt.out_dir = env_out != nullptr ? env_out : "out";

  const auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--scenario", opt.scenario_path,
                    "scenario or generation-config file; omitted = defaults");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seeds", opt.seeds, "seed range a..b or a single seed");
    sub->add_option("--scheme", opt.scheme, "ruin|sinr|both")
        ->check(CLI::IsMember({"ruin", "sinr", "both"}));
    sub->add_option("--tmax", opt.tmax, "iteration cap per TTI")
        ->check(CLI::PositiveNumber);
    sub->add_option("--eps0", opt.eps0, "power convergence threshold, watts")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* run = app.add_subcommand("run", "one TTI: association and power CSVs");
  CLI::App* flight = app.add_subcommand("flight", "flight traces and summary");
  CLI::App* sweep = app.add_subcommand("sweep-users", "rate vs user count");
  CLI::App* ruin = app.add_subcommand("ruin-table", "analytic vs Monte-Carlo ruin");
  CLI::App* gap = app.add_subcommand("gap", "heuristic vs exhaustive objective");
  CLI::App* demo = app.add_subcommand("waterfill-demo", "canonical regimes");
  for (CLI::App* sub : {run, flight, sweep, ruin, gap, demo}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (flight->parsed()) return cmd_flight(opt);
    if (sweep->parsed()) return cmd_sweep_users(opt);
    if (ruin->parsed()) return cmd_ruin_table(opt);
    if (gap->parsed()) return cmd_gap(opt);
    return cmd_waterfill_demo(opt);
  } catch (const uavnet::UrllcInfeasibleUsers& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const uavnet::UrllcInfeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
