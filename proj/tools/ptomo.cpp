// ptomo: command-line front end for simulation, estimation, direction search,
// experiment design and the case-study harness.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "ptomo/design.hpp"
#include "ptomo/estimate.hpp"
#include "ptomo/harness.hpp"
#include "ptomo/rng.hpp"
#include "ptomo/serialize.hpp"

using namespace ptomo;
using nlohmann::json;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string spec;
};

json read_spec(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot open spec file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, std::string("spec is not valid JSON: ") + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::uint64_t seed_of(const Common& c, const json& spec) {
  if (c.seed) return *c.seed;
  return spec.value("seed", std::uint64_t{0});
}

ChannelSpec channel_of(const json& spec) {
  if (!spec.contains("channel")) {
    throw Error(ErrorKind::kInvalidArgument, "spec needs a 'channel' object");
  }
  return io::channel_from_json(spec.at("channel"));
}

// simulate: {channel, configs | strategy + shots} -> record JSON.
void cmd_simulate(const Common& c) {
  const json spec = read_spec(c.spec);
  const ChannelSpec ch = channel_of(spec);
  std::vector<TomographyConfiguration> configs;
  if (spec.contains("configs")) {
    configs = io::configs_from_json(spec.at("configs"));
  } else {
    const auto s = strategy_from_string(spec.value("strategy", std::string("optimal")));
    configs = strategy_configs(ch, s, spec.value("shots", std::int64_t{1000}));
  }
  const GenPauliChannel g = ch.channel();
  Rng rng = make_rng(seed_of(c, spec));
  const auto rec = simulate_record(configs, [&g](const CMatrix& a) { return g.apply(a); }, rng);
  write_json(c.out, io::record_to_json(configs, rec));
}

// estimate: record JSON (+ optional channel directions, model) -> result JSON.
void cmd_estimate(const Common& c, const std::string& model) {
  const json spec = read_spec(c.spec);
  const auto [configs, rec] = io::record_from_json(spec);
  if (configs.empty()) throw Error(ErrorKind::kInvalidArgument, "record has no configurations");
  const int d = configs.front().input.dim();
  SolverSettings s;
  if (model == "choi") {
    write_json(c.out, io::estimation_to_json(estimate_choi(configs, rec, s)));
    return;
  }
  Mub mub = standard_mub(d);
  if (spec.contains("channel")) mub = io::channel_from_json(spec.at("channel")).mub;
  const auto res = estimate_affine(estimation_basis(mub), estimation_constraints(d), configs,
                                   rec, s);
  write_json(c.out, io::estimation_to_json(res));
}

// directions: {channel, shots (null = exact), cascade_depth, ...} -> log JSON.
void cmd_directions(const Common& c) {
  const json spec = read_spec(c.spec);
  const ChannelSpec ch = channel_of(spec);
  if (ch.dim() != 2) throw Error(ErrorKind::kUnsupportedDimension, "direction search is qubit-only");
  const auto axes = bloch_axes(ch.mub);
  const PauliChannel pc = PauliChannel::from_axes(ch.lambda, axes);
  DirectionSettings ds;
  if (spec.contains("shots")) {
    if (spec.at("shots").is_null()) {
      ds.shots.reset();
    } else {
      ds.shots = spec.at("shots").get<std::int64_t>();
    }
  }
  ds.cascade_depth = spec.value("cascade_depth", ds.cascade_depth);
  ds.tau_scale = spec.value("tau_scale", ds.tau_scale);
  ds.max_steps = spec.value("max_steps", ds.max_steps);
  ds.max_restarts = spec.value("max_restarts", ds.max_restarts);
  Rng rng = make_rng(seed_of(c, spec));
  try {
    const auto est =
        estimate_directions([&pc](const Vec3& b) { return pc.apply_bloch(b); }, ds, rng);
    write_json(c.out, io::direction_estimate_to_json(est));
  } catch (const DirectionSearchError& e) {
    json j = io::direction_estimate_to_json(e.partial());
    j["error"] = e.what();
    write_json(c.out, j);
    throw;
  }
}

// design: {channel, restarts} -> {configs, objective, fisher_matrix}.
void cmd_design(const Common& c) {
  const json spec = read_spec(c.spec);
  const ChannelSpec ch = channel_of(spec);
  const AffineBasis basis = estimation_basis(ch.mub);
  std::vector<TomographyConfiguration> configs;
  if (ch.dim() == 2) {
    configs = optimal_configs_qubit(ch.mub, ch.lambda, spec.value("shots", std::int64_t{1}));
  } else {
    Rng rng = make_rng(seed_of(c, spec));
    const auto res = search_optimal_configs(ch.channel(), spec.value("restarts", 4), rng);
    // One MUB-aligned configuration per basis when they attain the maximum,
    // else the best configuration found.
    if (res.mub_attains_max) {
      for (int i = 0; i < ch.mub.size(); ++i) {
        configs.push_back({DensityMatrix::pure(ch.mub.vector(i, 0)), basis_povm(ch.mub, i), 1});
      }
    } else {
      configs.push_back(res.best.config);
    }
  }
  const auto f = fisher_matrix(basis, ch.lambda, configs);
  write_json(c.out, io::design_to_json(configs, f.entries.trace(), f.entries));
}

// casestudy: case-study spec -> CSV (--out) plus JSON sidecar (<out>.json).
void cmd_casestudy(const Common& c, const std::string& strategy) {
  json spec = read_spec(c.spec);
  if (!spec.contains("strategy")) spec["strategy"] = strategy;
  CaseStudySpec cs = io::case_study_spec_from_json(spec);
  if (c.seed) cs.seed = *c.seed;
  const auto rows = run_case_study(cs);
  std::ostringstream csv;
  write_case_study_csv(csv, rows);
  write_text(c.out, csv.str());
  if (!c.out.empty() && c.out != "-") {
    json side{{"spec", io::case_study_spec_to_json(cs)},
              {"seed", cs.seed},
              {"rows", io::metrics_to_json(rows)}};
    write_json(c.out + ".json", side);
  }
  for (const auto& r : rows) {
    if (r.incomplete()) {
      throw Error(ErrorKind::kPartialResult,
                  "every trial failed at n_shots = " + std::to_string(r.n_shots));
    }
  }
}

Vec3 vec3_of(const json& j, const char* what) {
  const RVector v = io::vector_from_json(j);
  if (v.size() != 3) throw Error(ErrorKind::kDimension, std::string(what) + " needs 3 entries");
  return v;
}

// robustness: {lambda, axis, alphas | alpha_max + steps, shots, trials} -> CSV.
void cmd_robustness(const Common& c) {
  const json spec = read_spec(c.spec);
  Vec3 lambda(0.3, -0.1, 0.1);
  if (spec.contains("lambda")) lambda = vec3_of(spec.at("lambda"), "lambda");
  Vec3 axis = Vec3::Ones().normalized();
  if (spec.contains("axis")) axis = vec3_of(spec.at("axis"), "axis");
  std::vector<double> alphas;
  if (spec.contains("alphas")) {
    alphas = spec.at("alphas").get<std::vector<double>>();
  } else {
    const double amax = spec.value("alpha_max", 2.0 * std::numbers::pi / 3.0);
    const int steps = spec.value("steps", 24);
    for (int i = 0; i <= steps; ++i) alphas.push_back(amax * i / steps);
  }
  const auto rows = robustness_sweep(lambda, BlochVector(axis), alphas,
                                     spec.value("shots", std::int64_t{1500}),
                                     spec.value("trials", 5), seed_of(c, spec));
  std::ostringstream csv;
  write_robustness_csv(csv, rows);
  write_text(c.out, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pauli channel tomography: simulation, estimation and experiment design"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Random seed (overrides the spec)");
    sub->add_option("--out", common.out, "Output file (default: stdout)");
    sub->add_option("--spec", common.spec, "JSON input file");
  };

  auto* simulate = app.add_subcommand("simulate", "Channel and configurations to a count record");
  auto* estimate = app.add_subcommand("estimate", "Count record to parameter and Choi estimates");
  std::string model = "affine";
  estimate->add_option("--model", model, "affine or choi")->check(CLI::IsMember({"affine", "choi"}));
  auto* directions = app.add_subcommand("directions", "Iterative channel-direction search");
  auto* design = app.add_subcommand("design", "Fisher-optimal configurations for a channel");
  auto* casestudy = app.add_subcommand("casestudy", "Shot-grid case study to CSV and JSON");
  std::string strategy = "optimal";
  casestudy->add_option("--strategy", strategy, "Strategy when the spec names none");
  auto* robustness = app.add_subcommand("robustness", "Direction-rotation robustness sweep");
  for (auto* s : {simulate, estimate, directions, design, casestudy, robustness}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*simulate) cmd_simulate(common);
    if (*estimate) cmd_estimate(common, model);
    if (*directions) cmd_directions(common);
    if (*design) cmd_design(common);
    if (*casestudy) cmd_casestudy(common, strategy);
    if (*robustness) cmd_robustness(common);
  } catch (const Error& e) {
    std::cerr << "ptomo: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return e.is_solver_failure() ? 3 : 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ptomo: malformed input: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
