// Command-line front end: generate, analyze, verify, selftest.

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "exactpa/analysis.hpp"
#include "exactpa/error.hpp"
#include "exactpa/generators.hpp"
#include "exactpa/graph.hpp"
#include "exactpa/verify.hpp"

namespace {

using namespace exactpa;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInfeasible = 2;
constexpr int kVerifyFailed = 3;

struct RunFlags {
  std::string algorithm = "se-a";
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t z = 0;
  std::optional<std::uint64_t> seed;
  std::string initial;
  std::size_t sec_width = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--algorithm", f.algorithm, "se-a | se-b | se-b-star | se-c")
      ->check(CLI::IsMember({"se-a", "se-b", "se-b-star", "se-b*", "se-c"}));
  cmd->add_option("--n", f.n, "number of vertices")->required();
  cmd->add_option("--m", f.m, "edges per newborn (default 2 for se-a, else 5)");
  cmd->add_option("--z", f.z, "sets drawn per round (default 1 for se-a, else m)");
  cmd->add_option("--seed", f.seed, "64-bit seed (random and printed when absent)");
  cmd->add_option("--initial", f.initial,
                  "complete:K | gnm:V | file:PATH (default complete:m, complete:m+1 for se-b-star)");
  cmd->add_option("--sec-width", f.sec_width, "hyperedges re-partitioned per se-c round");
}

GeneratorConfig to_config(const RunFlags& f) {
  GeneratorConfig c;
  c.algorithm = parse_algorithm(f.algorithm);
  const bool se_a = c.algorithm == Algorithm::SeA;
  c.m = f.m ? f.m : (se_a ? 2 : 5);
  c.z = f.z ? f.z : (se_a ? 1 : c.m);
  c.n = f.n;
  if (f.seed) {
    c.seed = *f.seed;
  } else {
    c.seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    std::cerr << "seed: " << c.seed << '\n';
  }
  if (!f.initial.empty()) {
    c.initial = InitialGraphSpec::parse(f.initial);
  } else {
    c.initial = InitialGraphSpec::complete(c.algorithm == Algorithm::SeBStar ? c.m + 1 : c.m);
  }
  c.sec_shuffle_width = f.sec_width;
  return c;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InitDivisibility:
    case ErrorKind::InitInfeasible:
    case ErrorKind::RejectionBudget:
    case ErrorKind::Divisibility:
    case ErrorKind::Infeasible:
      return kInfeasible;
    default:
      return kUsage;
  }
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream file(out);
  if (!file) throw Error(ErrorKind::Io, "cannot open " + out);
  file << j.dump(2) << '\n';
}

int cmd_generate(const RunFlags& flags, const std::string& out) {
  const auto config = to_config(flags);
  const auto start = std::chrono::steady_clock::now();
  Generator gen(config);
  for (const auto& w : gen.warnings()) std::cerr << "warning: " << w << '\n';
  gen.run();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_edge_list(gen.graph(), out);
  std::cout << "n=" << gen.graph().num_vertices() << " edges=" << gen.graph().num_edges()
            << " seconds=" << seconds << '\n';
  return kOk;
}

int cmd_analyze(const std::string& in, const std::string& hist, bool clustering,
                std::uint32_t m) {
  const Graph g = read_edge_list(in);
  json summary = {{"vertices", g.num_vertices()}, {"edges", g.num_edges()}};
  const auto h = DegreeHistogram::of(g);
  if (!hist.empty()) {
    std::ofstream file(hist);
    if (!file) throw Error(ErrorKind::Io, "cannot open " + hist);
    write_histogram_csv(h, m, file);
  }
  if (clustering) {
    const auto stats = clustering_stats(g);
    summary["clustering"] = {{"mean", stats.mean},
                             {"variance", stats.variance},
                             {"triangles", triangle_count(g)}};
  }
  const auto fit = fit_report(h, m);
  summary["degree_fit"] = {{"m", m},
                           {"population", fit.population},
                           {"d_cap", fit.d_cap},
                           {"chi_square", fit.chi_square},
                           {"dof", fit.dof},
                           {"p_value", fit.p_value},
                           {"tail_slope", fit.tail_slope}};
  std::cout << summary.dump(2) << '\n';
  return kOk;
}

std::vector<VertexId> parse_set(const std::string& text) {
  std::vector<VertexId> ids;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      ids.push_back(static_cast<VertexId>(std::stoul(item)));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Config, "bad vertex id '" + item + "' in --set");
    }
  }
  return ids;
}

int cmd_verify(const RunFlags& flags, const std::string& mode, std::uint64_t trials,
               const std::string& set, unsigned workers, std::size_t steps_to_check,
               double alpha, const std::string& out) {
  const auto config = to_config(flags);
  if (mode == "invariants") {
    HarnessOptions options;
    options.steps_to_check = steps_to_check;
    const auto report = invariant_harness(config, options);
    const bool pass = report.ok() && report.invariant3_ok();
    emit(report.to_json(), out);
    return pass ? kOk : kVerifyFailed;
  }

  Generator state(config);
  state.run();
  const std::uint64_t seed = mix_seed(config.seed ^ 0x5eedULL);
  if (mode == "inclusion") {
    const auto report = inclusion_oracle(state, trials, seed, workers, alpha);
    emit(report.to_json(), out);
    return report.pass ? kOk : kVerifyFailed;
  }

  const auto ids = parse_set(set);
  for (auto v : ids) {
    if (v >= state.graph().num_vertices()) {
      throw Error(ErrorKind::Config, "vertex " + std::to_string(v) + " not in the state");
    }
  }
  const auto est = joint_oracle(state, ids, trials, seed, workers);
  json j = {{"set", ids},
            {"trials", est.trials},
            {"hits", est.hits},
            {"empirical", est.empirical},
            {"std_error", est.std_error}};
  bool pass = true;
  if (config.algorithm == Algorithm::SeA && config.z == 1) {
    // only edges can be drawn, each with probability 1/|E|
    const bool adjacent = Adjacency(state.graph()).adjacent(ids[0], ids[1]);
    const double expected = adjacent ? 1.0 / static_cast<double>(state.graph().num_edges()) : 0.0;
    j["expected"] = expected;
    j["expected_zero"] = !adjacent;
    if (adjacent) {
      const double sigma = std::sqrt(expected * (1 - expected) / static_cast<double>(trials));
      pass = std::abs(est.empirical - expected) <= 4 * sigma;
    } else {
      pass = est.hits == 0;
    }
  } else {
    j["expected"] = nullptr;
  }
  j["pass"] = pass;
  emit(j, out);
  return pass ? kOk : kVerifyFailed;
}

int cmd_selftest() {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
    if (!ok) ++failures;
  };
  auto throws_kind = [](auto&& fn, ErrorKind kind) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind() == kind;
    }
    return false;
  };

  Rng rng(1);
  report("K6 with m=4 is rejected for divisibility", throws_kind([&] {
           build_initial(InitialGraphSpec::complete(6), 4, rng);
         }, ErrorKind::InitDivisibility));
  Graph star;
  star.add_vertices(5);
  for (VertexId v = 1; v < 5; ++v) star.add_edge(0, v);
  report("star on 5 vertices with m=4 is rejected for max degree",
         throws_kind([&] { init_tableau(star, 4, rng); }, ErrorKind::InitInfeasible));

  for (auto algo : {Algorithm::SeA, Algorithm::SeB, Algorithm::SeBStar, Algorithm::SeC}) {
    GeneratorConfig c;
    c.algorithm = algo;
    c.m = algo == Algorithm::SeA ? 2 : 4;
    c.z = c.m;
    c.n = 60;
    c.seed = 11;
    c.initial = InitialGraphSpec::complete(c.m + 1);
    Generator state(c);
    state.run();
    const auto r = inclusion_oracle(state, 200000, 5);
    report(std::string("inclusion probabilities, ") + to_string(algo), r.pass);

    HarnessOptions opts;
    opts.steps_to_check = 300;
    c.n = 300;
    const auto h = invariant_harness(c, opts);
    report(std::string("tableau invariants, ") + to_string(algo), h.ok() && h.invariant3_ok());
  }

  GeneratorConfig c;
  c.n = 5000;
  c.seed = 3;
  const Graph g = generate(c);
  const auto stats = clustering_stats(g);
  bool exact = true;
  for (VertexId v = 2; v < g.num_vertices(); ++v) {
    exact = exact && stats.per_vertex[v] == 2.0 / g.degree(v);
  }
  report("SE-A z=1 clustering is 2/degree", exact);
  report("SE-A z=1 triangle count is n-2", triangle_count(g) == c.n - 2);
  return failures == 0 ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact preferential attachment graph generator"};
  app.require_subcommand(1);

  RunFlags gen_flags;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "generate a graph and write its edge list");
  add_run_flags(gen, gen_flags);
  gen->add_option("--out", gen_out, "edge list path")->required();

  std::string an_in, an_hist;
  bool an_clustering = false;
  std::uint32_t an_m = 2;
  auto* analyze = app.add_subcommand("analyze", "degree and clustering statistics of an edge list");
  analyze->add_option("--in", an_in, "edge list path")->required();
  analyze->add_option("--degree-hist", an_hist, "write the degree histogram CSV here");
  analyze->add_flag("--clustering", an_clustering, "compute local clustering statistics");
  analyze->add_option("--m", an_m, "m of the theoretical degree law");

  RunFlags ver_flags;
  std::string ver_mode = "inclusion", ver_set, ver_out;
  std::uint64_t ver_trials = 1000000;
  unsigned ver_workers = std::max(1u, std::thread::hardware_concurrency());
  std::size_t ver_steps = 1000;
  double ver_alpha = 0.01;
  auto* verify = app.add_subcommand("verify", "statistical and invariant checks");
  add_run_flags(verify, ver_flags);
  verify->add_option("--mode", ver_mode, "inclusion | joint | invariants")
      ->check(CLI::IsMember({"inclusion", "joint", "invariants"}));
  verify->add_option("--trials", ver_trials, "replayed rounds");
  verify->add_option("--set", ver_set, "comma-separated target set for joint mode");
  verify->add_option("--workers", ver_workers, "threads for replayed rounds");
  verify->add_option("--steps-to-check", ver_steps, "rounds checked individually");
  verify->add_option("--alpha", ver_alpha, "family-wise significance level");
  verify->add_option("--out", ver_out, "write the JSON report here instead of stdout");

  auto* selftest = app.add_subcommand("selftest", "fast smoke subset of the acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_flags, gen_out);
    if (*analyze) return cmd_analyze(an_in, an_hist, an_clustering, an_m);
    if (*verify) {
      if (ver_mode == "joint" && ver_set.empty()) {
        std::cerr << "joint mode needs --set\n";
        return kUsage;
      }
      return cmd_verify(ver_flags, ver_mode, ver_trials, ver_set, ver_workers, ver_steps,
                        ver_alpha, ver_out);
    }
    if (*selftest) return cmd_selftest();
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e);
  }
  return kUsage;
}
