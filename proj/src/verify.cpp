#include "exactpa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "exactpa/analysis.hpp"
#include "exactpa/error.hpp"

namespace exactpa {

namespace {

/// Runs `body(rng, trials)` on `workers` threads with substreams of `seed`
/// and returns the per-worker results in worker order.
template <typename Result, typename Body>
std::vector<Result> run_split(std::uint64_t trials, std::uint64_t seed, unsigned workers,
                              Body body) {
  workers = std::max(1u, workers);
  std::vector<Result> results(workers);
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t share = trials / workers + (w < trials % workers ? 1 : 0);
    auto task = [&, w, share] {
      Rng rng(substream_seed(seed, w));
      results[w] = body(rng, share);
    };
    if (workers == 1) {
      task();
    } else {
      threads.emplace_back(task);
    }
  }
  for (auto& t : threads) t.join();
  return results;
}

}  // namespace

VerifyReport inclusion_oracle(const Generator& state, std::uint64_t trials,
                              std::uint64_t seed, unsigned workers, double alpha) {
  const Graph& g = state.graph();
  const std::size_t n = g.num_vertices();
  const std::size_t m = state.config().m;

  auto parts = run_split<std::vector<std::uint64_t>>(
      trials, seed, workers, [&](Rng& rng, std::uint64_t share) {
        std::vector<std::uint64_t> hits(n, 0);
        TargetSelector selector;
        std::vector<VertexId> out;
        for (std::uint64_t t = 0; t < share; ++t) {
          out.clear();
          state.select_targets(rng, selector, out);
          for (VertexId v : out) ++hits[v];
        }
        return hits;
      });

  VerifyReport report;
  report.trials = trials;
  report.m = m;
  report.alpha = alpha;
  const double total_degree = 2.0 * static_cast<double>(g.num_edges());
  std::size_t random_vertices = 0;
  for (VertexId v = 0; v < n; ++v) {
    std::uint64_t hits = 0;
    for (const auto& p : parts) hits += p[v];
    const double target = static_cast<double>(m) * g.degree(v) / total_degree;
    const double empirical = static_cast<double>(hits) / static_cast<double>(trials);
    double z = 0;
    if (target > 0 && target < 1) {
      ++random_vertices;
      z = (empirical - target) /
          std::sqrt(target * (1 - target) / static_cast<double>(trials));
    } else if (empirical != target) {
      z = std::numeric_limits<double>::infinity();
    }
    report.vertices.push_back({v, g.degree(v), target, empirical, z, hits});
    report.max_abs_z = std::max(report.max_abs_z, std::abs(z));
  }
  report.threshold = std::max(4.0, bonferroni_z(alpha, random_vertices));
  report.pass = report.max_abs_z < report.threshold;
  return report;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& v : vertices) {
    records.push_back({{"id", v.id},
                       {"degree", v.degree},
                       {"target", v.target},
                       {"empirical", v.empirical},
                       {"z", std::isfinite(v.z) ? nlohmann::json(v.z) : nlohmann::json("inf")}});
  }
  return {{"vertices", records},
          {"summary",
           {{"max_abs_z", std::isfinite(max_abs_z) ? nlohmann::json(max_abs_z)
                                                   : nlohmann::json("inf")},
            {"alpha", alpha},
            {"threshold", threshold},
            {"trials", trials},
            {"pass", pass}}}};
}

std::map<std::vector<VertexId>, std::uint64_t> target_set_counts(const Generator& state,
                                                                  std::uint64_t trials,
                                                                  std::uint64_t seed,
                                                                  unsigned workers) {
  using Counts = std::map<std::vector<VertexId>, std::uint64_t>;
  auto parts = run_split<Counts>(trials, seed, workers, [&](Rng& rng, std::uint64_t share) {
    Counts counts;
    TargetSelector selector;
    std::vector<VertexId> out;
    for (std::uint64_t t = 0; t < share; ++t) {
      out.clear();
      state.select_targets(rng, selector, out);
      std::sort(out.begin(), out.end());
      auto it = counts.find(out);
      if (it == counts.end()) {
        counts.emplace(out, 1);
      } else {
        ++it->second;
      }
    }
    return counts;
  });
  Counts merged;
  for (const auto& p : parts) {
    for (const auto& [set, c] : p) merged[set] += c;
  }
  return merged;
}

JointEstimate joint_oracle(const Generator& state, std::span<const VertexId> target_set,
                           std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  if (target_set.size() != state.config().m) {
    throw Error(ErrorKind::Domain, "joint target set must have exactly m members");
  }
  std::vector<VertexId> wanted(target_set.begin(), target_set.end());
  std::sort(wanted.begin(), wanted.end());
  auto parts = run_split<std::uint64_t>(trials, seed, workers, [&](Rng& rng, std::uint64_t share) {
    std::uint64_t hits = 0;
    TargetSelector selector;
    std::vector<VertexId> out;
    for (std::uint64_t t = 0; t < share; ++t) {
      out.clear();
      state.select_targets(rng, selector, out);
      std::sort(out.begin(), out.end());
      if (out == wanted) ++hits;
    }
    return hits;
  });
  JointEstimate e;
  e.trials = trials;
  for (auto h : parts) e.hits += h;
  e.empirical = static_cast<double>(e.hits) / static_cast<double>(trials);
  e.std_error = std::sqrt(e.empirical * (1 - e.empirical) / static_cast<double>(trials));
  return e;
}

HarnessReport invariant_harness(const GeneratorConfig& config, const HarnessOptions& options) {
  HarnessReport report;
  report.algorithm = config.algorithm;
  const bool inv3 = options.invariant3.value_or(config.algorithm == Algorithm::SeBStar);
  Generator gen(config);

  auto check = [&] {
    ++report.checks;
    if (!gen.tableau()) return;
    const auto r = check_invariants(*gen.tableau(), gen.graph(), inv3);
    const std::uint64_t bad12 = r.duplicate_in_hyperedge.size() + r.unknown_vertex.size() +
                                r.degree_mismatch.size() + (r.arity_mismatch ? 1 : 0);
    report.invariant12_violations += bad12;
    report.invariant3_violations += r.invariant3_violations;
    if (r.invariant3_violations > 0) ++report.invariant3_failed_checks;
    if (bad12 > 0) {
      ++report.failed_checks;
      if (!report.first_failure) report.first_failure = report.steps;
    }
  };

  check();
  while (gen.graph().num_vertices() < config.n) {
    if (options.fault_at_step && *options.fault_at_step == report.steps) {
      gen.inject_skipped_swap();
    }
    gen.step();
    ++report.steps;
    if (report.steps <= options.steps_to_check) check();
  }
  if (report.steps > options.steps_to_check) check();

  if (const auto* t = gen.tableau()) {
    report.final_report = check_invariants(*t, gen.graph(), inv3);
    if (t->has_incidence()) {
      auto rebuilt = t->rebuild_incidence();
      for (VertexId v = 0; v < rebuilt.size() && report.incidence_consistent; ++v) {
        auto maintained = t->incidence(v);
        std::vector<std::uint32_t> a(maintained.begin(), maintained.end());
        std::sort(a.begin(), a.end());
        std::sort(rebuilt[v].begin(), rebuilt[v].end());
        report.incidence_consistent = a == rebuilt[v];
      }
    }
  }
  report.graph_problem = validate_simple(gen.graph());
  return report;
}

nlohmann::json HarnessReport::to_json() const {
  nlohmann::json j = {{"algorithm", to_string(algorithm)},
                      {"steps", steps},
                      {"checks", checks},
                      {"failed_checks", failed_checks},
                      {"invariant12_violations", invariant12_violations},
                      {"invariant3_violations", invariant3_violations},
                      {"invariant3_failed_checks", invariant3_failed_checks},
                      {"incidence_consistent", incidence_consistent},
                      {"graph_problem", graph_problem},
                      {"final", final_report.summary()},
                      {"pass", ok() && invariant3_ok()}};
  if (first_failure) j["first_failure_after_steps"] = *first_failure;
  return j;
}

bool impossibility_demo(std::span<const double> pi, std::size_t m, bool allow_scaling) {
  const std::size_t n = pi.size();
  if (m == 0 || m > n) return false;
  // e_{m-1} of pi with element i left out, via the usual DP
  auto esp_without = [&](std::size_t skip) {
    std::vector<double> e(m, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == skip) continue;
      for (std::size_t k = m - 1; k >= 1; --k) e[k] += e[k - 1] * pi[i];
    }
    return e[m - 1];
  };
  constexpr double tol = 1e-9;
  const double first = esp_without(0);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = esp_without(i);
    if (allow_scaling ? std::abs(e - first) > tol * std::max(1.0, first)
                      : std::abs(e - 1.0) > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace exactpa
