#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "exactpa/generators.hpp"
#include "exactpa/tableau.hpp"

namespace exactpa {

struct VertexInclusion {
  VertexId id;
  std::uint32_t degree;
  double target;     // m d / sum of degrees
  double empirical;
  double z;
  std::uint64_t hits;
};

struct VerifyReport {
  std::vector<VertexInclusion> vertices;
  std::uint64_t trials = 0;
  std::size_t m = 0;
  double max_abs_z = 0;
  double alpha = 0.01;
  /// max(4, Bonferroni critical value over the vertices with 0 < target < 1)
  double threshold = 4;
  bool pass = false;

  nlohmann::json to_json() const;
};

/// Replays the target selection of one round `trials` times from the frozen
/// state in `state` and compares per-vertex inclusion frequencies with the
/// exact targets m d / sum(d). Trials are split across `workers` threads, each
/// with its own substream of `seed`; the result depends only on
/// (seed, workers, trials).
///
/// The update rule is not replayed: it runs after the targets are fixed and
/// cannot influence them.
VerifyReport inclusion_oracle(const Generator& state, std::uint64_t trials,
                              std::uint64_t seed, unsigned workers = 1, double alpha = 0.01);

/// Frequency of each sorted target set over `trials` replays.
std::map<std::vector<VertexId>, std::uint64_t> target_set_counts(const Generator& state,
                                                                  std::uint64_t trials,
                                                                  std::uint64_t seed,
                                                                  unsigned workers = 1);

struct JointEstimate {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double empirical = 0;
  double std_error = 0;
};

/// Frequency with which exactly `target_set` is drawn.
JointEstimate joint_oracle(const Generator& state, std::span<const VertexId> target_set,
                           std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

struct HarnessOptions {
  /// Invariants are checked after each of the first `steps_to_check` rounds
  /// and once at the end.
  std::size_t steps_to_check = 1000;
  /// Exhaustive ordered-pair scan for invariant 3; defaults to on for SE-B*.
  std::optional<bool> invariant3;
  /// Round (0-based) whose first donor swap is skipped.
  std::optional<std::size_t> fault_at_step;
};

struct HarnessReport {
  Algorithm algorithm = Algorithm::SeA;
  std::size_t steps = 0;
  std::size_t checks = 0;
  std::size_t failed_checks = 0;
  std::optional<std::size_t> first_failure;  // number of rounds done when first seen
  std::uint64_t invariant12_violations = 0;
  std::uint64_t invariant3_violations = 0;
  std::size_t invariant3_failed_checks = 0;
  bool incidence_consistent = true;
  std::string graph_problem;  // empty when the final graph is simple
  InvariantReport final_report;

  /// Invariants 1-2, incidence index and graph simplicity. Invariant-3
  /// findings are reported separately through `invariant3_ok`.
  bool ok() const {
    return invariant12_violations == 0 && incidence_consistent && graph_problem.empty();
  }
  bool invariant3_ok() const { return invariant3_violations == 0; }
  nlohmann::json to_json() const;
};

/// Runs a generation under `config`, checking the tableau after rounds.
/// For SE-A the edge pool is the tableau and only graph simplicity is
/// checked.
HarnessReport invariant_harness(const GeneratorConfig& config, const HarnessOptions& options);

/// Whether pairwise-independent (or, with `allow_scaling`, uniformly scaled
/// independent) joint inclusion pi_S = c * prod(pi_i) is consistent with the
/// marginals: every i must satisfy e_{m-1}(pi without i) = 1/c.
bool impossibility_demo(std::span<const double> pi, std::size_t m, bool allow_scaling = true);

}  // namespace exactpa
