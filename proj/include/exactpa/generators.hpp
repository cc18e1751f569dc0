#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exactpa/graph.hpp"
#include "exactpa/rng.hpp"
#include "exactpa/sampling.hpp"
#include "exactpa/tableau.hpp"

namespace exactpa {

enum class Algorithm { SeA, SeB, SeBStar, SeC };

const char* to_string(Algorithm a);
/// Accepts "se-a", "se-b", "se-b-star" (or "se-b*") and "se-c".
Algorithm parse_algorithm(const std::string& name);

struct InitialGraphSpec {
  enum class Kind { Complete, ForcedGnm, File };

  Kind kind = Kind::Complete;
  std::size_t vertices = 2;  // Complete and ForcedGnm
  std::string path;          // File

  static InitialGraphSpec complete(std::size_t k) { return {Kind::Complete, k, {}}; }
  static InitialGraphSpec forced_gnm(std::size_t v0) { return {Kind::ForcedGnm, v0, {}}; }
  static InitialGraphSpec file(std::string p) { return {Kind::File, 0, std::move(p)}; }
  /// "complete:K", "gnm:V" or "file:PATH".
  static InitialGraphSpec parse(const std::string& text);
  std::string to_string() const;
};

struct GeneratorConfig {
  Algorithm algorithm = Algorithm::SeA;
  std::size_t n = 0;
  std::size_t m = 2;
  std::size_t z = 1;
  std::uint64_t seed = 0;
  InitialGraphSpec initial = InitialGraphSpec::complete(2);
  /// Hyperedges re-partitioned per SE-C step; 0 means m.
  std::size_t sec_shuffle_width = 0;
  /// Probe for parallel edges on every insertion.
  bool checked = false;
  std::size_t gnm_rejection_budget = 10000;
};

/// Throws ErrorKind::Config on inconsistent parameters. Returns advisory
/// warnings (e.g. SE-B* with z < m).
std::vector<std::string> validate(const GeneratorConfig& config);

/// Largest edge count not above the complete graph on v0 vertices that is a
/// multiple of lcm(m,2)/2, i.e. with m | 2M.
std::size_t forced_edge_count(std::size_t v0, std::size_t m);

/// Initial graph for `spec`, checked for connectivity and tableau
/// feasibility under arity m. ForcedGnm draws G(v0, M) with
/// M = forced_edge_count(v0, m), rejecting disconnected or degree-infeasible
/// draws up to `rejection_budget` times.
Graph build_initial(const InitialGraphSpec& spec, std::size_t m, Rng& rng,
                    std::size_t rejection_budget = 10000);

struct Rational {
  std::uint64_t num;
  std::uint64_t den;
  bool operator==(const Rational&) const = default;
};

/// lcm(2*e0, m) / (2*e0) in lowest terms. Diagnostic only.
Rational lambda_factor(std::uint64_t e0, std::uint64_t m);

/// Target selection shared by every variant: z uniform draws with
/// replacement from a pool of `arity`-sets, the bag of their members, then
/// random systematic sampling of `m` members.
///
/// Holds scratch buffers only, so one instance per thread.
class TargetSelector {
 public:
  /// `pool` is row-major with `arity` members per set. Appends to `out`.
  void select(std::span<const VertexId> pool, std::size_t arity, std::size_t z,
              std::size_t m, Rng& rng, std::vector<VertexId>& out);

 private:
  std::vector<BagItem> items_;
  std::vector<std::uint32_t> where_;
};

/// Scratch for the update rules.
struct UpdateWorkspace {
  std::vector<VertexId> first, second;
  std::vector<std::size_t> donors;
  std::vector<std::size_t> donor_slots;
  std::vector<VertexId> cascade;
  std::vector<std::size_t> order;
  std::vector<std::size_t> candidates;
  VirtualShuffle shuffle;
  std::vector<BagItem> items;
  std::vector<std::uint32_t> where;
  std::vector<VertexId> captured;
  std::vector<VertexId> groups;
  /// Test hook: the next donor swap is silently skipped.
  bool skip_next_swap = false;
};

/// SE-A round: z uniform edges, RSS with m = 2, newborn joined to both picks.
VertexId se_a_step(Graph& g, std::size_t z, Rng& rng, TargetSelector& selector,
                   std::vector<VertexId>& targets);

/// SE-B update. u is split near-half (after a shuffle) into two new
/// hyperedges, each also holding v; m-2 distinct existing hyperedges each
/// hand one member to a new hyperedge that lacks it and take v in return.
void update_se_b(HyperedgeTableau& t, VertexId v, std::span<const VertexId> u, Rng& rng,
                 UpdateWorkspace& ws);

/// SE-B* update: like SE-B with the fixed split {u_1..u_{m-1}, v} / {u_m, v},
/// and each donated member w is replaced by v in a hyperedge chosen so that
/// every ordered pair (w, y) keeps a hyperedge with w and without y.
/// Requires the incidence index.
void update_se_b_star(HyperedgeTableau& t, VertexId v, std::span<const VertexId> u,
                      Rng& rng, UpdateWorkspace& ws);

/// SE-C update: removes `width`-2 uniformly chosen hyperedges and re-deals
/// their members, m copies of v and the members of u into `width` fresh
/// hyperedges by random systematic partitioning.
void update_se_c(HyperedgeTableau& t, VertexId v, std::span<const VertexId> u, Rng& rng,
                 UpdateWorkspace& ws, std::size_t width);

/// A generation run: the graph, its tableau (not for SE-A) and the run's
/// single random stream.
///
/// Random draw order per round: z pool indices, the RSS shuffle of the bag,
/// the RSS offset, then the variant's update draws (SE-B: split shuffle,
/// donor picks, receiving side, donor scans; SE-B*: donor picks, donor scans,
/// cascade candidate picks; SE-C: removed positions, partition shuffle).
class Generator {
 public:
  explicit Generator(const GeneratorConfig& config);
  /// Uses `initial` as G0 instead of config.initial.
  Generator(const GeneratorConfig& config, Graph initial);

  /// One round; returns the newborn id.
  VertexId step();
  /// Rounds until the graph has config.n vertices.
  void run();

  /// Targets chosen in the latest round.
  std::span<const VertexId> last_targets() const noexcept { return targets_; }

  /// Draws the m targets of a round from the current state without touching
  /// it. Used by the replay oracles.
  void select_targets(Rng& rng, TargetSelector& selector,
                      std::vector<VertexId>& out) const;

  const GeneratorConfig& config() const noexcept { return config_; }
  const Graph& graph() const noexcept { return graph_; }
  Graph take_graph() { return std::move(graph_); }
  const HyperedgeTableau* tableau() const noexcept {
    return tableau_ ? &*tableau_ : nullptr;
  }
  std::size_t initial_vertices() const noexcept { return initial_vertices_; }
  std::size_t initial_edges() const noexcept { return initial_edges_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  Rng& rng() noexcept { return rng_; }

  /// Fault injection for harness tests.
  void inject_skipped_swap() { ws_.skip_next_swap = true; }

 private:
  void setup(Graph initial);

  GeneratorConfig config_;
  Rng rng_;
  Graph graph_;
  std::optional<HyperedgeTableau> tableau_;
  std::size_t initial_vertices_ = 0;
  std::size_t initial_edges_ = 0;
  std::vector<std::string> warnings_;
  TargetSelector selector_;
  UpdateWorkspace ws_;
  std::vector<VertexId> targets_;
};

/// Runs a whole generation and returns the graph.
Graph generate(const GeneratorConfig& config);

}  // namespace exactpa
