#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "exactpa/graph.hpp"
#include "exactpa/rng.hpp"

namespace exactpa {

/// The list H of m-sets kept alongside the graph: every vertex sits in as
/// many hyperedges as its degree and at most once per hyperedge. Repeated
/// hyperedges are legal.
///
/// Members are stored flat (hyperedge p occupies slots [p*m, p*m+m)), so a
/// uniform hyperedge draw is one index draw and membership is a scan over m
/// contiguous ids. The optional incidence index maps each vertex to the
/// slots that hold it; `back_` maps each slot to its entry in that list so
/// every mutation is O(1). The lists share one arena and move to a block
/// of twice the size when full.
class HyperedgeTableau {
 public:
  explicit HyperedgeTableau(std::size_t arity, bool with_incidence = false)
      : m_(arity), indexed_(with_incidence) {}

  std::size_t arity() const noexcept { return m_; }
  std::size_t size() const noexcept { return members_.size() / m_; }
  bool empty() const noexcept { return members_.empty(); }
  bool has_incidence() const noexcept { return indexed_; }
  void reserve(std::size_t hyperedges) {
    members_.reserve(hyperedges * m_);
    if (indexed_) {
      back_.reserve(hyperedges * m_);
      arena_.reserve(3 * hyperedges * m_);
    }
  }

  std::span<const VertexId> hyperedge(std::size_t pos) const {
    return {members_.data() + pos * m_, m_};
  }
  std::span<const VertexId> members() const noexcept { return members_; }
  VertexId at_slot(std::size_t slot) const { return members_[slot]; }

  bool contains(std::size_t pos, VertexId v) const;
  /// Slot of v inside hyperedge pos, or npos.
  std::size_t slot_of(std::size_t pos, VertexId v) const;

  /// Appends a hyperedge; members must be m distinct ids.
  std::size_t append(std::span<const VertexId> members);
  /// Overwrites one slot (the swap primitive of the update rules).
  void set_slot(std::size_t slot, VertexId v);
  /// Removes hyperedge pos by moving the last hyperedge into its place.
  void remove_swap_last(std::size_t pos);

  /// Cache hints for batches of independent random reads.
  void prefetch_hyperedge(std::size_t pos) const {
    __builtin_prefetch(members_.data() + pos * m_);
  }
  void prefetch_incidence(VertexId v) const {
    if (v < lists_.size()) __builtin_prefetch(arena_.data() + lists_[v].offset);
  }

  /// Slots holding v. Requires the incidence index.
  std::span<const std::uint32_t> incidence(VertexId v) const;
  /// Index rebuilt from scratch, for consistency checks against the
  /// maintained one.
  std::vector<std::vector<std::uint32_t>> rebuild_incidence() const;

  std::uint64_t checksum() const noexcept;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  void link(std::size_t slot);
  void unlink(std::size_t slot);

  std::size_t m_;
  bool indexed_;
  std::vector<VertexId> members_;
  struct List {
    std::uint32_t offset = 0;
    std::uint32_t size = 0;
    std::uint32_t capacity = 0;
  };

  std::vector<List> lists_;
  std::vector<std::uint32_t> arena_;
  std::vector<std::uint32_t> back_;
};

/// Builds the tableau of g0 by random systematic partitioning of the bag
/// {v: degree(v)} into 2|E0|/m groups.
///
/// Throws InitDivisibility when m does not divide 2|E0| and InitInfeasible
/// when a vertex degree exceeds 2|E0|/m (the message names the vertex).
HyperedgeTableau init_tableau(const Graph& g0, std::size_t m, Rng& rng,
                              bool with_incidence = false);

/// Throws the init errors above without building anything.
void check_initial_feasibility(const Graph& g0, std::size_t m);

std::pair<std::size_t, std::span<const VertexId>> uniform_random_hyperedge(
    const HyperedgeTableau& t, Rng& rng);

struct DegreeMismatch {
  VertexId vertex;
  std::uint64_t degree;
  std::uint64_t occurrences;
};

struct InvariantReport {
  std::vector<std::size_t> duplicate_in_hyperedge;  // positions
  std::vector<std::size_t> unknown_vertex;          // positions
  bool arity_mismatch = false;
  std::vector<DegreeMismatch> degree_mismatch;
  bool invariant3_checked = false;
  std::uint64_t invariant3_violations = 0;
  std::vector<std::pair<VertexId, VertexId>> invariant3_examples;  // capped

  bool ok() const {
    return duplicate_in_hyperedge.empty() && unknown_vertex.empty() && !arity_mismatch &&
           degree_mismatch.empty() && invariant3_violations == 0;
  }
  std::string summary() const;
};

/// Scans the tableau against g. With `check_invariant3`, also counts every
/// ordered pair (v,u) such that each hyperedge holding v also holds u.
InvariantReport check_invariants(const HyperedgeTableau& t, const Graph& g,
                                 bool check_invariant3 = false);

/// One hyperedge per line, members sorted ascending.
void dump_tableau(const HyperedgeTableau& t, std::ostream& out);

}  // namespace exactpa
