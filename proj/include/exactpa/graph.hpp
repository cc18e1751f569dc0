#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "exactpa/rng.hpp"

namespace exactpa {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/// Growing simple undirected graph.
///
/// Edges live in a flat append-only pool (two endpoints per edge), so a
/// uniform edge draw is a single index draw and the pool doubles as a
/// degree-weighted vertex pool. Adjacency is never stored here; see
/// `Adjacency` for the analysis-side view.
class Graph {
 public:
  /// `checked` enables the duplicate-edge probe on every insertion.
  explicit Graph(bool checked = false) : checked_(checked) {}

  VertexId add_vertex();
  void add_vertices(std::size_t count);
  /// Capacity hint for a known final size.
  void reserve(std::size_t vertices, std::size_t edges);

  /// Self-loops and unknown ids always throw; duplicates throw in checked mode.
  void add_edge(VertexId a, VertexId b);

  std::size_t num_vertices() const noexcept { return degrees_.size(); }
  std::size_t num_edges() const noexcept { return endpoints_.size() / 2; }
  std::uint32_t degree(VertexId v) const { return degrees_[v]; }
  std::span<const std::uint32_t> degrees() const noexcept { return degrees_; }
  std::uint32_t max_degree() const noexcept;

  Edge edge(std::size_t index) const {
    return {endpoints_[2 * index], endpoints_[2 * index + 1]};
  }
  /// Endpoints of all edges, edge i at [2i, 2i+1].
  std::span<const VertexId> endpoints() const noexcept { return endpoints_; }

  Edge uniform_random_edge(Rng& rng) const;

  bool checked() const noexcept { return checked_; }

  bool operator==(const Graph& other) const {
    return degrees_ == other.degrees_ && endpoints_ == other.endpoints_;
  }

 private:
  static std::uint64_t key(VertexId a, VertexId b);

  bool checked_;
  std::vector<VertexId> endpoints_;
  std::vector<std::uint32_t> degrees_;
  std::unordered_set<std::uint64_t> present_;
};

/// Sorted adjacency lists built once from a finished graph.
class Adjacency {
 public:
  explicit Adjacency(const Graph& g);

  std::span<const VertexId> neighbors(VertexId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  bool adjacent(VertexId a, VertexId b) const;
  std::size_t num_vertices() const noexcept { return offsets_.size() - 1; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> targets_;
};

/// Triangles through each vertex. Edges are oriented from lower to higher
/// (degree, id) rank so the work is O(|E|^1.5).
std::vector<std::uint64_t> triangles_per_vertex(const Graph& g);
std::uint64_t triangle_count(const Graph& g);

bool is_connected(const Graph& g);

/// Full scan for self-loops, duplicate pairs and degree/pool mismatches.
/// Returns an empty string when the graph is consistent.
std::string validate_simple(const Graph& g);

/// "a b" per line with a < b, LF terminated, no header.
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list(const Graph& g, const std::string& path);
/// Vertex count is one past the largest id seen. Throws ErrorKind::Io on
/// malformed lines and InvariantViolation on loops or repeated pairs.
Graph read_edge_list(std::istream& in);
Graph read_edge_list(const std::string& path);

Graph complete_graph(std::size_t k);

}  // namespace exactpa
