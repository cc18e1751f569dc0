#include "exactpa/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "exactpa/error.hpp"

namespace exactpa {

VertexId Graph::add_vertex() {
  degrees_.push_back(0);
  return static_cast<VertexId>(degrees_.size() - 1);
}

void Graph::add_vertices(std::size_t count) {
  degrees_.resize(degrees_.size() + count, 0);
}

std::uint64_t Graph::key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

void Graph::reserve(std::size_t vertices, std::size_t edges) {
  degrees_.reserve(vertices);
  endpoints_.reserve(2 * edges);
  if (checked_) present_.reserve(edges);
}

void Graph::add_edge(VertexId a, VertexId b) {
  if (a == b) {
    throw Error(ErrorKind::InvariantViolation,
                "self-loop on vertex " + std::to_string(a));
  }
  if (a >= degrees_.size() || b >= degrees_.size()) {
    throw Error(ErrorKind::InvariantViolation,
                "edge " + std::to_string(a) + "-" + std::to_string(b) +
                    " references an unknown vertex");
  }
  if (checked_ && !present_.insert(key(a, b)).second) {
    throw Error(ErrorKind::InvariantViolation,
                "parallel edge " + std::to_string(a) + "-" + std::to_string(b));
  }
  endpoints_.push_back(a);
  endpoints_.push_back(b);
  ++degrees_[a];
  ++degrees_[b];
}

std::uint32_t Graph::max_degree() const noexcept {
  return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end());
}

Edge Graph::uniform_random_edge(Rng& rng) const {
  if (num_edges() == 0) throw Error(ErrorKind::EmptyPool, "graph has no edges");
  return edge(uniform_index(rng, num_edges()));
}

Adjacency::Adjacency(const Graph& g) : offsets_(g.num_vertices() + 1, 0) {
  const auto n = g.num_vertices();
  for (VertexId v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + g.degree(v);
  targets_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    auto [a, b] = g.edge(i);
    targets_[fill[a]++] = b;
    targets_[fill[b]++] = a;
  }
  for (VertexId v = 0; v < n; ++v) {
    std::sort(targets_.begin() + offsets_[v], targets_.begin() + offsets_[v + 1]);
  }
}

bool Adjacency::adjacent(VertexId a, VertexId b) const {
  auto na = neighbors(a);
  return std::binary_search(na.begin(), na.end(), b);
}

std::vector<std::uint64_t> triangles_per_vertex(const Graph& g) {
  const auto n = g.num_vertices();
  auto before = [&](VertexId a, VertexId b) {
    return g.degree(a) != g.degree(b) ? g.degree(a) < g.degree(b) : a < b;
  };
  // forward-oriented adjacency
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    auto [a, b] = g.edge(i);
    ++offsets[(before(a, b) ? a : b) + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  std::vector<VertexId> out(offsets[n]);
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    auto [a, b] = g.edge(i);
    if (!before(a, b)) std::swap(a, b);
    out[fill[a]++] = b;
  }

  std::vector<std::uint64_t> tri(n, 0);
  std::vector<VertexId> mark(n, static_cast<VertexId>(-1));
  for (VertexId u = 0; u < n; ++u) {
    for (auto k = offsets[u]; k < offsets[u + 1]; ++k) mark[out[k]] = u;
    for (auto k = offsets[u]; k < offsets[u + 1]; ++k) {
      const VertexId v = out[k];
      for (auto j = offsets[v]; j < offsets[v + 1]; ++j) {
        const VertexId w = out[j];
        if (mark[w] == u) {
          ++tri[u];
          ++tri[v];
          ++tri[w];
        }
      }
    }
  }
  return tri;
}

std::uint64_t triangle_count(const Graph& g) {
  std::uint64_t total = 0;
  for (auto t : triangles_per_vertex(g)) total += t;
  return total / 3;
}

bool is_connected(const Graph& g) {
  const auto n = g.num_vertices();
  if (n <= 1) return true;
  Adjacency adj(g);
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (VertexId w : adj.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

std::string validate_simple(const Graph& g) {
  std::unordered_set<std::uint64_t> pairs;
  std::vector<std::uint32_t> counted(g.num_vertices(), 0);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    auto [a, b] = g.edge(i);
    if (a == b) return "self-loop at edge " + std::to_string(i);
    auto lo = std::min(a, b), hi = std::max(a, b);
    if (!pairs.insert((static_cast<std::uint64_t>(lo) << 32) | hi).second) {
      return "duplicate pair " + std::to_string(lo) + "-" + std::to_string(hi);
    }
    ++counted[a];
    ++counted[b];
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (counted[v] != g.degree(v)) {
      return "degree mismatch at vertex " + std::to_string(v);
    }
  }
  return {};
}

void write_edge_list(const Graph& g, std::ostream& out) {
  std::string buffer;
  buffer.reserve(1 << 16);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    auto [a, b] = g.edge(i);
    if (a > b) std::swap(a, b);
    buffer += std::to_string(a);
    buffer += ' ';
    buffer += std::to_string(b);
    buffer += '\n';
    if (buffer.size() > (1 << 16) - 32) {
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      buffer.clear();
    }
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

void write_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  write_edge_list(g, out);
  if (!out) throw Error(ErrorKind::Io, "write failed on " + path);
}

Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  VertexId max_id = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    long long a = -1, b = -1;
    std::string rest;
    if (!(fields >> a >> b) || (fields >> rest) || a < 0 || b < 0 ||
        a > 0xfffffffeLL || b > 0xfffffffeLL) {
      throw Error(ErrorKind::Io, "malformed edge on line " + std::to_string(lineno));
    }
    edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
    max_id = std::max({max_id, static_cast<VertexId>(a), static_cast<VertexId>(b)});
  }
  Graph checked(true);
  if (!edges.empty()) checked.add_vertices(std::size_t{max_id} + 1);
  for (auto [a, b] : edges) checked.add_edge(a, b);

  Graph g;
  g.add_vertices(checked.num_vertices());
  for (auto [a, b] : edges) g.add_edge(a, b);
  return g;
}

Graph read_edge_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_edge_list(in);
}

Graph complete_graph(std::size_t k) {
  Graph g;
  g.add_vertices(k);
  for (VertexId a = 0; a < k; ++a) {
    for (VertexId b = a + 1; b < k; ++b) g.add_edge(a, b);
  }
  return g;
}

}  // namespace exactpa
