#include "exactpa/tableau.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "exactpa/error.hpp"
#include "exactpa/sampling.hpp"

namespace exactpa {

bool HyperedgeTableau::contains(std::size_t pos, VertexId v) const {
  return slot_of(pos, v) != npos;
}

std::size_t HyperedgeTableau::slot_of(std::size_t pos, VertexId v) const {
  const std::size_t base = pos * m_;
  for (std::size_t j = 0; j < m_; ++j) {
    if (members_[base + j] == v) return base + j;
  }
  return npos;
}

void HyperedgeTableau::link(std::size_t slot) {
  const VertexId v = members_[slot];
  if (v >= lists_.size()) lists_.resize(std::size_t{v} + 1);
  if (back_.size() < members_.size()) back_.resize(members_.size());
  List& list = lists_[v];
  if (list.size == list.capacity) {
    // relocate to a block twice as large at the end of the arena; the old
    // block is abandoned, which costs at most a constant factor of space
    const std::uint32_t capacity =
        std::max<std::uint32_t>(static_cast<std::uint32_t>(2 * m_), 2 * list.capacity);
    const auto offset = static_cast<std::uint32_t>(arena_.size());
    arena_.resize(arena_.size() + capacity);
    std::copy_n(arena_.begin() + list.offset, list.size, arena_.begin() + offset);
    list.offset = offset;
    list.capacity = capacity;
  }
  back_[slot] = list.size;
  arena_[list.offset + list.size++] = static_cast<std::uint32_t>(slot);
}

void HyperedgeTableau::unlink(std::size_t slot) {
  List& list = lists_[members_[slot]];
  const std::uint32_t idx = back_[slot];
  const std::uint32_t moved = arena_[list.offset + --list.size];
  arena_[list.offset + idx] = moved;
  back_[moved] = idx;
}

std::size_t HyperedgeTableau::append(std::span<const VertexId> members) {
  if (members.size() != m_) {
    throw Error(ErrorKind::Arity, "hyperedge of size " + std::to_string(members.size()) +
                                      " in a tableau of arity " + std::to_string(m_));
  }
  const std::size_t pos = size();
  members_.insert(members_.end(), members.begin(), members.end());
  if (indexed_) {
    for (std::size_t j = 0; j < m_; ++j) link(pos * m_ + j);
  }
  return pos;
}

void HyperedgeTableau::set_slot(std::size_t slot, VertexId v) {
  if (indexed_) unlink(slot);
  members_[slot] = v;
  if (indexed_) link(slot);
}

void HyperedgeTableau::remove_swap_last(std::size_t pos) {
  const std::size_t last = size() - 1;
  if (indexed_) {
    for (std::size_t j = 0; j < m_; ++j) unlink(pos * m_ + j);
  }
  if (pos != last) {
    for (std::size_t j = 0; j < m_; ++j) {
      const std::size_t from = last * m_ + j;
      const std::size_t to = pos * m_ + j;
      members_[to] = members_[from];
      if (indexed_) {
        back_[to] = back_[from];
        arena_[lists_[members_[to]].offset + back_[to]] = static_cast<std::uint32_t>(to);
      }
    }
  }
  members_.resize(last * m_);
  if (indexed_) back_.resize(members_.size());
}

std::span<const std::uint32_t> HyperedgeTableau::incidence(VertexId v) const {
  if (!indexed_) throw Error(ErrorKind::Config, "tableau has no incidence index");
  if (v >= lists_.size()) return {};
  return {arena_.data() + lists_[v].offset, lists_[v].size};
}

std::vector<std::vector<std::uint32_t>> HyperedgeTableau::rebuild_incidence() const {
  std::vector<std::vector<std::uint32_t>> index;
  for (std::size_t slot = 0; slot < members_.size(); ++slot) {
    const VertexId v = members_[slot];
    if (v >= index.size()) index.resize(std::size_t{v} + 1);
    index[v].push_back(static_cast<std::uint32_t>(slot));
  }
  return index;
}

std::uint64_t HyperedgeTableau::checksum() const noexcept {
  std::uint64_t h = m_;
  for (VertexId v : members_) h = mix_seed(h ^ v);
  return h;
}

void check_initial_feasibility(const Graph& g0, std::size_t m) {
  const std::uint64_t copies = 2 * static_cast<std::uint64_t>(g0.num_edges());
  if (m == 0 || copies == 0 || copies % m != 0) {
    throw Error(ErrorKind::InitDivisibility,
                "initial graph has 2|E0| = " + std::to_string(copies) +
                    " vertex copies, not divisible by m = " + std::to_string(m));
  }
  const std::uint64_t s = copies / m;
  for (VertexId v = 0; v < g0.num_vertices(); ++v) {
    if (g0.degree(v) > s) {
      throw Error(ErrorKind::InitInfeasible,
                  "vertex " + std::to_string(v) + " has degree " +
                      std::to_string(g0.degree(v)) + " > 2|E0|/m = " + std::to_string(s));
    }
  }
}

HyperedgeTableau init_tableau(const Graph& g0, std::size_t m, Rng& rng,
                              bool with_incidence) {
  check_initial_feasibility(g0, m);
  const std::size_t s = 2 * g0.num_edges() / m;
  std::vector<BagItem> items;
  for (VertexId v = 0; v < g0.num_vertices(); ++v) {
    if (g0.degree(v) > 0) items.push_back({v, g0.degree(v)});
  }
  std::vector<VertexId> groups;
  rsp_partition_into(items, s, m, rng, groups);
  HyperedgeTableau t(m, with_incidence);
  for (std::size_t i = 0; i < s; ++i) {
    t.append(std::span<const VertexId>(groups.data() + i * m, m));
  }
  return t;
}

std::pair<std::size_t, std::span<const VertexId>> uniform_random_hyperedge(
    const HyperedgeTableau& t, Rng& rng) {
  if (t.empty()) throw Error(ErrorKind::EmptyPool, "tableau has no hyperedges");
  const std::size_t pos = uniform_index(rng, t.size());
  return {pos, t.hyperedge(pos)};
}

std::string InvariantReport::summary() const {
  std::ostringstream out;
  out << duplicate_in_hyperedge.size() << " duplicate-in-hyperedge, "
      << unknown_vertex.size() << " unknown-vertex, "
      << degree_mismatch.size() << " degree-mismatch";
  if (arity_mismatch) out << ", arity mismatch";
  if (invariant3_checked) out << ", " << invariant3_violations << " invariant-3";
  return out.str();
}

InvariantReport check_invariants(const HyperedgeTableau& t, const Graph& g,
                                 bool check_invariant3) {
  InvariantReport report;
  const std::size_t m = t.arity();
  const std::size_t n = g.num_vertices();
  if (m == 0 || t.members().size() % m != 0) {
    report.arity_mismatch = true;
    return report;
  }

  std::vector<std::uint64_t> occurrences(n, 0);
  std::vector<std::size_t> seen_at(n, t.npos);
  for (std::size_t pos = 0; pos < t.size(); ++pos) {
    bool duplicate = false, unknown = false;
    for (VertexId v : t.hyperedge(pos)) {
      if (v >= n) {
        unknown = true;
        continue;
      }
      if (seen_at[v] == pos) duplicate = true;
      seen_at[v] = pos;
      ++occurrences[v];
    }
    if (duplicate) report.duplicate_in_hyperedge.push_back(pos);
    if (unknown) report.unknown_vertex.push_back(pos);
  }
  for (VertexId v = 0; v < n; ++v) {
    if (occurrences[v] != g.degree(v)) {
      report.degree_mismatch.push_back({v, g.degree(v), occurrences[v]});
    }
  }

  if (check_invariant3) {
    report.invariant3_checked = true;
    // u violates (v,u) iff u occurs in every hyperedge holding v
    std::vector<std::vector<std::uint32_t>> holding(n);
    for (std::size_t pos = 0; pos < t.size(); ++pos) {
      for (VertexId v : t.hyperedge(pos)) {
        if (v < n) holding[v].push_back(static_cast<std::uint32_t>(pos));
      }
    }
    std::vector<std::uint32_t> together(n, 0);
    std::vector<VertexId> touched;
    constexpr std::size_t kExampleCap = 64;
    for (VertexId v = 0; v < n; ++v) {
      if (holding[v].empty()) {
        // no hyperedge holds v at all: every ordered pair (v,u) fails
        report.invariant3_violations += n - 1;
        if (report.invariant3_examples.size() < kExampleCap && n > 1) {
          report.invariant3_examples.emplace_back(v, v == 0 ? 1 : 0);
        }
        continue;
      }
      touched.clear();
      for (auto pos : holding[v]) {
        for (VertexId u : t.hyperedge(pos)) {
          if (u >= n || u == v) continue;
          if (together[u]++ == 0) touched.push_back(u);
        }
      }
      for (VertexId u : touched) {
        if (together[u] == holding[v].size()) {
          ++report.invariant3_violations;
          if (report.invariant3_examples.size() < kExampleCap) {
            report.invariant3_examples.emplace_back(v, u);
          }
        }
        together[u] = 0;
      }
    }
  }
  return report;
}

void dump_tableau(const HyperedgeTableau& t, std::ostream& out) {
  std::vector<VertexId> row;
  for (std::size_t pos = 0; pos < t.size(); ++pos) {
    auto h = t.hyperedge(pos);
    row.assign(h.begin(), h.end());
    std::sort(row.begin(), row.end());
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ' ';
      out << row[j];
    }
    out << '\n';
  }
}

}  // namespace exactpa
