#include "exactpa/generators.hpp"

#include <algorithm>
#include <numeric>

#include "exactpa/error.hpp"

namespace exactpa {

namespace {

template <typename T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_index(rng, i)]);
  }
}

bool holds(std::span<const VertexId> set, VertexId v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

/// Adds one copy of v to a bag under construction, using `where` as a
/// vertex -> item index table that never needs clearing.
void bag_add(std::vector<BagItem>& items, std::vector<std::uint32_t>& where, VertexId v,
             std::uint32_t copies = 1) {
  if (v >= where.size()) where.resize(std::max<std::size_t>(std::size_t{v} + 1, 2 * where.size()));
  const std::uint32_t idx = where[v];
  if (idx < items.size() && items[idx].element == v) {
    items[idx].frequency += copies;
  } else {
    where[v] = static_cast<std::uint32_t>(items.size());
    items.push_back({v, copies});
  }
}

/// Visits the members of hyperedge `pos` in uniformly random order and
/// returns the slot of the first one not in `exclude`.
std::size_t random_member_not_in(const HyperedgeTableau& t, std::size_t pos,
                                 std::span<const VertexId> exclude, Rng& rng,
                                 std::vector<std::size_t>& order) {
  const std::size_t m = t.arity();
  order.resize(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t k = 0; k < m; ++k) {
    std::swap(order[k], order[k + uniform_index(rng, m - k)]);
    const std::size_t slot = pos * m + order[k];
    if (!holds(exclude, t.at_slot(slot))) return slot;
  }
  throw Error(ErrorKind::InvariantViolation,
              "hyperedge " + std::to_string(pos) + " has no member to donate");
}

/// Keeps only the entries of `set` that occur in hyperedge pos.
void intersect_with(std::vector<VertexId>& set, const HyperedgeTableau& t, std::size_t pos) {
  std::erase_if(set, [&](VertexId y) { return !t.contains(pos, y); });
}

bool subset_of(const std::vector<VertexId>& set, const HyperedgeTableau& t, std::size_t pos) {
  return std::all_of(set.begin(), set.end(), [&](VertexId y) { return t.contains(pos, y); });
}

/// Picks the hyperedge in which donated member w gives way to v.
///
/// `pending` starts as hB minus {w, v}: the members y for which w must keep
/// some hyperedge without y once the swap is done. Hyperedges that already
/// took v this round (and hA) cannot receive v, but do serve as witnesses,
/// so they only shrink `pending`. The remaining candidates are the donor h
/// first, then up to m-1 other v-free hyperedges of w in random order,
/// intersected in turn. The donor is kept when it contains what is still
/// pending after all candidates; otherwise the first candidate that contained
/// everything pending before it is used. Either choice leaves a witness for
/// every y it does not itself contain.
std::size_t replacement_slot(const HyperedgeTableau& t, std::span<const VertexId> hA,
                             std::span<const VertexId> hB, VertexId v, VertexId w,
                             std::size_t donor, Rng& rng, UpdateWorkspace& ws) {
  const std::size_t m = t.arity();
  auto& pending = ws.cascade;
  pending.clear();
  for (VertexId y : hB) {
    if (y != w && y != v) pending.push_back(y);
  }
  for (auto slot : t.incidence(v)) {
    const std::size_t pos = slot / m;
    if (t.contains(pos, w)) intersect_with(pending, t, pos);
  }
  if (holds(hA, w)) {
    std::erase_if(pending, [&](VertexId y) { return !holds(hA, y); });
  }

  const bool donor_usable = !t.contains(donor, v);
  const std::size_t donor_slot = t.slot_of(donor, w);
  if (donor_usable && pending.empty()) return donor_slot;

  auto entries = t.incidence(w);
  ws.shuffle.reset(entries.size());
  std::size_t examined = 0;
  std::size_t stable = HyperedgeTableau::npos;
  auto& batch = ws.candidates;
  while (examined + 1 < m && ws.shuffle.remaining() > 0) {
    // draw the next few candidates together so their reads overlap
    batch.clear();
    while (batch.size() + examined + 1 < m && ws.shuffle.remaining() > 0) {
      batch.push_back(entries[ws.shuffle.next(rng)]);
      t.prefetch_hyperedge(batch.back() / m);
    }
    for (std::size_t slot : batch) {
      const std::size_t pos = slot / m;
      if (pos == donor || t.contains(pos, v)) continue;
      ++examined;
      if (subset_of(pending, t, pos)) {
        if (!donor_usable) return slot;
        if (stable == HyperedgeTableau::npos) stable = slot;
      } else {
        intersect_with(pending, t, pos);
      }
      if (donor_usable && pending.empty()) return donor_slot;
    }
  }
  if (donor_usable && subset_of(pending, t, donor)) return donor_slot;
  if (stable != HyperedgeTableau::npos) return stable;
  throw Error(ErrorKind::InvariantViolation,
              "no admissible hyperedge to replace vertex " + std::to_string(w));
}

}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::SeA: return "se-a";
    case Algorithm::SeB: return "se-b";
    case Algorithm::SeBStar: return "se-b-star";
    case Algorithm::SeC: return "se-c";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "se-a") return Algorithm::SeA;
  if (name == "se-b") return Algorithm::SeB;
  if (name == "se-b-star" || name == "se-b*") return Algorithm::SeBStar;
  if (name == "se-c") return Algorithm::SeC;
  throw Error(ErrorKind::Config, "unknown algorithm '" + name + "'");
}

InitialGraphSpec InitialGraphSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorKind::Config, "initial graph must be complete:K, gnm:V or file:PATH");
  }
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (kind == "file") {
    if (arg.empty()) throw Error(ErrorKind::Config, "file: needs a path");
    return file(arg);
  }
  std::size_t value = 0;
  try {
    std::size_t used = 0;
    value = std::stoul(arg, &used);
    if (used != arg.size()) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config, "bad vertex count in '" + text + "'");
  }
  if (kind == "complete") return complete(value);
  if (kind == "gnm") return forced_gnm(value);
  throw Error(ErrorKind::Config, "unknown initial graph kind '" + kind + "'");
}

std::string InitialGraphSpec::to_string() const {
  switch (kind) {
    case Kind::Complete: return "complete:" + std::to_string(vertices);
    case Kind::ForcedGnm: return "gnm:" + std::to_string(vertices);
    case Kind::File: return "file:" + path;
  }
  return {};
}

std::vector<std::string> validate(const GeneratorConfig& c) {
  if (c.m < 2) throw Error(ErrorKind::Config, "m must be at least 2");
  if (c.z < 1) throw Error(ErrorKind::Config, "z must be at least 1");
  if (c.algorithm == Algorithm::SeA && c.m != 2) {
    throw Error(ErrorKind::Config, "se-a requires m = 2");
  }
  if (c.m > 64) throw Error(ErrorKind::Config, "m above 64 is not supported");
  std::vector<std::string> warnings;
  if (c.algorithm == Algorithm::SeBStar && c.z < c.m) {
    warnings.push_back("se-b-star positivity of every m-set needs z >= m");
  }
  if (c.algorithm == Algorithm::SeC && c.sec_shuffle_width != 0 && c.sec_shuffle_width < c.m) {
    throw Error(ErrorKind::Config, "SE-C shuffle width must be at least m");
  }
  return warnings;
}

std::size_t forced_edge_count(std::size_t v0, std::size_t m) {
  const std::size_t unit = std::lcm(m, std::size_t{2}) / 2;
  const std::size_t complete = v0 * (v0 - (v0 > 0 ? 1 : 0)) / 2;
  return complete / unit * unit;
}

namespace {

void check_connected(const Graph& g) {
  if (!is_connected(g)) {
    throw Error(ErrorKind::InitInfeasible, "initial graph is not connected");
  }
}

Graph forced_gnm(std::size_t v0, std::size_t m, Rng& rng, std::size_t budget) {
  const std::size_t edges = forced_edge_count(v0, m);
  if (edges == 0) {
    throw Error(ErrorKind::InitDivisibility,
                "no edge count on " + std::to_string(v0) + " vertices is divisible for m = " +
                    std::to_string(m));
  }
  if (edges + 1 < v0) {
    throw Error(ErrorKind::InitInfeasible,
                std::to_string(edges) + " edges cannot connect " + std::to_string(v0) +
                    " vertices");
  }
  std::vector<Edge> pairs;
  pairs.reserve(v0 * (v0 - 1) / 2);
  for (VertexId a = 0; a < v0; ++a) {
    for (VertexId b = a + 1; b < v0; ++b) pairs.emplace_back(a, b);
  }
  const std::size_t cap = 2 * edges / m;
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    Graph g;
    g.add_vertices(v0);
    for (auto idx : choose_without_replacement(pairs.size(), edges, rng)) {
      g.add_edge(pairs[idx].first, pairs[idx].second);
    }
    if (g.max_degree() <= cap && is_connected(g)) return g;
  }
  throw Error(ErrorKind::RejectionBudget,
              "no connected feasible G(" + std::to_string(v0) + ", " + std::to_string(edges) +
                  ") within " + std::to_string(budget) + " draws");
}

}  // namespace

Graph build_initial(const InitialGraphSpec& spec, std::size_t m, Rng& rng,
                    std::size_t rejection_budget) {
  Graph g;
  switch (spec.kind) {
    case InitialGraphSpec::Kind::Complete:
      g = complete_graph(spec.vertices);
      break;
    case InitialGraphSpec::Kind::ForcedGnm:
      g = forced_gnm(spec.vertices, m, rng, rejection_budget);
      break;
    case InitialGraphSpec::Kind::File:
      g = read_edge_list(spec.path);
      break;
  }
  check_initial_feasibility(g, m);
  check_connected(g);
  return g;
}

Rational lambda_factor(std::uint64_t e0, std::uint64_t m) {
  if (e0 == 0 || m == 0) throw Error(ErrorKind::Domain, "lambda needs e0 >= 1 and m >= 1");
  const std::uint64_t copies = 2 * e0;
  Rational r{std::lcm(copies, m), copies};
  const auto g = std::gcd(r.num, r.den);
  return {r.num / g, r.den / g};
}

void TargetSelector::select(std::span<const VertexId> pool, std::size_t arity,
                            std::size_t z, std::size_t m, Rng& rng,
                            std::vector<VertexId>& out) {
  const std::size_t sets = pool.size() / arity;
  if (sets == 0) throw Error(ErrorKind::EmptyPool, "selection pool is empty");
  items_.clear();
  // small bags: a scan of the items beats the vertex-indexed table, which
  // costs cache misses once the graph outgrows the cache
  const bool small = z * arity <= 32;
  for (std::size_t i = 0; i < z; ++i) {
    const std::size_t base = uniform_index(rng, sets) * arity;
    for (std::size_t j = 0; j < arity; ++j) {
      const VertexId v = pool[base + j];
      if (!small) {
        bag_add(items_, where_, v);
        continue;
      }
      auto it = std::find_if(items_.begin(), items_.end(),
                             [v](const BagItem& b) { return b.element == v; });
      if (it != items_.end()) {
        ++it->frequency;
      } else {
        items_.push_back({v, 1});
      }
    }
  }
  rss_sample_into(items_, static_cast<std::uint64_t>(z) * arity, m, rng, out);
}

VertexId se_a_step(Graph& g, std::size_t z, Rng& rng, TargetSelector& selector,
                   std::vector<VertexId>& targets) {
  targets.clear();
  selector.select(g.endpoints(), 2, z, 2, rng, targets);
  const VertexId v = g.add_vertex();
  g.add_edge(v, targets[0]);
  g.add_edge(v, targets[1]);
  return v;
}

void update_se_b(HyperedgeTableau& t, VertexId v, std::span<const VertexId> u, Rng& rng,
                 UpdateWorkspace& ws) {
  const std::size_t m = t.arity();
  ws.cascade.assign(u.begin(), u.end());
  shuffle_in_place(ws.cascade, rng);
  const std::size_t half = (m + 1) / 2;
  ws.first.assign(ws.cascade.begin(), ws.cascade.begin() + half);
  ws.second.assign(ws.cascade.begin() + half, ws.cascade.end());
  ws.first.push_back(v);
  ws.second.push_back(v);

  if (m > 2) {
    ws.shuffle.reset(t.size());
    for (std::size_t i = 0; i + 2 < m; ++i) {
      const std::size_t donor = ws.shuffle.next(rng);
      const bool first_open = ws.first.size() < m;
      const bool second_open = ws.second.size() < m;
      auto& receiver = (first_open && second_open)
                           ? (uniform_index(rng, 2) == 0 ? ws.first : ws.second)
                           : (first_open ? ws.first : ws.second);
      const std::size_t slot = random_member_not_in(t, donor, receiver, rng, ws.order);
      receiver.push_back(t.at_slot(slot));
      if (ws.skip_next_swap) {
        ws.skip_next_swap = false;
      } else {
        t.set_slot(slot, v);
      }
    }
  }
  t.append(ws.first);
  t.append(ws.second);
}

void update_se_b_star(HyperedgeTableau& t, VertexId v, std::span<const VertexId> u,
                      Rng& rng, UpdateWorkspace& ws) {
  const std::size_t m = t.arity();
  auto& hA = ws.first;
  auto& hB = ws.second;
  hA.assign(u.begin(), u.end() - 1);
  hA.push_back(v);
  hB.assign({u.back(), v});

  if (m > 2) {
    ws.donors.clear();
    ws.donor_slots.clear();
    ws.shuffle.reset(t.size());
    for (std::size_t i = 0; i + 2 < m; ++i) {
      ws.donors.push_back(ws.shuffle.next(rng));
      t.prefetch_hyperedge(ws.donors.back());
    }
    for (std::size_t donor : ws.donors) {
      const std::size_t slot = random_member_not_in(t, donor, hB, rng, ws.order);
      hB.push_back(t.at_slot(slot));
    }
    for (std::size_t i = 2; i < hB.size(); ++i) t.prefetch_incidence(hB[i]);
    for (std::size_t i = 0; i + 2 < m; ++i) {
      const VertexId w = hB[2 + i];
      const std::size_t slot = replacement_slot(t, hA, hB, v, w, ws.donors[i], rng, ws);
      if (ws.skip_next_swap) {
        ws.skip_next_swap = false;
      } else {
        t.set_slot(slot, v);
      }
    }
  }
  t.append(hA);
  t.append(hB);
}

void update_se_c(HyperedgeTableau& t, VertexId v, std::span<const VertexId> u, Rng& rng,
                 UpdateWorkspace& ws, std::size_t width) {
  const std::size_t m = t.arity();
  // early on the tableau may hold fewer than width-2 hyperedges
  width = std::max(m, std::min(width, t.size() + 2));
  const std::size_t removed = width - 2;

  ws.donors.clear();
  ws.shuffle.reset(t.size());
  for (std::size_t i = 0; i < removed; ++i) ws.donors.push_back(ws.shuffle.next(rng));

  ws.items.clear();
  for (std::size_t pos : ws.donors) {
    for (VertexId x : t.hyperedge(pos)) bag_add(ws.items, ws.where, x);
  }
  bag_add(ws.items, ws.where, v, static_cast<std::uint32_t>(m));
  for (VertexId x : u) bag_add(ws.items, ws.where, x);

  std::sort(ws.donors.begin(), ws.donors.end(), std::greater<>());
  for (std::size_t pos : ws.donors) t.remove_swap_last(pos);

  rsp_partition_into(ws.items, width, m, rng, ws.groups);
  for (std::size_t i = 0; i < width; ++i) {
    t.append(std::span<const VertexId>(ws.groups.data() + i * m, m));
  }
}

Generator::Generator(const GeneratorConfig& config) : config_(config), rng_(config.seed) {
  warnings_ = validate(config_);
  setup(build_initial(config_.initial, config_.m, rng_, config_.gnm_rejection_budget));
}

Generator::Generator(const GeneratorConfig& config, Graph initial)
    : config_(config), rng_(config.seed) {
  warnings_ = validate(config_);
  check_initial_feasibility(initial, config_.m);
  check_connected(initial);
  setup(std::move(initial));
}

void Generator::setup(Graph initial) {
  if (config_.checked && !initial.checked()) {
    Graph g(true);
    g.add_vertices(initial.num_vertices());
    for (std::size_t i = 0; i < initial.num_edges(); ++i) {
      auto [a, b] = initial.edge(i);
      g.add_edge(a, b);
    }
    initial = std::move(g);
  }
  graph_ = std::move(initial);
  initial_vertices_ = graph_.num_vertices();
  initial_edges_ = graph_.num_edges();
  if (config_.n < initial_vertices_) {
    throw Error(ErrorKind::Config, "n = " + std::to_string(config_.n) +
                                       " is below the initial graph order " +
                                       std::to_string(initial_vertices_));
  }
  const std::size_t rounds = config_.n - initial_vertices_;
  graph_.reserve(config_.n, initial_edges_ + config_.m * rounds);
  if (config_.algorithm == Algorithm::SeA) return;

  const bool star = config_.algorithm == Algorithm::SeBStar;
  tableau_ = init_tableau(graph_, config_.m, rng_, star);
  tableau_->reserve(tableau_->size() + 2 * rounds);
  if (tableau_->size() + 2 < config_.m) {
    throw Error(ErrorKind::InitInfeasible,
                "initial tableau has " + std::to_string(tableau_->size()) +
                    " hyperedges; m - 2 = " + std::to_string(config_.m - 2) + " are needed");
  }
  if (star) {
    const auto report = check_invariants(*tableau_, graph_, true);
    if (report.invariant3_violations > 0) {
      warnings_.push_back("initial tableau violates invariant 3 for " +
                          std::to_string(report.invariant3_violations) +
                          " ordered pairs; use complete:" + std::to_string(config_.m + 1));
    }
  }
}

void Generator::select_targets(Rng& rng, TargetSelector& selector,
                               std::vector<VertexId>& out) const {
  if (config_.algorithm == Algorithm::SeA) {
    selector.select(graph_.endpoints(), 2, config_.z, 2, rng, out);
  } else {
    selector.select(tableau_->members(), config_.m, config_.z, config_.m, rng, out);
  }
}

VertexId Generator::step() {
  if (config_.algorithm == Algorithm::SeA) {
    return se_a_step(graph_, config_.z, rng_, selector_, targets_);
  }
  targets_.clear();
  select_targets(rng_, selector_, targets_);
  const VertexId v = graph_.add_vertex();
  for (VertexId u : targets_) graph_.add_edge(v, u);
  switch (config_.algorithm) {
    case Algorithm::SeB:
      update_se_b(*tableau_, v, targets_, rng_, ws_);
      break;
    case Algorithm::SeBStar:
      update_se_b_star(*tableau_, v, targets_, rng_, ws_);
      break;
    case Algorithm::SeC:
      update_se_c(*tableau_, v, targets_, rng_, ws_,
                  config_.sec_shuffle_width ? config_.sec_shuffle_width : config_.m);
      break;
    case Algorithm::SeA:
      break;
  }
  return v;
}

void Generator::run() {
  while (graph_.num_vertices() < config_.n) step();
}

Graph generate(const GeneratorConfig& config) {
  Generator gen(config);
  gen.run();
  return gen.take_graph();
}

}  // namespace exactpa
