// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "exactpa/analysis.hpp"
#include "exactpa/error.hpp"
#include "exactpa/generators.hpp"
#include "exactpa/sampling.hpp"
#include "exactpa/tableau.hpp"
#include "exactpa/verify.hpp"

using namespace exactpa;

namespace {

constexpr double kAlpha = 0.01;
constexpr double kSlopeTolerance = 0.2;
constexpr double kRatioLow = 1.6, kRatioHigh = 2.6;

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GeneratorConfig config_for(Algorithm a, std::size_t n, std::size_t m, std::size_t z,
                           std::uint64_t seed, InitialGraphSpec init) {
  GeneratorConfig c;
  c.algorithm = a;
  c.n = n;
  c.m = m;
  c.z = z;
  c.seed = seed;
  c.initial = std::move(init);
  return c;
}

Graph star_graph(std::size_t n) {
  Graph g;
  g.add_vertices(n);
  for (VertexId v = 1; v < n; ++v) g.add_edge(0, v);
  return g;
}

Graph path_graph(std::size_t n) {
  Graph g;
  g.add_vertices(n);
  for (VertexId v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

Graph cycle_graph(std::size_t n) {
  Graph g = path_graph(n);
  g.add_edge(static_cast<VertexId>(n - 1), 0);
  return g;
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d %s: %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. strpips inclusion from frozen states
void criterion1() {
  struct State {
    std::string name;
    std::function<Generator()> make;
    std::size_t steps;
  };
  auto from = [](Algorithm a, std::size_t m, std::size_t z, std::uint64_t seed,
                 InitialGraphSpec init) {
    return [=] { return Generator(config_for(a, 100000, m, z, seed, init)); };
  };
  auto from_graph = [](Algorithm a, std::size_t m, std::size_t z, std::uint64_t seed,
                       std::function<Graph()> g) {
    return [=] { return Generator(config_for(a, 100000, m, z, seed, {}), g()); };
  };
  using K = InitialGraphSpec;
  std::vector<std::pair<Algorithm, std::vector<State>>> plan = {
      {Algorithm::SeA,
       {{"P3 z=1", from_graph(Algorithm::SeA, 2, 1, 1, [] { return path_graph(3); }), 0},
        {"star5 z=2", from_graph(Algorithm::SeA, 2, 2, 2, [] { return star_graph(5); }), 0},
        {"K2+40 z=1", from(Algorithm::SeA, 2, 1, 3, K::complete(2)), 40},
        {"K2+300 z=3", from(Algorithm::SeA, 2, 3, 4, K::complete(2)), 300},
        {"star5+1000 z=2", from_graph(Algorithm::SeA, 2, 2, 5, [] { return star_graph(5); }), 1000}}},
      {Algorithm::SeB,
       {{"K4 m=2 z=3", from(Algorithm::SeB, 2, 3, 6, K::complete(4)), 0},
        {"K5 m=4 z=4 +30", from(Algorithm::SeB, 4, 4, 7, K::complete(5)), 30},
        {"K4 m=3 z=1 +200", from(Algorithm::SeB, 3, 1, 8, K::complete(4)), 200},
        {"gnm10 m=4 z=2", from(Algorithm::SeB, 4, 2, 9, K::forced_gnm(10)), 0},
        {"K6 m=5 z=5 +1000", from(Algorithm::SeB, 5, 5, 10, K::complete(6)), 1000}}},
      {Algorithm::SeBStar,
       {{"K4 m=3 z=3", from(Algorithm::SeBStar, 3, 3, 11, K::complete(4)), 0},
        {"K4 m=3 z=3 +25", from(Algorithm::SeBStar, 3, 3, 12, K::complete(4)), 25},
        {"K5 m=4 z=4 +200", from(Algorithm::SeBStar, 4, 4, 13, K::complete(5)), 200},
        {"gnm9 m=3 z=4", from(Algorithm::SeBStar, 3, 4, 14, K::forced_gnm(9)), 0},
        {"K6 m=5 z=5 +1000", from(Algorithm::SeBStar, 5, 5, 15, K::complete(6)), 1000}}},
      {Algorithm::SeC,
       {{"K5 m=4 z=4 +50", from(Algorithm::SeC, 4, 4, 16, K::complete(5)), 50},
        {"K4 m=3 z=2", from(Algorithm::SeC, 3, 2, 17, K::complete(4)), 0},
        {"gnm10 m=4 z=1", from(Algorithm::SeC, 4, 1, 18, K::forced_gnm(10)), 0},
        {"K3 m=3 z=3 +300", from(Algorithm::SeC, 3, 3, 19, K::complete(3)), 300},
        {"K6 m=5 z=5 +1000", from(Algorithm::SeC, 5, 5, 20, K::complete(6)), 1000}}},
  };
  constexpr std::uint64_t N = 1000000;
  bool all = true;
  std::ostringstream detail;
  double worst_z = 0, slowest = 0;
  int states = 0;
  for (auto& [alg, list] : plan) {
    for (auto& st : list) {
      Generator gen = st.make();
      for (std::size_t i = 0; i < st.steps; ++i) gen.step();
      const auto t0 = std::chrono::steady_clock::now();
      const auto r = inclusion_oracle(gen, N, 1000 + states, workers(), kAlpha);
      const double secs = seconds_since(t0);
      slowest = std::max(slowest, secs);
      worst_z = std::max(worst_z, r.max_abs_z);
      ++states;
      if (!r.pass || secs >= 120) {
        all = false;
        detail << " [" << to_string(alg) << " " << st.name << " max|z|=" << r.max_abs_z
               << " threshold=" << r.threshold << " " << secs << "s]";
      }
    }
  }
  report(1, all,
         fmt("%d frozen states, N=%llu, worst max|z|=%.3f, slowest %.1fs", states,
             static_cast<unsigned long long>(N), worst_z, slowest) +
             detail.str());
}

// 2. pooled degree law
void criterion2() {
  struct Case {
    Algorithm a;
    std::size_t m, z;
  };
  const Case cases[] = {{Algorithm::SeA, 2, 1}, {Algorithm::SeB, 5, 5}, {Algorithm::SeC, 5, 5}};
  constexpr std::size_t n = 100000;
  const auto t0 = std::chrono::steady_clock::now();
  bool all = true;
  std::ostringstream detail;
  for (const auto& c : cases) {
    DegreeHistogram pooled;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      pooled.merge(DegreeHistogram::of(
          generate(config_for(c.a, n, c.m, c.z, 500 + seed, InitialGraphSpec::complete(c.m)))));
    }
    const auto fit = fit_report(pooled, static_cast<std::uint32_t>(c.m));
    const bool ok = !fit.rejected(kAlpha) && std::abs(fit.tail_slope + 3) <= kSlopeTolerance;
    all = all && ok;
    detail << fmt(" %s: chi2=%.1f dof=%zu p=%.3f slope=%.3f;", to_string(c.a), fit.chi_square,
                  fit.dof, fit.p_value, fit.tail_slope);
  }
  const double secs = seconds_since(t0);
  all = all && secs < 300;
  report(2, all, fmt("10 seeds x n=%zu pooled, %.0fs;", n, secs) + detail.str());
}

// 3. clustering constants and exact identities
void criterion3() {
  constexpr std::size_t n = 100000;
  const Graph g = generate(config_for(Algorithm::SeA, n, 2, 1, 2024, InitialGraphSpec::complete(2)));
  const auto stats = clustering_stats(g);
  std::size_t off = 0;
  for (VertexId v = 2; v < n; ++v) {
    if (stats.per_vertex[v] != 2.0 / g.degree(v)) ++off;
  }
  const auto tri = triangle_count(g);
  const bool ok = std::abs(stats.mean - 0.7392) <= 0.01 &&
                  std::abs(stats.variance - 0.0853) <= 0.01 && off == 0 && tri == n - 2;
  report(3, ok,
         fmt("mean=%.5f variance=%.5f, vertices with C != 2/d: %zu, triangles=%llu (n-2=%zu)",
             stats.mean, stats.variance, off, static_cast<unsigned long long>(tri), n - 2));
}

// 4. joint inclusion structure
void criterion4() {
  Generator gen(config_for(Algorithm::SeA, 60, 2, 1, 77, InitialGraphSpec::complete(2)));
  gen.run();
  Adjacency adj(gen.graph());
  const auto counts = target_set_counts(gen, 1000000, 4040, workers());
  std::uint64_t non_edge_hits = 0;
  for (const auto& [set, c] : counts) {
    if (!adj.adjacent(set[0], set[1])) non_edge_hits += c;
  }
  const bool support = non_edge_hits == 0 && counts.size() == gen.graph().num_edges();

  Generator cyc(config_for(Algorithm::SeA, 10, 2, 2, 1, {}), cycle_graph(4));
  const VertexId opposite[] = {0, 2};
  const auto est = joint_oracle(cyc, opposite, 10000000, 4041, workers());
  const double bound = 2.0 / (3.0 * 16.0);
  const bool lower = est.empirical >= bound - 4 * est.std_error;
  report(4, support && lower,
         fmt("z=1: %zu distinct pairs over %zu edges, %llu non-edge hits; "
             "4-cycle z=2: pi(u,w)=%.5f vs bound %.5f (4 sigma=%.5f)",
             counts.size(), gen.graph().num_edges(),
             static_cast<unsigned long long>(non_edge_hits), est.empirical, bound,
             4 * est.std_error));
}

// 5. invariants 1-2 after every step
void criterion5() {
  bool all = true;
  std::ostringstream detail;
  for (auto a : {Algorithm::SeB, Algorithm::SeBStar, Algorithm::SeC}) {
    for (std::size_t m : {3, 4, 5}) {
      HarnessOptions opts;
      opts.steps_to_check = 2000;
      opts.invariant3 = false;
      const auto r = invariant_harness(
          config_for(a, 2000, m, m, 300 + m, InitialGraphSpec::complete(m + 1)), opts);
      if (!r.ok()) {
        all = false;
        detail << " [" << to_string(a) << " m=" << m << ": " << r.invariant12_violations
               << " violations]";
      }
    }
  }
  report(5, all, "SE-B, SE-B*, SE-C x m in {3,4,5}, n=2000, checked after every step" + detail.str());
}

// 6. invariant 3 for SE-B*, with SE-B as a recorded negative control
void criterion6() {
  bool all = true;
  std::ostringstream detail;
  for (std::size_t m : {3, 4}) {
    HarnessOptions opts;
    opts.steps_to_check = 500;
    opts.invariant3 = true;
    const auto star = invariant_harness(
        config_for(Algorithm::SeBStar, 500, m, m, 600 + m, InitialGraphSpec::complete(m + 1)), opts);
    const auto plain = invariant_harness(
        config_for(Algorithm::SeB, 500, m, m, 600 + m, InitialGraphSpec::complete(m + 1)), opts);
    all = all && star.ok() && star.invariant3_ok();
    detail << fmt(" m=%zu: SE-B* %llu violations over %zu checks; SE-B control %zu of %zu checks violated;",
                  m, static_cast<unsigned long long>(star.invariant3_violations), star.checks,
                  plain.invariant3_failed_checks, plain.checks);
  }
  report(6, all, "K_{m+1} init, n=500, exhaustive scan after every step;" + detail.str());
}

// 7. m = 2 reduction to SE-A
std::vector<std::uint64_t> aligned(const std::map<std::vector<VertexId>, std::uint64_t>& counts,
                                   const std::vector<std::vector<VertexId>>& keys) {
  std::vector<std::uint64_t> out;
  for (const auto& k : keys) {
    auto it = counts.find(k);
    out.push_back(it == counts.end() ? 0 : it->second);
  }
  return out;
}

void criterion7() {
  bool all = true;
  std::ostringstream detail;
  for (auto a : {Algorithm::SeB, Algorithm::SeC}) {
    for (std::size_t z : {1, 3}) {
      // from K2 the m = 2 tableau is the edge list itself at every step
      Generator gen(config_for(a, 40, 2, z, 700 + z, InitialGraphSpec::complete(2)));
      bool same_multiset = true;
      while (gen.graph().num_vertices() < 40) {
        gen.step();
        std::multiset<std::pair<VertexId, VertexId>> rows, edges;
        const auto* t = gen.tableau();
        for (std::size_t p = 0; p < t->size(); ++p) {
          auto h = t->hyperedge(p);
          rows.emplace(std::min(h[0], h[1]), std::max(h[0], h[1]));
        }
        for (std::size_t i = 0; i < gen.graph().num_edges(); ++i) {
          auto [x, y] = gen.graph().edge(i);
          edges.emplace(std::min(x, y), std::max(x, y));
        }
        same_multiset = same_multiset && rows == edges;
      }
      Generator se_a(config_for(Algorithm::SeA, 100000, 2, z, 1, {}), gen.graph());
      constexpr std::uint64_t N = 1000000;
      const auto ca = target_set_counts(se_a, N, 7100 + z, workers());
      const auto cb = target_set_counts(gen, N, 7200 + z, workers());
      std::set<std::vector<VertexId>> keys_set;
      for (const auto& [k, c] : ca) keys_set.insert(k);
      for (const auto& [k, c] : cb) keys_set.insert(k);
      const std::vector<std::vector<VertexId>> keys(keys_set.begin(), keys_set.end());
      const auto test = two_sample_chi_square(aligned(ca, keys), aligned(cb, keys));
      const bool ok = same_multiset && test.p_value >= kAlpha;
      all = all && ok;
      detail << fmt(" %s z=%zu: tableau==edges %s, chi2=%.1f dof=%zu p=%.3f;", to_string(a), z,
                    same_multiset ? "yes" : "no", test.statistic, test.dof, test.p_value);
    }
  }
  report(7, all, "pair frequencies vs SE-A on shared frozen graphs, N=10^6;" + detail.str());
}

// 8. runtime linearity
double run_time(const GeneratorConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Generator gen(c);
  gen.run();
  return seconds_since(t0);
}

void criterion8() {
  struct Case {
    Algorithm a;
    std::size_t m, z, k;
  };
  const Case cases[] = {{Algorithm::SeA, 2, 1, 2},
                        {Algorithm::SeB, 5, 5, 5},
                        {Algorithm::SeBStar, 5, 5, 6},
                        {Algorithm::SeC, 5, 5, 5}};
  bool all = true;
  std::ostringstream detail;
  for (const auto& c : cases) {
    // sizes are interleaved round by round so that slow spells of the host
    // hit all three alike; each size keeps its best time
    double t[3] = {INFINITY, INFINITY, INFINITY};
    const std::size_t sizes[] = {100000, 200000, 400000};
    double spent = 0;
    for (int round = 0; round < 9 || spent < 6.0; ++round) {
      for (int i = 0; i < 3; ++i) {
        const double secs =
            run_time(config_for(c.a, sizes[i], c.m, c.z, 800, InitialGraphSpec::complete(c.k)));
        t[i] = std::min(t[i], secs);
        spent += secs;
      }
    }
    const double r1 = t[1] / t[0], r2 = t[2] / t[1];
    const bool ok = r1 >= kRatioLow && r1 <= kRatioHigh && r2 >= kRatioLow && r2 <= kRatioHigh;
    all = all && ok;
    detail << fmt(" %s: %.3fs %.3fs %.3fs ratios %.2f %.2f;", to_string(c.a), t[0], t[1], t[2], r1, r2);
  }
  report(8, all, "n = 1e5, 2e5, 4e5 (best of >= 9 interleaved rounds);" + detail.str());
}

// 9. sampling primitive property suites
void criterion9() {
  Rng rng(909);
  std::size_t rss_bad = 0, rsp_bad = 0;
  constexpr int instances = 1000;
  for (int rep = 0; rep < instances; ++rep) {
    const std::size_t m = 2 + uniform_index(rng, 5);
    const std::size_t n = m + uniform_index(rng, 21 - m);
    // RSS: random frequencies, total padded to a multiple of m, feasible
    std::vector<std::uint32_t> freq(n);
    for (auto& f : freq) f = 1 + static_cast<std::uint32_t>(uniform_index(rng, 5));
    std::uint64_t total = 0;
    for (auto f : freq) total += f;
    const auto pad = static_cast<std::uint32_t>((m - total % m) % m);
    freq[uniform_index(rng, n)] += pad;
    total += pad;
    if (*std::max_element(freq.begin(), freq.end()) > total / m) {
      --rep;
      continue;
    }
    FrequencyBag bag;
    for (std::uint32_t i = 0; i < n; ++i) bag.add(i, freq[i]);
    std::vector<BagItem> order(bag.items().begin(), bag.items().end());
    std::shuffle(order.begin(), order.end(), rng);
    // every offset: distinct members; hits per element exactly d_i, so the
    // inclusion probability is m d_i / total for this (hence any) order
    std::vector<std::uint64_t> hits(n, 0);
    std::vector<std::uint32_t> out;
    for (std::uint64_t r = 0; r < total / m; ++r) {
      out.clear();
      systematic_select(order, total, m, r, out);
      if (std::set<std::uint32_t>(out.begin(), out.end()).size() != m) ++rss_bad;
      for (auto e : out) ++hits[e];
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      if (hits[i] != freq[i]) ++rss_bad;
    }
    auto sample = rss_sample(bag, m, rng);
    if (std::set<std::uint32_t>(sample.begin(), sample.end()).size() != m) ++rss_bad;

    // RSP: frequencies summing to s*m, each at most s
    const std::size_t s = 2 + uniform_index(rng, 6);
    std::vector<std::uint32_t> pf;
    std::uint64_t left = s * m;
    while (left > 0) {
      const auto f = static_cast<std::uint32_t>(1 + uniform_index(rng, std::min<std::uint64_t>(s, left)));
      pf.push_back(f);
      left -= f;
    }
    FrequencyBag pbag;
    for (std::uint32_t i = 0; i < pf.size(); ++i) pbag.add(i, pf[i]);
    RspCounters counters;
    const auto part = rsp_partition(pbag, s, m, rng, &counters);
    std::vector<std::uint32_t> seen(pf.size(), 0);
    for (std::size_t g = 0; g < s; ++g) {
      auto grp = part.group(g);
      if (std::set<std::uint32_t>(grp.begin(), grp.end()).size() != m) ++rsp_bad;
      for (auto e : grp) ++seen[e];
    }
    if (seen != pf) ++rsp_bad;
    if (counters.writes != s * m || counters.shuffle_draws != pf.size() - 1) ++rsp_bad;
  }
  // Monte Carlo marginal on one asymmetric bag
  FrequencyBag bag{{0, 1}, {1, 2}, {2, 3}, {3, 1}, {4, 2}, {5, 3}};  // total 12, m = 3
  constexpr std::uint64_t N = 1000000;
  std::vector<std::uint64_t> mc(6, 0);
  for (std::uint64_t i = 0; i < N; ++i) {
    for (auto e : rss_sample(bag, 3, rng)) ++mc[e];
  }
  double worst = 0;
  for (const auto& item : bag.items()) {
    const double p = 3.0 * item.frequency / 12.0;
    if (p >= 1) {
      if (mc[item.element] != N) worst = INFINITY;
      continue;
    }
    worst = std::max(worst, std::abs(mc[item.element] / double(N) - p) / std::sqrt(p * (1 - p) / N));
  }
  const bool ok = rss_bad == 0 && rsp_bad == 0 && worst < 4;
  report(9, ok,
         fmt("%d randomized instances (n <= 20): RSS faults %zu, RSP faults %zu; Monte Carlo max|z|=%.2f",
             instances, rss_bad, rsp_bad, worst));
}

// 10. infeasibility handling
std::optional<ErrorKind> kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

std::string describe(const std::optional<ErrorKind>& k) { return k ? to_string(*k) : "no error"; }

void criterion10() {
  Rng rng(1010);
  const auto k6 = kind_of([&] { build_initial(InitialGraphSpec::complete(6), 4, rng); });
  const auto star = kind_of([&] { init_tableau(star_graph(5), 4, rng); });
  bool km = true;
  for (std::size_t m = 2; m <= 20; ++m) {
    for (auto a : {Algorithm::SeB, Algorithm::SeBStar, Algorithm::SeC}) {
      try {
        Generator gen(config_for(a, m + 5, m, m, m, InitialGraphSpec::complete(m)));
        gen.run();
      } catch (const Error&) {
        km = false;
      }
    }
  }
  const bool ok = k6 == ErrorKind::InitDivisibility && star == ErrorKind::InitInfeasible && km;
  report(10, ok,
         "K6/m=4 -> " + describe(k6) + ", star5/m=4 -> " + describe(star) +
             ", K_m accepted for m=2..20: " + (km ? "yes" : "no"));
}

}  // namespace

int main() {
  criterion9();
  criterion10();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion1();
  criterion2();
  criterion8();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
