#include "exactpa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "exactpa/error.hpp"

namespace exactpa {

DegreeHistogram DegreeHistogram::of(const Graph& g) {
  DegreeHistogram h;
  for (auto d : g.degrees()) ++h.counts[d];
  h.n = g.num_vertices();
  return h;
}

void DegreeHistogram::merge(const DegreeHistogram& other) {
  for (auto [d, c] : other.counts) counts[d] += c;
  n += other.n;
}

std::uint64_t DegreeHistogram::count(std::uint32_t d) const {
  auto it = counts.find(d);
  return it == counts.end() ? 0 : it->second;
}

double local_clustering(const Adjacency& adj, VertexId v) {
  auto nv = adj.neighbors(v);
  const std::size_t d = nv.size();
  if (d < 2) return 0.0;
  std::uint64_t links = 0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    auto ni = adj.neighbors(nv[i]);
    // neighbors of v after position i that are also neighbors of nv[i]
    auto a = nv.begin() + static_cast<std::ptrdiff_t>(i) + 1;
    auto b = std::lower_bound(ni.begin(), ni.end(), *a);
    while (a != nv.end() && b != ni.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++links;
        ++a;
        ++b;
      }
    }
  }
  return 2.0 * static_cast<double>(links) / (static_cast<double>(d) * static_cast<double>(d - 1));
}

double local_clustering(const Graph& g, VertexId v) { return local_clustering(Adjacency(g), v); }

ClusteringStats clustering_stats(const Graph& g) {
  ClusteringStats s;
  const auto tri = triangles_per_vertex(g);
  s.per_vertex.resize(g.num_vertices(), 0.0);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const double d = g.degree(v);
    if (d >= 2) s.per_vertex[v] = 2.0 * static_cast<double>(tri[v]) / (d * (d - 1));
  }
  if (s.per_vertex.empty()) return s;
  double sum = 0;
  for (double c : s.per_vertex) sum += c;
  s.mean = sum / static_cast<double>(s.per_vertex.size());
  double sq = 0;
  for (double c : s.per_vertex) sq += (c - s.mean) * (c - s.mean);
  s.variance = sq / static_cast<double>(s.per_vertex.size());
  return s;
}

double theoretical_degree_pmf(std::uint32_t m, std::uint32_t d) {
  if (d < m) {
    throw Error(ErrorKind::Domain,
                "degree " + std::to_string(d) + " is below m = " + std::to_string(m));
  }
  const double dd = d;
  return 2.0 * m * (m + 1.0) / (dd * (dd + 1) * (dd + 2));
}

double theoretical_degree_tail(std::uint32_t m, std::uint32_t d) {
  if (d <= m) return 1.0;
  const double dd = d;
  return m * (m + 1.0) / (dd * (dd + 1));
}

LccConstants theoretical_lcc_constants() {
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  constexpr double zeta3 = 1.2020569031595942853997381615114;  // Apery's constant
  return {2 * pi2 - 19, 24 * zeta3 - 330 + 70 * pi2 - 4 * pi2 * pi2};
}

double lcc_pmf(double c) {
  if (!(c > 0) || c > 1) throw Error(ErrorKind::Domain, "clustering value outside (0, 1]");
  const double d = 2.0 / c;
  const double rounded = std::round(d);
  if (std::abs(d - rounded) > 1e-9 * rounded || rounded < 2) {
    throw Error(ErrorKind::Domain, "clustering value is not of the form 2/d");
  }
  return 6.0 * c / ((2.0 / c + 1) * (2.0 / c + 2));
}

double chi_square_sf(double statistic, std::size_t dof) {
  if (dof == 0) return 1.0;
  boost::math::chi_squared_distribution<double> law(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(law, std::max(statistic, 0.0)));
}

double bonferroni_z(double alpha, std::size_t tests) {
  boost::math::normal_distribution<double> normal;
  const double per_test = alpha / (2.0 * static_cast<double>(std::max<std::size_t>(tests, 1)));
  return boost::math::quantile(boost::math::complement(normal, per_test));
}

FitReport fit_report(const DegreeHistogram& h, std::uint32_t m) {
  FitReport r;
  r.m = m;
  for (auto [d, c] : h.counts) {
    if (d >= m) {
      r.population += c;
    } else {
      r.below_m += c;
    }
  }
  if (r.population == 0) return r;
  const double N = static_cast<double>(r.population);

  std::uint32_t d = m;
  while (N * theoretical_degree_pmf(m, d + 1) >= 5.0) ++d;
  r.d_cap = N * theoretical_degree_pmf(m, m) >= 5.0 ? d : m;

  std::uint64_t counted = 0;
  for (std::uint32_t k = m; k <= r.d_cap; ++k) {
    const std::uint64_t obs = h.count(k);
    const double exp = N * theoretical_degree_pmf(m, k);
    r.rows.push_back({k, obs, exp, (static_cast<double>(obs) - exp) / exp});
    r.chi_square += (obs - exp) * (obs - exp) / exp;
    counted += obs;
  }
  const double tail_exp = N * theoretical_degree_tail(m, r.d_cap + 1);
  const double tail_obs = static_cast<double>(r.population - counted);
  if (tail_exp > 0) r.chi_square += (tail_obs - tail_exp) * (tail_obs - tail_exp) / tail_exp;
  r.dof = r.rows.size();  // rows + tail bin - 1
  r.p_value = chi_square_sf(r.chi_square, r.dof);

  // log-spaced bins [a, b) with b = ceil(1.25 a)
  r.slope_from = 10 * m;
  std::vector<double> xs, ys;
  for (std::uint32_t a = r.slope_from; a <= r.d_cap;) {
    const std::uint32_t b = std::max(a + 1, static_cast<std::uint32_t>(std::ceil(1.25 * a)));
    std::uint64_t c = 0;
    for (std::uint32_t k = a; k < b; ++k) c += h.count(k);
    if (c > 0) {
      xs.push_back(0.5 * (std::log(static_cast<double>(a)) + std::log(static_cast<double>(b - 1))));
      ys.push_back(std::log(static_cast<double>(c) / (N * (b - a))));
    }
    a = b;
  }
  if (xs.size() >= 2) {
    const double k = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    r.tail_slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  return r;
}

ChiSquareResult two_sample_chi_square(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::Domain, "category counts misaligned");
  double na = 0, nb = 0;
  for (auto x : a) na += static_cast<double>(x);
  for (auto x : b) nb += static_cast<double>(x);
  ChiSquareResult r;
  if (na == 0 || nb == 0) return r;
  const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
  std::size_t bins = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = static_cast<double>(a[i]), y = static_cast<double>(b[i]);
    if (x + y == 0) continue;
    ++bins;
    r.statistic += (ka * x - kb * y) * (ka * x - kb * y) / (x + y);
  }
  r.dof = bins > 0 ? bins - 1 : 0;
  r.p_value = chi_square_sf(r.statistic, r.dof);
  return r;
}

void write_histogram_csv(const DegreeHistogram& h, std::uint32_t m, std::ostream& out) {
  out << "degree,count,empirical_pmf,theoretical_pmf\n";
  out.precision(10);
  for (auto [d, c] : h.counts) {
    out << d << ',' << c << ',' << static_cast<double>(c) / static_cast<double>(h.n) << ',';
    if (d >= m) out << theoretical_degree_pmf(m, d);
    out << '\n';
  }
}

}  // namespace exactpa
