#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "exactpa/graph.hpp"

namespace exactpa {

struct DegreeHistogram {
  std::map<std::uint32_t, std::uint64_t> counts;
  std::uint64_t n = 0;

  static DegreeHistogram of(const Graph& g);
  /// Pools another run into this one.
  void merge(const DegreeHistogram& other);
  std::uint64_t count(std::uint32_t d) const;
};

/// 2 E_v / (d_v (d_v - 1)); vertices of degree below 2 get 0.
double local_clustering(const Adjacency& adj, VertexId v);
double local_clustering(const Graph& g, VertexId v);

struct ClusteringStats {
  std::vector<double> per_vertex;
  double mean = 0;
  double variance = 0;  // population variance
};

ClusteringStats clustering_stats(const Graph& g);

/// Limiting degree law of preferential attachment,
/// P(d) = 2m(m+1) / (d(d+1)(d+2)) for d >= m. Throws Domain for d < m.
double theoretical_degree_pmf(std::uint32_t m, std::uint32_t d);
/// Sum of P(d') over d' >= d (telescoping closed form m(m+1)/(d(d+1))).
double theoretical_degree_tail(std::uint32_t m, std::uint32_t d);

struct LccConstants {
  double c_avg;     // 2 pi^2 - 19
  double variance;  // 24 zeta(3) - 330 + 70 pi^2 - 4 pi^4
};

/// Limiting mean and variance of local clustering under SE-A with z = 1.
LccConstants theoretical_lcc_constants();

/// Law of the local clustering coefficient under SE-A with z = 1: the
/// pushforward of the m = 2 degree law under c = 2/d. Throws Domain unless
/// c = 2/d for an integer d >= 2.
double lcc_pmf(double c);

struct DegreeFitRow {
  std::uint32_t degree;
  std::uint64_t observed;
  double expected;
  double relative_error;
};

struct FitReport {
  std::uint32_t m = 0;
  std::uint64_t population = 0;  // vertices with degree >= m
  std::uint64_t below_m = 0;     // excluded from the fit
  std::uint32_t d_cap = 0;       // largest degree with expected count >= 5
  std::vector<DegreeFitRow> rows;  // d in [m, d_cap]
  double chi_square = 0;
  std::size_t dof = 0;
  double p_value = 1;
  double tail_slope = 0;
  std::uint32_t slope_from = 0;

  bool rejected(double alpha) const { return p_value < alpha; }
};

/// Compares a histogram with P(d). Chi-square bins are the single degrees
/// m..d_cap plus one merged tail bin; the tail slope is a least-squares fit
/// of log pmf on log degree over log-spaced bins in [10m, d_cap].
FitReport fit_report(const DegreeHistogram& h, std::uint32_t m);

struct ChiSquareResult {
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
};

/// Upper tail of the chi-square law.
double chi_square_sf(double statistic, std::size_t dof);

/// Two-sample homogeneity test on aligned category counts.
ChiSquareResult two_sample_chi_square(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b);

/// Two-sided normal critical value for level alpha split over `tests`.
double bonferroni_z(double alpha, std::size_t tests);

/// "degree,count,empirical_pmf,theoretical_pmf"; the theoretical column is
/// empty below m.
void write_histogram_csv(const DegreeHistogram& h, std::uint32_t m, std::ostream& out);

}  // namespace exactpa
