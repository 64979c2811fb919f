#pragma once

#include <cstdint>
#include <vector>

namespace notelab {

// Hurwitz zeta  zeta(s, q) = sum_{k>=0} (q+k)^(-s)  for s > 1, q > 0.
// Direct summation up to a fixed pivot plus an Euler-Maclaurin tail.
double hurwitz_zeta(double s, double q);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Regularized incomplete beta I_x(a, b).
double inc_beta(double a, double b, double x);

// Student-t CDF and upper quantile (two-sided level handled by caller).
double t_cdf(double t, double dof);
double t_quantile(double p, double dof); // smallest t with CDF(t) >= p

// Chi-squared survival function P(X > x) with k degrees of freedom.
double chi2_sf(double x, double k);

// Two-sided normal p-value for a z statistic.
double normal_two_sided_p(double z);

// Sample statistics. Variance/std use the n-1 denominator; skewness is the
// biased Fisher-Pearson g1 = m3 / m2^(3/2) unless adjusted is requested,
// in which case G1 = g1 * sqrt(n(n-1)) / (n-2).
double mean_of(const std::vector<double>& xs);
double median_of(std::vector<double> xs);
double sample_std(const std::vector<double>& xs);
double skewness(const std::vector<double>& xs, bool adjusted = false);

// Spearman rank correlation (average ranks on ties).
double spearman_rho(const std::vector<double>& a, const std::vector<double>& b);

// FNV-1a 64-bit over a byte buffer; `seed` chains across buffers.
std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

} // namespace notelab
