#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "notelab/core.hpp"
#include "notelab/rng.hpp"

namespace notelab::concentration {

struct ActivityCounts {
    std::unordered_map<std::string, std::uint64_t> by_rater;

    std::size_t n() const { return by_rater.size(); }
    std::vector<std::uint64_t> values() const;
};

ActivityCounts activity_counts(const std::vector<RatingEvent>& ratings);

struct GiniResult {
    double gini = 0.0;
    // Nondecreasing (cum share of raters, cum share of ratings) points from
    // (0,0) to (1,1); every rank, or 1000 quantiles when n > 1e5.
    std::vector<std::pair<double, double>> lorenz;
    double top20_share = 0.0; // 1 - Lorenz(0.8)
};

// O(n log n) sorted-rank formula; equals the pairwise mean-difference form.
GiniResult gini(const std::vector<double>& values);
GiniResult gini(const ActivityCounts& counts);

// Lorenz value at fraction f of raters (linear interpolation between ranks).
double lorenz_at(const std::vector<double>& sorted_values, double f);

// One Gini per UTC calendar year over raters active in that year.
std::map<int, double> gini_by_year(const std::vector<RatingEvent>& ratings);

int utc_year_of_ms(std::int64_t ms);

struct PowerLawFit {
    double alpha = 0.0;
    double alpha_stderr = 0.0;
    std::uint64_t x_min = 1;
    double ks_distance = 0.0;
    std::uint64_t n_tail = 0;
};

struct LrTestResult {
    double R = 0.0;       // > 0 favors the power law
    double p_value = 1.0; // two-sided normal approximation
};

// Discrete power law P(X=x) = x^(-alpha) / zeta(alpha, x_min), x >= x_min.
struct DiscretePowerLaw {
    double alpha;
    std::uint64_t x_min;

    double pmf(std::uint64_t x) const;
    double cdf(std::uint64_t x) const; // P(X <= x)
    std::uint64_t sample(Rng& rng) const;
    std::vector<std::uint64_t> sample_n(std::size_t n, std::uint64_t seed) const;
};

// Discrete ML fit with KS-minimizing cutoff selection. Candidates are every
// distinct value up to the 99.9th percentile with tail size >= 10.
PowerLawFit fit_power_law(const std::vector<std::uint64_t>& values, unsigned threads = 1);
PowerLawFit fit_power_law(const ActivityCounts& counts, unsigned threads = 1);

// Vuong normalized log-likelihood ratio of the power-law fit against a
// shifted geometric fitted to the same tail by maximum likelihood.
LrTestResult lr_test_vs_exponential(const std::vector<std::uint64_t>& values,
                                    const PowerLawFit& fit);

} // namespace notelab::concentration
