#include "notelab/concentration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "notelab/errors.hpp"
#include "notelab/mathutil.hpp"
#include "notelab/parallel.hpp"

namespace notelab::concentration {

std::vector<std::uint64_t> ActivityCounts::values() const {
    std::vector<std::uint64_t> out;
    out.reserve(by_rater.size());
    for (const auto& [_, c] : by_rater) out.push_back(c);
    return out;
}

ActivityCounts activity_counts(const std::vector<RatingEvent>& ratings) {
    ActivityCounts counts;
    counts.by_rater.reserve(ratings.size() / 4 + 16);
    for (const auto& r : ratings) ++counts.by_rater[r.rater_id];
    return counts;
}

double lorenz_at(const std::vector<double>& sorted_values, double f) {
    std::size_t n = sorted_values.size();
    if (n == 0) throw DataError("lorenz of empty input");
    if (f <= 0.0) return 0.0;
    if (f >= 1.0) return 1.0;
    long double total = 0.0L;
    for (double v : sorted_values) total += v;
    if (total <= 0.0L) throw DataError("lorenz of all-zero input");
    // cumulative share just below and above rank f*n
    double pos = f * static_cast<double>(n);
    std::size_t k = static_cast<std::size_t>(pos); // full ranks included
    long double cum = 0.0L;
    for (std::size_t i = 0; i < k; ++i) cum += sorted_values[i];
    long double partial = 0.0L;
    if (k < n) partial = (pos - static_cast<double>(k)) * sorted_values[k];
    return static_cast<double>((cum + partial) / total);
}

GiniResult gini(const std::vector<double>& values) {
    std::size_t n = values.size();
    if (n == 0) throw DataError("gini of empty input");
    std::vector<double> xs(values);
    std::sort(xs.begin(), xs.end());
    if (xs.front() < 0.0) throw DataError("gini of negative value");
    long double total = 0.0L;
    long double weighted = 0.0L; // sum of (2i - n - 1) * x_(i), i = 1..n
    for (std::size_t i = 0; i < n; ++i) {
        total += xs[i];
        weighted += (2.0L * static_cast<long double>(i + 1) - static_cast<long double>(n) - 1.0L) *
                    static_cast<long double>(xs[i]);
    }
    if (total <= 0.0L) throw DataError("gini of all-zero input");

    GiniResult res;
    res.gini = static_cast<double>(weighted / (static_cast<long double>(n) * total));

    if (n > 100000) {
        res.lorenz.reserve(1001);
        res.lorenz.emplace_back(0.0, 0.0);
        // interpolate at 1000 evenly spaced quantiles
        long double cum = 0.0L;
        std::size_t done = 0;
        for (int j = 1; j <= 1000; ++j) {
            double f = static_cast<double>(j) / 1000.0;
            double pos = f * static_cast<double>(n);
            std::size_t k = static_cast<std::size_t>(pos);
            if (k > n) k = n;
            while (done < k) cum += xs[done++];
            long double partial = 0.0L;
            if (k < n) partial = (pos - static_cast<double>(k)) * xs[k];
            res.lorenz.emplace_back(f, static_cast<double>((cum + partial) / total));
        }
        res.lorenz.back().second = 1.0;
    } else {
        res.lorenz.reserve(n + 1);
        res.lorenz.emplace_back(0.0, 0.0);
        long double cum = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            cum += xs[i];
            res.lorenz.emplace_back(static_cast<double>(i + 1) / static_cast<double>(n),
                                    static_cast<double>(cum / total));
        }
        res.lorenz.back().second = 1.0;
    }
    res.top20_share = 1.0 - lorenz_at(xs, 0.8);
    return res;
}

GiniResult gini(const ActivityCounts& counts) {
    std::vector<double> vals;
    vals.reserve(counts.by_rater.size());
    for (const auto& [_, c] : counts.by_rater) vals.push_back(static_cast<double>(c));
    return gini(vals);
}

int utc_year_of_ms(std::int64_t ms) {
    using namespace std::chrono;
    sys_time<milliseconds> tp{milliseconds{ms}};
    year_month_day ymd{floor<days>(tp)};
    return static_cast<int>(ymd.year());
}

std::map<int, double> gini_by_year(const std::vector<RatingEvent>& ratings) {
    std::map<int, std::unordered_map<std::string, std::uint64_t>> per_year;
    for (const auto& r : ratings) ++per_year[utc_year_of_ms(r.created_at_ms)][r.rater_id];
    std::map<int, double> out;
    for (auto& [year, by_rater] : per_year) {
        std::vector<double> vals;
        vals.reserve(by_rater.size());
        for (const auto& [_, c] : by_rater) vals.push_back(static_cast<double>(c));
        out[year] = gini(vals).gini;
    }
    return out;
}

double DiscretePowerLaw::pmf(std::uint64_t x) const {
    if (x < x_min) return 0.0;
    return std::pow(static_cast<double>(x), -alpha) /
           hurwitz_zeta(alpha, static_cast<double>(x_min));
}

double DiscretePowerLaw::cdf(std::uint64_t x) const {
    if (x < x_min) return 0.0;
    double z = hurwitz_zeta(alpha, static_cast<double>(x_min));
    double tail = hurwitz_zeta(alpha, static_cast<double>(x) + 1.0);
    double c = 1.0 - tail / z;
    return c < 0.0 ? 0.0 : (c > 1.0 ? 1.0 : c);
}

std::uint64_t DiscretePowerLaw::sample(Rng& rng) const {
    // Inverse CDF: table over the head, integer bisection on the tail.
    if (alpha <= 1.0) throw NumericError("power-law sample requires alpha > 1");
    double z = hurwitz_zeta(alpha, static_cast<double>(x_min));
    double u = rng.next_double();
    // head: walk the first values directly; covers almost all draws
    double cum = 0.0;
    std::uint64_t x = x_min;
    for (int i = 0; i < 64; ++i, ++x) {
        cum += std::pow(static_cast<double>(x), -alpha) / z;
        if (u < cum) return x;
    }
    // tail: smallest x with cdf(x) >= u, survival is monotone decreasing
    double target = 1.0 - u; // find smallest x with zeta(alpha, x+1)/z <= target
    std::uint64_t lo = x;    // cdf(lo - 1) < u
    std::uint64_t hi = lo;
    auto surv = [&](std::uint64_t v) {
        return hurwitz_zeta(alpha, static_cast<double>(v) + 1.0) / z;
    };
    int guard = 0;
    while (surv(hi) > target && guard++ < 64) {
        if (hi > (std::uint64_t{1} << 50)) break;
        hi *= 2;
    }
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (surv(mid) <= target)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

std::vector<std::uint64_t> DiscretePowerLaw::sample_n(std::size_t n, std::uint64_t seed) const {
    Rng rng(seed);
    std::vector<std::uint64_t> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample(rng));
    return out;
}

namespace {

// log-likelihood of the tail under alpha, up to constants shared by callers
double pl_loglik(double alpha, double sum_log_tail, double n_tail, double x_min) {
    return -alpha * sum_log_tail -
           n_tail * std::log(hurwitz_zeta(alpha, x_min));
}

double golden_section_alpha(double sum_log_tail, double n_tail, double x_min) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 1.0 + 1e-9, b = 6.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = pl_loglik(c, sum_log_tail, n_tail, x_min);
    double fd = pl_loglik(d, sum_log_tail, n_tail, x_min);
    for (int it = 0; it < 72; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = pl_loglik(c, sum_log_tail, n_tail, x_min);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = pl_loglik(d, sum_log_tail, n_tail, x_min);
        }
    }
    return (a + b) / 2.0;
}

} // namespace

PowerLawFit fit_power_law(const std::vector<std::uint64_t>& values, unsigned threads) {
    if (values.size() < 50)
        throw DataError("power-law fit needs at least 50 observations, got " +
                        std::to_string(values.size()));
    std::vector<std::uint64_t> xs(values);
    std::sort(xs.begin(), xs.end());
    if (xs.front() == 0) throw DataError("power-law fit requires positive values");
    if (xs.front() == xs.back()) throw DataError("power-law fit on degenerate input");

    std::size_t n = xs.size();
    // suffix sums of log(x) so each candidate's tail statistics are O(1)
    std::vector<double> suffix_log(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;)
        suffix_log[i] = suffix_log[i + 1] + std::log(static_cast<double>(xs[i]));

    std::uint64_t pct999 = xs[static_cast<std::size_t>(0.999 * static_cast<double>(n - 1))];

    struct Candidate {
        std::uint64_t x_min;
        std::size_t tail_begin; // index of first element >= x_min
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < n;) {
        std::uint64_t v = xs[i];
        if (v <= pct999 && n - i >= 10) candidates.push_back({v, i});
        std::size_t j = i;
        while (j < n && xs[j] == v) ++j;
        i = j;
    }
    if (candidates.empty()) throw NumericError("no valid power-law cutoff candidate");

    struct Scored {
        double alpha;
        double ks;
    };
    std::vector<Scored> scored(candidates.size());
    parallel_for(candidates.size(), threads, [&](std::size_t ci) {
        const auto& cand = candidates[ci];
        double xm = static_cast<double>(cand.x_min);
        double n_tail = static_cast<double>(n - cand.tail_begin);
        double alpha = golden_section_alpha(suffix_log[cand.tail_begin], n_tail, xm);
        double z = hurwitz_zeta(alpha, xm);
        // KS over the distinct values in the tail
        double ks = 0.0;
        for (std::size_t i = cand.tail_begin; i < n;) {
            std::uint64_t v = xs[i];
            std::size_t j = i;
            while (j < n && xs[j] == v) ++j;
            double emp = static_cast<double>(j - cand.tail_begin) / n_tail;
            double fit = 1.0 - hurwitz_zeta(alpha, static_cast<double>(v) + 1.0) / z;
            double d = std::fabs(emp - fit);
            if (d > ks) ks = d;
            i = j;
        }
        scored[ci] = {alpha, ks};
    });

    std::size_t best = 0;
    for (std::size_t ci = 1; ci < candidates.size(); ++ci) {
        if (scored[ci].ks < scored[best].ks) best = ci;
        // ties keep the earlier (smaller) x_min
    }

    PowerLawFit fit;
    fit.alpha = scored[best].alpha;
    fit.x_min = candidates[best].x_min;
    fit.ks_distance = scored[best].ks;
    fit.n_tail = static_cast<std::uint64_t>(n - candidates[best].tail_begin);
    fit.alpha_stderr = (fit.alpha - 1.0) / std::sqrt(static_cast<double>(fit.n_tail));
    return fit;
}

PowerLawFit fit_power_law(const ActivityCounts& counts, unsigned threads) {
    return fit_power_law(counts.values(), threads);
}

LrTestResult lr_test_vs_exponential(const std::vector<std::uint64_t>& values,
                                    const PowerLawFit& fit) {
    std::vector<std::uint64_t> tail;
    for (std::uint64_t v : values)
        if (v >= fit.x_min) tail.push_back(v);
    if (tail.size() < 2) throw DataError("LR test needs at least 2 tail observations");

    double xm = static_cast<double>(fit.x_min);
    long double mean_excess = 0.0L;
    for (std::uint64_t v : tail) mean_excess += static_cast<long double>(v) - xm;
    mean_excess /= static_cast<long double>(tail.size());
    if (mean_excess <= 0.0L) throw NumericError("LR test on degenerate tail");

    // shifted geometric MLE: P(X=x) = (1-e^-lambda) e^(-lambda (x - x_min))
    double lambda = std::log(1.0 + 1.0 / static_cast<double>(mean_excess));
    double log_norm_exp = std::log(1.0 - std::exp(-lambda));
    double log_z = std::log(hurwitz_zeta(fit.alpha, xm));

    long double sum_d = 0.0L, sum_d2 = 0.0L;
    for (std::uint64_t v : tail) {
        double x = static_cast<double>(v);
        double lp = -fit.alpha * std::log(x) - log_z;
        double le = log_norm_exp - lambda * (x - xm);
        double d = lp - le;
        sum_d += d;
        sum_d2 += static_cast<long double>(d) * d;
    }
    double nd = static_cast<double>(tail.size());
    double mean_d = static_cast<double>(sum_d) / nd;
    double var_d = static_cast<double>(sum_d2) / nd - mean_d * mean_d;
    if (var_d < 0.0) var_d = 0.0;
    double sd = std::sqrt(var_d);

    LrTestResult res;
    if (sd == 0.0) {
        res.R = 0.0;
        res.p_value = 1.0;
        return res;
    }
    res.R = static_cast<double>(sum_d) / (sd * std::sqrt(nd));
    res.p_value = normal_two_sided_p(res.R);
    return res;
}

} // namespace notelab::concentration
