#include "notelab/polarization.hpp"

#include <algorithm>
#include <cmath>

#include "notelab/errors.hpp"
#include "notelab/mathutil.hpp"
#include "notelab/rng.hpp"

namespace notelab::polarization {

void SignalCounts::add(const PartisanSignal& s) {
    if (s.party == Party::Democrat) {
        if (s.direction == SignalDirection::Anti)
            ++a_dem;
        else
            ++p_dem;
    } else {
        if (s.direction == SignalDirection::Anti)
            ++a_rep;
        else
            ++p_rep;
    }
}

PartisanSignal signal_of(RatingLevel level, NoteClassification classification, Party party) {
    bool helpfulish = level != RatingLevel::NotHelpful;
    bool misleading = classification == NoteClassification::Misleading;
    // (H/SH, M) -> anti, and each flipped axis flips the direction
    bool anti = helpfulish == misleading;
    return {anti ? SignalDirection::Anti : SignalDirection::Pro, party};
}

LeaningValue leaning(const SignalCounts& c) {
    std::uint64_t total = c.total();
    if (total == 0) throw DataError("leaning of empty counts");
    double num = (static_cast<double>(c.a_dem) - static_cast<double>(c.p_dem)) +
                 (static_cast<double>(c.p_rep) - static_cast<double>(c.a_rep));
    return {num / static_cast<double>(total), total};
}

std::map<std::string, LeaningValue> leaning_per_rater(
    const std::vector<ingest::AnnotatedRating>& annotated, std::uint64_t min_ratings) {
    std::map<std::string, SignalCounts> per_rater;
    for (const auto& a : annotated)
        per_rater[a.rating.rater_id].add(
            signal_of(a.rating.level, a.note_classification, a.party));
    std::map<std::string, LeaningValue> out;
    for (const auto& [rater, counts] : per_rater)
        if (counts.total() >= min_ratings) out.emplace(rater, leaning(counts));
    return out;
}

LeaningStats leaning_stats(const std::vector<double>& values) {
    if (values.size() < 3) throw DataError("leaning stats need at least 3 values");
    LeaningStats st;
    st.mean = mean_of(values);
    st.median = median_of(values);
    st.stddev = sample_std(values);
    double m2 = 0.0;
    for (double v : values) m2 += (v - st.mean) * (v - st.mean);
    if (m2 == 0.0) throw NumericError("skewness of a degenerate sample");
    st.skewness = skewness(values);
    return st;
}

std::map<std::string, int> decile_partition(const concentration::ActivityCounts& activity,
                                            const std::set<std::string>& eligible) {
    struct Entry {
        std::uint64_t count;
        const std::string* rater;
    };
    std::vector<Entry> entries;
    entries.reserve(eligible.size());
    for (const auto& rater : eligible) {
        auto it = activity.by_rater.find(rater);
        if (it == activity.by_rater.end())
            throw DataError("eligible rater '" + rater + "' has no activity count");
        entries.push_back({it->second, &rater});
    }
    std::size_t n = entries.size();
    if (n < 10) throw DataError("decile partition needs at least 10 raters, got " +
                                std::to_string(n));
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.count != b.count) return a.count < b.count;
        return *a.rater < *b.rater;
    });

    std::size_t base = n / 10, rem = n % 10;
    std::map<std::string, int> out;
    std::size_t idx = 0;
    for (int d = 1; d <= 10; ++d) {
        std::size_t size = base + (static_cast<std::size_t>(d) > 10 - rem ? 1 : 0);
        for (std::size_t k = 0; k < size; ++k) out.emplace(*entries[idx++].rater, d);
    }
    return out;
}

namespace {

double log_normal_pdf(double x, double mu, double sigma) {
    static const double kLog2Pi = std::log(2.0 * 3.14159265358979323846);
    double z = (x - mu) / sigma;
    return -0.5 * kLog2Pi - std::log(sigma) - 0.5 * z * z;
}

struct EmRun {
    Gmm2 g;
    bool converged = false;
};

EmRun em_once(const std::vector<double>& xs, Rng& rng) {
    const double kSigmaFloor = 1e-3;
    std::size_t n = xs.size();

    // k-means++-style means: first uniform, second distance-squared weighted
    double mu1 = xs[rng.below(n)];
    double mu2 = mu1;
    {
        std::vector<double> d2(n);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = (xs[i] - mu1) * (xs[i] - mu1);
            total += d2[i];
        }
        if (total > 0.0) {
            double u = rng.next_double() * total;
            double cum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cum += d2[i];
                if (u < cum) {
                    mu2 = xs[i];
                    break;
                }
            }
        }
    }
    double sd = 0.0, mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(n);
    for (double x : xs) sd += (x - mean) * (x - mean);
    sd = std::sqrt(sd / static_cast<double>(n));
    if (sd < kSigmaFloor) sd = kSigmaFloor;

    double m1 = mu1, m2 = mu2, s1 = sd, s2 = sd, w1 = 0.5, w2 = 0.5;
    double prev_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> resp(n);
    EmRun run;
    for (int it = 0; it < 1000; ++it) {
        // E step with the log-sum-exp trick; also accumulates the likelihood
        double ll = 0.0;
        double r_sum = 0.0, rx1 = 0.0, rx2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double l1 = std::log(w1) + log_normal_pdf(xs[i], m1, s1);
            double l2 = std::log(w2) + log_normal_pdf(xs[i], m2, s2);
            double hi = l1 > l2 ? l1 : l2;
            double denom = hi + std::log(std::exp(l1 - hi) + std::exp(l2 - hi));
            ll += denom;
            double r = std::exp(l1 - denom);
            resp[i] = r;
            r_sum += r;
            rx1 += r * xs[i];
            rx2 += (1.0 - r) * xs[i];
        }
        if (ll + 1e-9 < prev_ll) throw NumericError("EM log-likelihood decreased");
        bool converged = it > 0 && std::fabs(ll - prev_ll) < 1e-8;
        prev_ll = ll;
        run.g.log_likelihood = ll;
        run.g.iterations = it + 1;
        if (converged) {
            run.converged = true;
            break;
        }

        // M step
        double n1 = r_sum, n2 = static_cast<double>(n) - r_sum;
        if (n1 < 1e-12) n1 = 1e-12;
        if (n2 < 1e-12) n2 = 1e-12;
        m1 = rx1 / n1;
        m2 = rx2 / n2;
        double v1 = 0.0, v2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v1 += resp[i] * (xs[i] - m1) * (xs[i] - m1);
            v2 += (1.0 - resp[i]) * (xs[i] - m2) * (xs[i] - m2);
        }
        s1 = std::sqrt(v1 / n1);
        s2 = std::sqrt(v2 / n2);
        if (s1 < kSigmaFloor) s1 = kSigmaFloor;
        if (s2 < kSigmaFloor) s2 = kSigmaFloor;
        w1 = n1 / static_cast<double>(n);
        w2 = 1.0 - w1;
    }
    run.g.mu1 = m1;
    run.g.sigma1 = s1;
    run.g.w1 = w1;
    run.g.mu2 = m2;
    run.g.sigma2 = s2;
    run.g.w2 = w2;
    return run;
}

} // namespace

Gmm2 fit_gmm2(const std::vector<double>& values, std::uint64_t seed) {
    if (values.size() < 10) throw DataError("GMM fit needs at least 10 values, got " +
                                            std::to_string(values.size()));
    // A restart that hits the iteration cap with a monotone likelihood is
    // still usable; EM oscillation (a decreasing step) throws inside em_once.
    bool have_best = false;
    Gmm2 best;
    for (std::uint64_t restart = 0; restart < 10; ++restart) {
        Rng rng(Rng::derive(seed, restart));
        EmRun run = em_once(values, rng);
        if (!have_best || run.g.log_likelihood > best.log_likelihood) {
            best = run.g;
            have_best = true;
        }
    }
    if (best.mu1 > best.mu2) {
        std::swap(best.mu1, best.mu2);
        std::swap(best.sigma1, best.sigma2);
        std::swap(best.w1, best.w2);
    }
    return best;
}

double ashman_d(const Gmm2& g) {
    return std::fabs(g.mu1 - g.mu2) /
           std::sqrt((g.sigma1 * g.sigma1 + g.sigma2 * g.sigma2) / 2.0);
}

} // namespace notelab::polarization
