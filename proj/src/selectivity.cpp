#include "notelab/selectivity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_set>

#include "notelab/errors.hpp"
#include "notelab/mathutil.hpp"
#include "notelab/rng.hpp"

namespace notelab::selectivity {

std::vector<SelectivityPoint> selectivity_points(
    const std::vector<ingest::AnnotatedRating>& annotated) {
    std::map<std::string, std::pair<std::uint64_t, std::unordered_set<std::string>>> per_rater;
    for (const auto& a : annotated) {
        auto& [count, authors] = per_rater[a.rating.rater_id];
        ++count;
        authors.insert(a.tweet_author_id);
    }
    std::vector<SelectivityPoint> out;
    out.reserve(per_rater.size());
    for (const auto& [_, entry] : per_rater)
        out.push_back({entry.first, static_cast<std::uint64_t>(entry.second.size())});
    return out;
}

std::vector<ingest::AnnotatedRating> shuffle_null(
    const std::vector<ingest::AnnotatedRating>& annotated, std::uint64_t seed) {
    std::vector<ingest::AnnotatedRating> out(annotated);
    std::size_t n = out.size();
    if (n < 2) return out;
    Rng rng(seed);
    // Fisher-Yates over the (author, party) labels
    std::vector<std::pair<std::string, Party>> labels;
    labels.reserve(n);
    for (const auto& a : out) labels.emplace_back(a.tweet_author_id, a.party);
    for (std::size_t i = n - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(labels[i], labels[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i].tweet_author_id = std::move(labels[i].first);
        out[i].party = labels[i].second;
    }
    return out;
}

double saturation_value(const SaturationFit& fit, double r) {
    return fit.n_asy * (1.0 - std::exp(-r / fit.tau));
}

namespace {

struct Design {
    std::vector<double> r;
    std::vector<double> y;
};

double sse_of(const Design& d, double a, double t) {
    double sse = 0.0;
    for (std::size_t i = 0; i < d.r.size(); ++i) {
        double e = d.y[i] - a * (1.0 - std::exp(-d.r[i] / t));
        sse += e * e;
    }
    return sse;
}

// J^T J (2x2, symmetric) and J^T e for the current parameters.
void normal_equations(const Design& d, double a, double t, double jtj[3], double jte[2],
                      double* sse) {
    jtj[0] = jtj[1] = jtj[2] = 0.0;
    jte[0] = jte[1] = 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < d.r.size(); ++i) {
        double ex = std::exp(-d.r[i] / t);
        double m = a * (1.0 - ex);
        double e = d.y[i] - m;
        double ja = 1.0 - ex;                   // dm/da
        double jt = -a * d.r[i] * ex / (t * t); // dm/dtau
        jtj[0] += ja * ja;
        jtj[1] += ja * jt;
        jtj[2] += jt * jt;
        jte[0] += ja * e;
        jte[1] += jt * e;
        s += e * e;
    }
    *sse = s;
}

} // namespace

SaturationFit fit_saturation(const std::vector<SelectivityPoint>& points) {
    std::vector<double> r, y;
    r.reserve(points.size());
    y.reserve(points.size());
    for (const auto& p : points) {
        r.push_back(static_cast<double>(p.r));
        y.push_back(static_cast<double>(p.n_authors));
    }
    return fit_saturation_xy(r, y);
}

SaturationFit fit_saturation_xy(const std::vector<double>& rs, const std::vector<double>& ys) {
    if (rs.size() != ys.size()) throw DataError("saturation fit input length mismatch");
    Design d;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (rs[i] < 2.0) continue; // no curvature information
        d.r.push_back(rs[i]);
        d.y.push_back(ys[i]);
    }
    if (d.r.size() < 5)
        throw DataError("saturation fit needs at least 5 points with r >= 2, got " +
                        std::to_string(d.r.size()));
    {
        std::vector<double> distinct(d.r);
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        if (distinct.size() == 1) throw DataError("degenerate design: all r equal");
        if (distinct.size() < 3)
            throw DataError("saturation fit needs at least 3 distinct r values");
    }

    double a = *std::max_element(d.y.begin(), d.y.end());
    if (a <= 0.0) a = 1.0;
    double t = median_of(d.r);
    if (t <= 0.0) t = 1.0;

    double jtj[3], jte[2], sse;
    normal_equations(d, a, t, jtj, jte, &sse);

    double lambda = 1e-3;
    int it = 0;
    for (; it < 500; ++it) {
        // (J^T J + lambda * diag(J^T J)) delta = J^T e
        double a00 = jtj[0] * (1.0 + lambda);
        double a01 = jtj[1];
        double a11 = jtj[2] * (1.0 + lambda);
        double det = a00 * a11 - a01 * a01;
        if (det == 0.0 || !std::isfinite(det)) throw NumericError("singular normal equations");
        double da = (a11 * jte[0] - a01 * jte[1]) / det;
        double dt = (a00 * jte[1] - a01 * jte[0]) / det;

        double a2 = a + da, t2 = t + dt;
        bool ok = a2 > 0.0 && t2 > 0.0;
        double sse2 = ok ? sse_of(d, a2, t2) : sse;
        if (ok && sse2 <= sse) {
            double rel = (sse - sse2) / (sse > 0.0 ? sse : 1.0);
            a = a2;
            t = t2;
            normal_equations(d, a, t, jtj, jte, &sse);
            lambda = std::max(lambda * 0.3, 1e-12);
            if (rel < 1e-10) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break; // locked in a corner; optimality checked below
        }
    }

    // relative first-order optimality: ||grad SSE|| = 2 ||J^T e||
    double grad_norm = 2.0 * std::hypot(jte[0], jte[1]);
    double scale = sse > 0.0 ? sse : 1.0;
    if (it >= 500 && grad_norm > 1e-6 * scale)
        throw NumericError("saturation fit did not converge");

    SaturationFit fit;
    fit.n_asy = a;
    fit.tau = t;
    fit.residual_sse = sse;
    fit.iterations = it;

    double n = static_cast<double>(d.r.size());
    double dof = n - 2.0;
    if (dof > 0.0) {
        double det = jtj[0] * jtj[2] - jtj[1] * jtj[1];
        if (det > 0.0) {
            double s2 = sse / dof;
            double var_a = s2 * (jtj[2] / det);
            double var_t = s2 * (jtj[0] / det);
            double tq = t_quantile(0.975, static_cast<int>(dof));
            if (var_a > 0.0) fit.ci95_n_asy = tq * std::sqrt(var_a);
            if (var_t > 0.0) fit.ci95_tau = tq * std::sqrt(var_t);
        }
    }
    return fit;
}

} // namespace notelab::selectivity
