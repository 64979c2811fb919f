#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "notelab/errors.hpp"
#include "notelab/mathutil.hpp"
#include "notelab/rng.hpp"
#include "notelab/selectivity.hpp"

using namespace notelab;
using namespace notelab::selectivity;
using ingest::AnnotatedRating;

TEST_SUITE_BEGIN("selectivity");

namespace {

AnnotatedRating ar(const char* rater, const char* author, int i = 0,
                   Party party = Party::Democrat) {
    AnnotatedRating a;
    a.rating.note_id = "n" + std::to_string(i);
    a.rating.rater_id = rater;
    a.rating.created_at_ms = i;
    a.rating.level = RatingLevel::Helpful;
    a.note_classification = NoteClassification::Misleading;
    a.tweet_author_id = author;
    a.party = party;
    return a;
}

} // namespace

TEST_CASE("points count ratings and distinct authors per rater") {
    std::vector<AnnotatedRating> xs{
        ar("r1", "a1", 0), ar("r1", "a1", 1), ar("r1", "a1", 2), // (3,1)
        ar("r2", "a1", 3), ar("r2", "a2", 4), ar("r2", "a3", 5), // (3,3)
        ar("r3", "a2", 6),                                       // (1,1)
        ar("r4", "a1", 7), ar("r4", "a2", 8),                    // (2,2)
    };
    auto pts = selectivity_points(xs);
    REQUIRE(pts.size() == 4);
    CHECK(pts[0] == SelectivityPoint{3, 1});
    CHECK(pts[1] == SelectivityPoint{3, 3});
    CHECK(pts[2] == SelectivityPoint{1, 1});
    CHECK(pts[3] == SelectivityPoint{2, 2});
    for (const auto& p : pts) CHECK(p.n_authors <= p.r);
}

TEST_CASE("shuffle preserves per-rater counts and the author multiset") {
    Rng rng(5);
    std::vector<AnnotatedRating> xs;
    for (int i = 0; i < 300; ++i) {
        auto rater = "r" + std::to_string(rng.below(17));
        auto author = "a" + std::to_string(rng.below(11));
        xs.push_back(ar(rater.c_str(), author.c_str(), i,
                        rng.below(2) ? Party::Democrat : Party::Republican));
    }
    auto shuffled = shuffle_null(xs, 99);
    REQUIRE(shuffled.size() == xs.size());

    auto count_by = [](const std::vector<AnnotatedRating>& v, auto key) {
        std::map<std::string, int> m;
        for (const auto& a : v) ++m[key(a)];
        return m;
    };
    auto by_rater = [](const AnnotatedRating& a) { return a.rating.rater_id; };
    auto by_label = [](const AnnotatedRating& a) {
        return a.tweet_author_id + "|" + std::string(format_party(a.party));
    };
    CHECK(count_by(xs, by_rater) == count_by(shuffled, by_rater));
    CHECK(count_by(xs, by_label) == count_by(shuffled, by_label));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(shuffled[i].rating == xs[i].rating);
        CHECK(shuffled[i].note_classification == xs[i].note_classification);
    }

    CHECK(shuffle_null(xs, 99) == shuffled); // same seed, same result
    CHECK(shuffle_null(xs, 100) != shuffled);
}

TEST_CASE("shuffle of a single event is the identity") {
    std::vector<AnnotatedRating> xs{ar("r1", "a1")};
    CHECK(shuffle_null(xs, 7) == xs);
}

TEST_CASE("shuffle assignments are uniform over the label multiset") {
    // 6 events, authors AAABBB: C(6,3) = 20 distinct assignments
    std::vector<AnnotatedRating> xs;
    for (int i = 0; i < 6; ++i) xs.push_back(ar("r1", i < 3 ? "A" : "B", i));

    std::map<std::string, int> freq;
    const int reps = 1000;
    for (int rep = 0; rep < reps; ++rep) {
        auto sh = shuffle_null(xs, static_cast<std::uint64_t>(rep) + 1);
        std::string sig;
        for (const auto& a : sh) sig += a.tweet_author_id;
        ++freq[sig];
    }
    REQUIRE(freq.size() == 20);
    double expected = reps / 20.0;
    double stat = 0.0;
    for (const auto& [_, c] : freq) {
        double d = c - expected;
        stat += d * d / expected;
    }
    CHECK(chi2_sf(stat, 19) > 0.001);
}

TEST_CASE("noiseless saturation points are recovered exactly") {
    std::vector<double> rs, ys;
    for (int r = 10; r <= 500; r += 10) {
        rs.push_back(r);
        ys.push_back(100.0 * (1.0 - std::exp(-r / 50.0)));
    }
    auto fit = fit_saturation_xy(rs, ys);
    CHECK(fit.n_asy == doctest::Approx(100.0).epsilon(1e-6));
    CHECK(fit.tau == doctest::Approx(50.0).epsilon(1e-6));
    CHECK(fit.residual_sse < 1e-10);
}

TEST_CASE("fit satisfies first-order optimality") {
    Rng rng(404);
    std::vector<double> rs, ys;
    for (int i = 0; i < 200; ++i) {
        double r = 2.0 + static_cast<double>(rng.below(400));
        double y = 80.0 * (1.0 - std::exp(-r / 90.0)) + 3.0 * rng.normal();
        if (y < 1.0) y = 1.0;
        rs.push_back(r);
        ys.push_back(y);
    }
    auto fit = fit_saturation_xy(rs, ys);

    auto sse_at = [&](double a, double t) {
        double s = 0.0;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            double e = ys[i] - a * (1.0 - std::exp(-rs[i] / t));
            s += e * e;
        }
        return s;
    };
    double s0 = sse_at(fit.n_asy, fit.tau);
    CHECK(s0 == doctest::Approx(fit.residual_sse).epsilon(1e-9));
    // central finite differences
    double ha = std::max(1e-6, fit.n_asy * 1e-7);
    double ht = std::max(1e-6, fit.tau * 1e-7);
    double ga = (sse_at(fit.n_asy + ha, fit.tau) - sse_at(fit.n_asy - ha, fit.tau)) / (2 * ha);
    double gt = (sse_at(fit.n_asy, fit.tau + ht) - sse_at(fit.n_asy, fit.tau - ht)) / (2 * ht);
    CHECK(std::hypot(ga, gt) < 1e-6 * fit.residual_sse);

    // noisy recovery stays near the truth
    CHECK(fit.n_asy == doctest::Approx(80.0).epsilon(0.05));
    CHECK(fit.tau == doctest::Approx(90.0).epsilon(0.10));
    CHECK(fit.ci95_n_asy > 0.0);
    CHECK(fit.ci95_tau > 0.0);
}

TEST_CASE("fit rejects degenerate designs") {
    std::vector<SelectivityPoint> few{{10, 5}, {20, 8}, {30, 9}, {40, 10}};
    CHECK_THROWS_AS(fit_saturation(few), DataError);

    std::vector<SelectivityPoint> flat{{10, 5}, {10, 6}, {10, 5}, {10, 7}, {10, 6}};
    CHECK_THROWS_WITH_AS(fit_saturation(flat), doctest::Contains("degenerate design"), DataError);

    std::vector<SelectivityPoint> two_r{{10, 5}, {10, 6}, {20, 8}, {20, 9}, {20, 7}};
    CHECK_THROWS_AS(fit_saturation(two_r), DataError);

    // r = 1 points are discarded before the count check
    std::vector<SelectivityPoint> ones{{1, 1}, {1, 1}, {1, 1}, {10, 5}, {20, 8},
                                       {30, 9}, {40, 10}, {50, 11}};
    CHECK_NOTHROW(fit_saturation(ones));
}

namespace {

// Raters with Zipf-weighted personal author preferences: concentrated
// observed points, diffuse after the author shuffle.
std::vector<AnnotatedRating> zipf_corpus(std::uint64_t seed) {
    const int n_raters = 250;
    const int n_authors = 400;
    const double s = 1.6;
    std::vector<double> cum(n_authors);
    double z = 0.0;
    for (int k = 0; k < n_authors; ++k) {
        z += 1.0 / std::pow(k + 1.0, s);
        cum[k] = z;
    }
    for (double& c : cum) c /= z;

    Rng rng(seed);
    std::vector<AnnotatedRating> xs;
    int note = 0;
    for (int i = 0; i < n_raters; ++i) {
        std::uint64_t offset = rng.below(n_authors); // personal preference order
        std::uint64_t r = 2 + rng.below(70);
        for (std::uint64_t k = 0; k < r; ++k) {
            double u = rng.next_double();
            int rank = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
            int author = static_cast<int>((offset + static_cast<std::uint64_t>(rank)) % n_authors);
            auto rater = "r" + std::to_string(i);
            auto aid = "a" + std::to_string(author);
            xs.push_back(ar(rater.c_str(), aid.c_str(), note++,
                            author % 2 ? Party::Republican : Party::Democrat));
        }
    }
    return xs;
}

} // namespace

TEST_CASE("observed fits stay below the shuffled null") {
    int successes = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
        auto xs = zipf_corpus(1000 + static_cast<std::uint64_t>(rep));
        auto obs = fit_saturation(selectivity_points(xs));
        auto null_fit =
            fit_saturation(selectivity_points(shuffle_null(xs, 5000 + static_cast<std::uint64_t>(rep))));
        bool ok = obs.tau < null_fit.tau && obs.n_asy < null_fit.n_asy &&
                  obs.n_asy + obs.ci95_n_asy < null_fit.n_asy - null_fit.ci95_n_asy &&
                  obs.tau + obs.ci95_tau < null_fit.tau - null_fit.ci95_tau;
        if (ok) ++successes;
    }
    CHECK(successes >= 95);
}

TEST_SUITE_END();
