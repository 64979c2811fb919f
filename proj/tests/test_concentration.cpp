#include <doctest.h>

#include <cmath>
#include <vector>

#include "notelab/concentration.hpp"
#include "notelab/errors.hpp"
#include "notelab/rng.hpp"

using namespace notelab;
using namespace notelab::concentration;

TEST_SUITE_BEGIN("concentration");

TEST_CASE("activity counts per rater") {
    std::vector<RatingEvent> evs{
        {"n1", "r1", 1, RatingLevel::Helpful},
        {"n2", "r1", 2, RatingLevel::Helpful},
        {"n1", "r2", 3, RatingLevel::Helpful},
    };
    auto counts = activity_counts(evs);
    CHECK(counts.n() == 2);
    CHECK(counts.by_rater.at("r1") == 2);
    CHECK(counts.by_rater.at("r2") == 1);
}

TEST_CASE("gini on known vectors") {
    CHECK(gini(std::vector<double>{1, 2, 3, 4}).gini == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(gini(std::vector<double>{0, 0, 0, 12}).gini == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(gini(std::vector<double>{5, 5, 5, 5}).gini == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(gini(std::vector<double>{7}).gini == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gini equals the pairwise mean-difference form") {
    Rng rng(31);
    std::vector<double> xs;
    for (int i = 0; i < 200; ++i) xs.push_back(static_cast<double>(rng.below(1000)));
    xs[0] = 1.0; // ensure a nonzero total

    double total = 0.0, pair_sum = 0.0;
    for (double v : xs) total += v;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) pair_sum += std::fabs(xs[i] - xs[j]);
    double oracle = pair_sum / (2.0 * static_cast<double>(xs.size()) * total);

    CHECK(gini(xs).gini == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("gini is invariant under positive scaling") {
    Rng rng(77);
    std::vector<double> xs;
    for (int i = 0; i < 500; ++i) xs.push_back(static_cast<double>(rng.below(100) + 1));
    double g0 = gini(xs).gini;
    for (double scale : {0.001, 3.7, 1e6}) {
        std::vector<double> ys(xs);
        for (double& v : ys) v *= scale;
        CHECK(gini(ys).gini == doctest::Approx(g0).epsilon(1e-12));
    }
}

TEST_CASE("lorenz curve runs from (0,0) to (1,1) and is convex-ordered") {
    std::vector<double> xs;
    for (int i = 1; i <= 10; ++i) xs.push_back(static_cast<double>(i));
    auto res = gini(xs);
    REQUIRE(res.lorenz.size() == 11);
    CHECK(res.lorenz.front().first == doctest::Approx(0.0));
    CHECK(res.lorenz.front().second == doctest::Approx(0.0));
    CHECK(res.lorenz.back().first == doctest::Approx(1.0));
    CHECK(res.lorenz.back().second == doctest::Approx(1.0));
    for (std::size_t i = 1; i < res.lorenz.size(); ++i) {
        CHECK(res.lorenz[i].second >= res.lorenz[i - 1].second);
        CHECK(res.lorenz[i].second <= res.lorenz[i].first + 1e-12); // below the diagonal
    }
    // top 20% of 10 raters = ranks 9 and 10 = 19/55
    CHECK(res.top20_share == doctest::Approx(19.0 / 55.0).epsilon(1e-12));
}

TEST_CASE("lorenz is downsampled to 1000 quantiles on large inputs") {
    std::vector<double> xs(150000, 1.0);
    auto res = gini(xs);
    CHECK(res.lorenz.size() == 1001);
    CHECK(res.gini == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(res.top20_share == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("gini input validation") {
    CHECK_THROWS_AS(gini(std::vector<double>{}), DataError);
    CHECK_THROWS_AS(gini(std::vector<double>{0, 0}), DataError);
    CHECK_THROWS_AS(gini(std::vector<double>{-1, 2}), DataError);
}

TEST_CASE("utc year boundaries") {
    CHECK(utc_year_of_ms(0) == 1970);
    CHECK(utc_year_of_ms(1609459200000LL) == 2021);     // 2021-01-01T00:00:00Z
    CHECK(utc_year_of_ms(1609459199999LL) == 2020);     // one ms earlier
    CHECK(utc_year_of_ms(1672531200000LL) == 2023);
}

TEST_CASE("gini by year splits populations at UTC year boundaries") {
    const std::int64_t y2021 = 1609459200000LL;
    std::vector<RatingEvent> evs;
    // 2020: r1 x3, r2 x1 -> G = 0.25
    for (int i = 0; i < 3; ++i) evs.push_back({"n1", "r1", y2021 - 1000 - i, RatingLevel::Helpful});
    evs.push_back({"n1", "r2", y2021 - 5000, RatingLevel::Helpful});
    // 2021: r1 x2, r3 x2 -> G = 0
    for (int i = 0; i < 2; ++i) evs.push_back({"n2", "r1", y2021 + i, RatingLevel::Helpful});
    for (int i = 0; i < 2; ++i) evs.push_back({"n2", "r3", y2021 + 10 + i, RatingLevel::Helpful});

    auto by_year = gini_by_year(evs);
    REQUIRE(by_year.size() == 2);
    CHECK(by_year.at(2020) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(by_year.at(2021) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("discrete power law pmf normalizes and cdf is monotone") {
    DiscretePowerLaw pl{2.5, 5};
    double sum = 0.0;
    for (std::uint64_t x = 5; x <= 2000; ++x) sum += pl.pmf(x);
    CHECK(sum == doctest::Approx(pl.cdf(2000)).epsilon(1e-9));
    CHECK(pl.cdf(10000000) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(pl.pmf(4) == doctest::Approx(0.0));
    double prev = 0.0;
    for (std::uint64_t x = 5; x < 50; ++x) {
        double c = pl.cdf(x);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("sampler matches the pmf head") {
    DiscretePowerLaw pl{2.5, 3};
    auto xs = pl.sample_n(200000, 4242);
    CHECK(xs == pl.sample_n(200000, 4242)); // deterministic per seed
    std::vector<std::uint64_t> hist(10, 0);
    for (auto v : xs) {
        CHECK(v >= 3);
        if (v < 13) ++hist[v - 3];
    }
    for (std::uint64_t k = 0; k < 4; ++k) {
        double expect = pl.pmf(3 + k);
        double got = static_cast<double>(hist[k]) / 200000.0;
        CHECK(got == doctest::Approx(expect).epsilon(0.02));
    }
}

TEST_CASE("fit recovers planted parameters") {
    DiscretePowerLaw truth{2.5, 5};
    auto xs = truth.sample_n(30000, 1001);
    auto fit = fit_power_law(xs);
    CHECK(fit.alpha == doctest::Approx(2.5).epsilon(0.04));
    CHECK(fit.x_min <= 20);
    CHECK(fit.ks_distance < 0.02);
    CHECK(fit.n_tail >= 1000);
    CHECK(fit.alpha_stderr ==
          doctest::Approx((fit.alpha - 1.0) / std::sqrt(static_cast<double>(fit.n_tail)))
              .epsilon(1e-12));
}

TEST_CASE("fit finds the cutoff when the body is not power-law") {
    // lognormal-ish body below 50, power law above
    Rng rng(2024);
    std::vector<std::uint64_t> xs;
    for (int i = 0; i < 20000; ++i) {
        double v = std::exp(2.0 + 0.7 * rng.normal());
        std::uint64_t u = static_cast<std::uint64_t>(v) + 1;
        if (u > 49) u = 49;
        xs.push_back(u);
    }
    DiscretePowerLaw tail{2.2, 50};
    auto tail_xs = tail.sample_n(8000, 55);
    xs.insert(xs.end(), tail_xs.begin(), tail_xs.end());

    auto fit = fit_power_law(xs);
    CHECK(fit.x_min >= 30);
    CHECK(fit.x_min <= 90);
    CHECK(fit.alpha == doctest::Approx(2.2).epsilon(0.06));
}

TEST_CASE("fit input validation") {
    std::vector<std::uint64_t> tiny(49, 3);
    CHECK_THROWS_AS(fit_power_law(tiny), DataError);
    std::vector<std::uint64_t> flat(100, 7);
    CHECK_THROWS_AS(fit_power_law(flat), DataError);
    std::vector<std::uint64_t> zeros(100, 0);
    CHECK_THROWS_AS(fit_power_law(zeros), DataError);
}

TEST_CASE("fit is independent of thread count") {
    DiscretePowerLaw truth{3.0, 2};
    auto xs = truth.sample_n(5000, 77);
    auto f1 = fit_power_law(xs, 1);
    auto f4 = fit_power_law(xs, 4);
    CHECK(f1.alpha == f4.alpha);
    CHECK(f1.x_min == f4.x_min);
    CHECK(f1.ks_distance == f4.ks_distance);
}

TEST_CASE("LR test favors the power law on power-law data") {
    DiscretePowerLaw truth{2.3, 4};
    auto xs = truth.sample_n(20000, 909);
    auto fit = fit_power_law(xs);
    auto lr = lr_test_vs_exponential(xs, fit);
    CHECK(lr.R > 2.0);
    CHECK(lr.p_value < 0.05);
}

TEST_CASE("LR test favors the geometric on geometric data") {
    Rng rng(313);
    std::vector<std::uint64_t> xs;
    const double q = std::exp(-0.25); // shifted geometric, lambda = 0.25
    for (int i = 0; i < 20000; ++i) {
        double u = rng.next_double();
        xs.push_back(1 + static_cast<std::uint64_t>(std::log1p(-u) / std::log(q)));
    }
    auto fit = fit_power_law(xs);
    auto lr = lr_test_vs_exponential(xs, fit);
    CHECK(lr.R < 0.0);
}

TEST_SUITE_END();
