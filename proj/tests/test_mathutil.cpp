#include <doctest.h>

#include <cmath>
#include <vector>

#include "notelab/mathutil.hpp"
#include "notelab/rng.hpp"

using namespace notelab;

TEST_SUITE_BEGIN("mathutil");

// Reference values computed with mpmath (dps=30).
TEST_CASE("hurwitz zeta matches high-precision references") {
    CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(1.6449340668482264).epsilon(1e-12));
    CHECK(hurwitz_zeta(1.5, 2.0) == doctest::Approx(1.6123753486854883).epsilon(1e-12));
    CHECK(hurwitz_zeta(2.5, 7.0) == doctest::Approx(0.040081757933660701).epsilon(1e-12));
    CHECK(hurwitz_zeta(3.5, 17.0) == doctest::Approx(0.00036121825718011098).epsilon(1e-12));
    CHECK(hurwitz_zeta(1.2, 1.0) == doctest::Approx(5.5915824411777519).epsilon(1e-12));
    CHECK(hurwitz_zeta(5.5, 3.0) == doctest::Approx(0.0031074930426060845).epsilon(1e-12));
    CHECK(hurwitz_zeta(6.0, 64.0) == doctest::Approx(1.9365413348333846e-10).epsilon(1e-12));
}

TEST_CASE("hurwitz zeta at large q and near the pole") {
    CHECK(hurwitz_zeta(2.0, 100000.0) == doctest::Approx(1.0000050000166667e-5).epsilon(1e-12));
    CHECK(hurwitz_zeta(3.06, 4232.0) == doctest::Approx(1.6426854942843665e-8).epsilon(1e-12));
    CHECK(hurwitz_zeta(1.000001, 1.0) == doctest::Approx(1000000.5772980044).epsilon(1e-9));
}

TEST_CASE("regularized incomplete gamma") {
    CHECK(gamma_p(2.5, 1.0) == doctest::Approx(0.15085496391539038).epsilon(1e-10));
    CHECK(gamma_p(0.5, 4.0) == doctest::Approx(0.9953222650189527).epsilon(1e-10));
    CHECK(gamma_p(1.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("chi-square survival function") {
    CHECK(chi2_sf(30.0, 19) == doctest::Approx(0.05179845889302389).epsilon(1e-9));
    CHECK(chi2_sf(10.0, 10) == doctest::Approx(0.44049328506521257).epsilon(1e-9));
}

TEST_CASE("student t cdf and quantile") {
    CHECK(t_cdf(1.5, 7) == doctest::Approx(0.911350756505015).epsilon(1e-9));
    CHECK(t_quantile(0.975, 10) == doctest::Approx(2.2281388519649385).epsilon(1e-8));
    CHECK(t_quantile(0.975, 3) == doctest::Approx(3.182446305284263).epsilon(1e-8));
    CHECK(t_quantile(0.975, 120) == doctest::Approx(1.9799304050527766).epsilon(1e-8));
    // quantile inverts cdf
    for (int dof : {2, 5, 30}) {
        double q = t_quantile(0.9, dof);
        CHECK(t_cdf(q, dof) == doctest::Approx(0.9).epsilon(1e-8));
    }
}

TEST_CASE("two-sided normal p-value") {
    CHECK(normal_two_sided_p(1.0) == doctest::Approx(0.31731050786291415).epsilon(1e-10));
    CHECK(normal_two_sided_p(-1.0) == doctest::Approx(0.31731050786291415).epsilon(1e-10));
    CHECK(normal_two_sided_p(6.49) == doctest::Approx(8.583637417235892e-11).epsilon(1e-6));
    CHECK(normal_two_sided_p(0.0) == doctest::Approx(1.0));
}

TEST_CASE("moment helpers") {
    std::vector<double> xs{1.0, 2.0, 3.0, 4.0, 10.0};
    CHECK(mean_of(xs) == doctest::Approx(4.0));
    CHECK(median_of(xs) == doctest::Approx(3.0));
    CHECK(sample_std(xs) == doctest::Approx(3.5355339059327378).epsilon(1e-12));
    CHECK(skewness(xs) == doctest::Approx(1.1384199576606167).epsilon(1e-10));
    CHECK(skewness(xs, true) == doctest::Approx(1.6970562748477143).epsilon(1e-10));

    std::vector<double> tiny{0.0, 0.0, 1.0};
    CHECK(skewness(tiny) == doctest::Approx(0.7071067811865478).epsilon(1e-12));

    std::vector<double> even{1.0, 2.0, 3.0, 4.0};
    CHECK(median_of(even) == doctest::Approx(2.5));
}

TEST_CASE("spearman rho with average ranks on ties") {
    std::vector<double> a{1, 2, 2, 3}, b{10, 20, 30, 40};
    CHECK(spearman_rho(a, b) == doctest::Approx(0.9486832980505139).epsilon(1e-10));
    std::vector<double> a2{3, 1, 4, 1, 5, 9, 2, 6}, b2{8, 2, 7, 1, 8, 9, 3, 5};
    CHECK(spearman_rho(a2, b2) == doctest::Approx(0.8072289156626505).epsilon(1e-10));
    // exact monotone agreement
    std::vector<double> c{1, 2, 3}, d{5, 6, 9};
    CHECK(spearman_rho(c, d) == doctest::Approx(1.0));
}

TEST_CASE("rng is deterministic and well-distributed") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng r(7);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double u = r.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));

    // below() stays in range and hits both ends eventually
    Rng r2(11);
    bool saw0 = false, saw9 = false;
    for (int i = 0; i < 1000; ++i) {
        std::uint64_t v = r2.below(10);
        CHECK(v < 10);
        saw0 |= v == 0;
        saw9 |= v == 9;
    }
    CHECK(saw0);
    CHECK(saw9);

    // derive() produces decorrelated streams
    Rng s1(Rng::derive(1, 100)), s2(Rng::derive(1, 101));
    CHECK(s1.next_u64() != s2.next_u64());
}

TEST_CASE("normal draws have the right first two moments") {
    Rng r(123);
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        double z = r.normal();
        sum += z;
        sum2 += z * z;
    }
    CHECK(sum / n == doctest::Approx(0.0).epsilon(0.02));
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_SUITE_END();
