#pragma once

#include <cstdint>
#include <vector>

#include "notelab/ingest.hpp"

namespace notelab::selectivity {

struct SelectivityPoint {
    std::uint64_t r = 0;         // total ratings by the rater
    std::uint64_t n_authors = 0; // distinct tweet authors rated

    friend bool operator==(const SelectivityPoint&, const SelectivityPoint&) = default;
};

struct SaturationFit {
    double n_asy = 0.0;
    double tau = 0.0;
    double ci95_n_asy = 0.0; // symmetric half-widths
    double ci95_tau = 0.0;
    double residual_sse = 0.0;
    int iterations = 0;
};

// One point per rater, ordered by rater_id.
std::vector<SelectivityPoint> selectivity_points(
    const std::vector<ingest::AnnotatedRating>& annotated);

// Uniformly permutes the (tweet_author_id, party) labels across rating
// events; everything else, including per-rater counts, is untouched.
std::vector<ingest::AnnotatedRating> shuffle_null(
    const std::vector<ingest::AnnotatedRating>& annotated, std::uint64_t seed);

// Levenberg-Marquardt fit of n_authors = n_asy * (1 - exp(-r / tau)).
// Points with r < 2 are dropped first; needs >= 5 remaining points over
// >= 3 distinct r values.
SaturationFit fit_saturation(const std::vector<SelectivityPoint>& points);

// Same fit over raw (r, y) pairs; the integer-point overload delegates here.
SaturationFit fit_saturation_xy(const std::vector<double>& r, const std::vector<double>& y);

double saturation_value(const SaturationFit& fit, double r);

} // namespace notelab::selectivity
