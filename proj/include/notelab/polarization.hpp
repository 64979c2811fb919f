#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "notelab/concentration.hpp"
#include "notelab/ingest.hpp"

namespace notelab::polarization {

enum class SignalDirection : std::uint8_t { Pro, Anti };

struct PartisanSignal {
    SignalDirection direction = SignalDirection::Pro;
    Party party = Party::Democrat;

    friend bool operator==(const PartisanSignal&, const PartisanSignal&) = default;
};

struct SignalCounts {
    std::uint64_t a_dem = 0, p_dem = 0, a_rep = 0, p_rep = 0;

    std::uint64_t total() const { return a_dem + p_dem + a_rep + p_rep; }
    void add(const PartisanSignal& s);
};

struct LeaningValue {
    double L = 0.0;             // positive = Republican-leaning
    std::uint64_t n_ratings = 0;
};

struct LeaningStats {
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;   // n-1 denominator
    double skewness = 0.0; // Fisher-Pearson g1 (biased moment form)
};

struct Gmm2 {
    double mu1 = 0.0, sigma1 = 1.0, w1 = 0.5;
    double mu2 = 0.0, sigma2 = 1.0, w2 = 0.5;
    double log_likelihood = 0.0;
    int iterations = 0;
};

// H/SH agreement with a MISLEADING note on a party's tweet reads as an
// anti-party signal; the other cells follow by flipping either axis.
PartisanSignal signal_of(RatingLevel level, NoteClassification classification, Party party);

LeaningValue leaning(const SignalCounts& counts);

std::map<std::string, LeaningValue> leaning_per_rater(
    const std::vector<ingest::AnnotatedRating>& annotated, std::uint64_t min_ratings = 30);

LeaningStats leaning_stats(const std::vector<double>& values);

// Deciles 1..10 by increasing activity; remainder goes to the top deciles.
std::map<std::string, int> decile_partition(const concentration::ActivityCounts& activity,
                                            const std::set<std::string>& eligible);

// 1-D two-component EM, 10 seeded restarts, components ordered by mean.
Gmm2 fit_gmm2(const std::vector<double>& values, std::uint64_t seed);

double ashman_d(const Gmm2& g);

inline bool is_bimodal(double d) { return d > 2.0; }

} // namespace notelab::polarization
