#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "notelab/cache.hpp"
#include "notelab/core.hpp"
#include "notelab/scorer.hpp"

namespace notelab::synthgen {

enum class NoteType { Bridging, PartisanDem, PartisanRep };

std::string_view format_note_type(NoteType t);
NoteType parse_note_type(std::string_view token);

struct LeaningMix {
    double mu1 = -0.5;
    double sigma1 = 0.2;
    double w1 = 0.5;
    double mu2 = 0.5;
    double sigma2 = 0.2;
    double w2 = 0.5;
};

struct SynthConfig {
    std::uint64_t n_raters = 1000;
    std::uint64_t n_notes = 500;
    std::uint64_t n_authors = 50;
    double activity_alpha = 2.5;     // per-rater rating volume, discrete power law
    std::uint64_t activity_xmin = 3;
    LeaningMix leaning_mix;
    double polarization_by_activity = 0.0; // extremity multiplier per activity decile
    double selectivity_zipf_s = 1.2;       // per-rater author-preference skew
    double frac_bridging_notes = 0.3;
    double noise = 0.05; // rating flip probability
    std::uint64_t seed = 1;

    void validate() const; // throws UsageError naming the offending field
};

struct GroundTruth {
    std::map<std::string, double> rater_leaning;
    std::map<std::string, NoteType> note_type;
    std::map<std::string, Party> author_party; // tweet authors
    std::vector<std::string> pivotal_notes;    // filled by plant_pivotal_rater
    std::string super_rater;                   // empty when none planted
};

struct SynthCorpus {
    cache::Corpus corpus;
    GroundTruth truth;
};

SynthCorpus generate(const SynthConfig& cfg);

// Adds one hyperactive rater so that exactly n_pivotal bridging notes hold CRH
// only while that rater is present, verified by scoring the corpus with and
// without the rater. The rater also becomes the top-1 by activity so a k=1
// removal ladder targets it. Throws DataError when no construction verifies
// within 100 attempts.
SynthCorpus plant_pivotal_rater(SynthCorpus corpus, std::size_t n_pivotal,
                                const scorer::ScorerConfig& scorer_cfg = {});

// Writes ratings-00000.tsv, notes-00000.tsv, noteStatusHistory-00000.tsv,
// annotations.csv, and ground_truth.json under dir.
void write_synth(const std::filesystem::path& dir, const SynthCorpus& sc);

GroundTruth read_ground_truth(const std::filesystem::path& file);

} // namespace notelab::synthgen
