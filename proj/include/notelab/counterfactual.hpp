#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "notelab/core.hpp"
#include "notelab/scorer.hpp"

namespace notelab::counterfactual {

// Activity with first-rating timestamps; the top-k tie-break needs both.
struct RaterActivity {
    struct Entry {
        std::uint64_t count = 0;
        std::int64_t first_ts = 0;
    };
    std::map<std::string, Entry> by_rater;
};

RaterActivity rater_activity(const std::vector<RatingEvent>& ratings);

// k most active raters, ordered by rank: count descending, then earliest
// first rating, then rater_id. k > n returns everyone.
std::vector<std::string> top_k_raters(const RaterActivity& activity, std::uint64_t k);

std::vector<RatingEvent> remove_raters(const std::vector<RatingEvent>& ratings,
                                       const std::unordered_set<std::string>& removed);

// |a n b| / |a u b| over sorted id vectors; J(empty, empty) = 1.
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct StatusSummary {
    std::uint64_t n_notes = 0; // scenario-side set size
    double jaccard = 1.0;
    std::uint64_t gained = 0;   // in scenario, not in baseline
    std::uint64_t lost = 0;     // in baseline, not in scenario
    std::uint64_t retained = 0; // in both
};

struct ScenarioResult {
    std::uint64_t k = 0;
    std::vector<std::string> removed_raters;
    std::uint64_t n_ratings_remaining = 0;
    scorer::StatusAssignment assignment; // over the baseline note universe
    std::map<NoteStatus, StatusSummary> by_status;
};

struct StabilityReport {
    std::vector<ScenarioResult> scenarios; // in the order of ks
    std::string config_digest;
};

struct LadderOptions {
    bool clear_locks = true;
    unsigned threads = 1; // scenario-level parallelism
};

// Baseline (k = 0) plus one retrained scenario per k. Every scenario is
// reported over the baseline's note universe; notes with no remaining
// ratings fall back to NMR.
StabilityReport run_ladder(const std::vector<RatingEvent>& ratings,
                           const std::vector<StatusRecord>& status_history,
                           const std::vector<std::uint64_t>& ks, const scorer::ScorerConfig& cfg,
                           const LadderOptions& options = {});

std::vector<std::uint64_t> default_ladder_ks();

// Stable hex digest of the scorer configuration for report provenance.
std::string config_digest(const scorer::ScorerConfig& cfg);

} // namespace notelab::counterfactual
