#include "notelab/counterfactual.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "notelab/errors.hpp"
#include "notelab/ingest.hpp"
#include "notelab/mathutil.hpp"
#include "notelab/parallel.hpp"

namespace notelab::counterfactual {

RaterActivity rater_activity(const std::vector<RatingEvent>& ratings) {
    RaterActivity act;
    for (const auto& r : ratings) {
        auto [it, inserted] = act.by_rater.try_emplace(r.rater_id);
        auto& e = it->second;
        if (inserted || r.created_at_ms < e.first_ts) e.first_ts = r.created_at_ms;
        ++e.count;
    }
    return act;
}

std::vector<std::string> top_k_raters(const RaterActivity& activity, std::uint64_t k) {
    struct Ranked {
        const std::string* rater;
        std::uint64_t count;
        std::int64_t first_ts;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(activity.by_rater.size());
    for (const auto& [rater, e] : activity.by_rater) ranked.push_back({&rater, e.count, e.first_ts});
    std::size_t take = std::min<std::size_t>(ranked.size(), k);
    auto rank_less = [](const Ranked& a, const Ranked& b) {
        if (a.count != b.count) return a.count > b.count;
        if (a.first_ts != b.first_ts) return a.first_ts < b.first_ts;
        return *a.rater < *b.rater;
    };
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                      ranked.end(), rank_less);
    std::vector<std::string> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(*ranked[i].rater);
    return out;
}

std::vector<RatingEvent> remove_raters(const std::vector<RatingEvent>& ratings,
                                       const std::unordered_set<std::string>& removed) {
    std::vector<RatingEvent> out;
    out.reserve(ratings.size());
    for (const auto& r : ratings)
        if (!removed.count(r.rater_id)) out.push_back(r);
    return out;
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++inter;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::uint64_t> default_ladder_ks() {
    return {0, 10, 100, 200, 500, 1000, 5000, 10000};
}

std::string config_digest(const scorer::ScorerConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "factor_dim=" << cfg.factor_dim << "\nlambda_intercept=" << cfg.lambda_intercept
       << "\nlambda_factor=" << cfg.lambda_factor << "\nlearning_rate=" << cfg.learning_rate
       << "\nlr_decay=" << cfg.lr_decay << "\nepochs=" << cfg.epochs
       << "\nconvergence_tol=" << cfg.convergence_tol << "\ncrh_threshold=" << cfg.crh_threshold
       << "\ncrnh_intercept_threshold=" << cfg.crnh_intercept_threshold
       << "\ncrnh_factor_slope=" << cfg.crnh_factor_slope
       << "\nmin_ratings_for_status=" << cfg.min_ratings_for_status << "\nseed=" << cfg.seed
       << "\n";
    const std::string canon = os.str();
    std::uint64_t h = fnv1a64(canon.data(), canon.size());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

namespace {

std::map<NoteStatus, std::vector<std::string>> status_sets(const scorer::StatusAssignment& a) {
    std::map<NoteStatus, std::vector<std::string>> sets;
    sets[NoteStatus::NeedsMoreRatings];
    sets[NoteStatus::CurrentlyRatedHelpful];
    sets[NoteStatus::CurrentlyRatedNotHelpful];
    for (const auto& [id, sc] : a.notes) sets[sc.status].push_back(id); // already sorted
    return sets;
}

} // namespace

StabilityReport run_ladder(const std::vector<RatingEvent>& ratings,
                           const std::vector<StatusRecord>& status_history,
                           const std::vector<std::uint64_t>& ks, const scorer::ScorerConfig& cfg,
                           const LadderOptions& options) {
    if (ks.empty() || std::find(ks.begin(), ks.end(), 0) == ks.end())
        throw UsageError("removal ladder needs the k=0 baseline");
    cfg.validate();

    auto deduped = dedup_ratings(ratings);
    auto history = options.clear_locks ? ingest::clear_locks(status_history) : status_history;
    auto activity = rater_activity(deduped);

    StabilityReport report;
    report.config_digest = config_digest(cfg);
    report.scenarios.resize(ks.size());

    // Baseline first; it defines the note universe every scenario reports on.
    scorer::StatusAssignment baseline = scorer::score_corpus(deduped, history, cfg);
    auto baseline_sets = status_sets(baseline);

    parallel_for(ks.size(), options.threads, [&](std::size_t si) {
        ScenarioResult& res = report.scenarios[si];
        res.k = ks[si];
        res.removed_raters = top_k_raters(activity, res.k);
        if (res.k == 0) {
            res.n_ratings_remaining = deduped.size();
            res.assignment = baseline;
        } else {
            std::unordered_set<std::string> removed(res.removed_raters.begin(),
                                                    res.removed_raters.end());
            auto remaining = remove_raters(deduped, removed);
            res.n_ratings_remaining = remaining.size();
            res.assignment = scorer::score_corpus(remaining, history, cfg);
            // zero-rating notes fall back to NMR over the baseline universe
            for (const auto& [id, sc] : baseline.notes)
                if (!res.assignment.notes.count(id)) {
                    scorer::NoteScore nmr;
                    nmr.status = NoteStatus::NeedsMoreRatings;
                    res.assignment.notes.emplace(id, nmr);
                }
        }
        auto sets = status_sets(res.assignment);
        for (auto status : {NoteStatus::NeedsMoreRatings, NoteStatus::CurrentlyRatedHelpful,
                            NoteStatus::CurrentlyRatedNotHelpful}) {
            const auto& b = baseline_sets[status];
            const auto& s = sets[status];
            StatusSummary sum;
            sum.n_notes = s.size();
            std::size_t inter = 0, i = 0, j = 0;
            while (i < b.size() && j < s.size()) {
                if (b[i] == s[j]) {
                    ++inter;
                    ++i;
                    ++j;
                } else if (b[i] < s[j]) {
                    ++i;
                } else {
                    ++j;
                }
            }
            sum.retained = inter;
            sum.gained = s.size() - inter;
            sum.lost = b.size() - inter;
            std::size_t uni = b.size() + s.size() - inter;
            sum.jaccard = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
            res.by_status[status] = sum;
        }
    });
    return report;
}

} // namespace notelab::counterfactual
