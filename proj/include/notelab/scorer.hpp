#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "notelab/core.hpp"

namespace notelab::scorer {

struct ScorerConfig {
    int factor_dim = 1;
    double lambda_intercept = 0.15;
    double lambda_factor = 0.03;
    double learning_rate = 0.2;
    double lr_decay = 0.99; // per-epoch multiplier
    int epochs = 200;
    double convergence_tol = 1e-7; // relative loss change
    double crh_threshold = 0.40;
    double crnh_intercept_threshold = -0.05;
    double crnh_factor_slope = 0.8;
    std::uint64_t min_ratings_for_status = 5;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const; // throws UsageError
};

// HELPFUL -> 1.0, SOMEWHAT_HELPFUL -> 0.5, NOT_HELPFUL -> 0.0
double encode_rating(RatingLevel level);

// r_hat = mu + i_u + i_n + f_u . f_n. Entity vectors are indexed by the
// sorted id order in note_ids / rater_ids; factors are entity-major.
struct MfModel {
    double mu = 0.0;
    int factor_dim = 1;
    std::vector<std::string> note_ids;
    std::vector<std::string> rater_ids;
    std::unordered_map<std::string, std::size_t> note_index;
    std::unordered_map<std::string, std::size_t> rater_index;
    std::vector<double> note_intercept;
    std::vector<double> rater_intercept;
    std::vector<double> note_factor;
    std::vector<double> rater_factor;
    double final_loss = 0.0;
    std::vector<double> loss_history; // loss at the start of each epoch
    int epochs_run = 0;

    double note_intercept_of(const std::string& note_id) const;
    double rater_intercept_of(const std::string& rater_id) const;
    double note_factor_norm(const std::string& note_id) const;
    double predict(const std::string& note_id, const std::string& rater_id) const;
};

// Deterministic full-batch gradient descent on the regularized squared
// loss. Each parameter's gradient is scaled by its observation count
// (diagonal preconditioning), which leaves the stationary points of the
// loss unchanged but makes one learning rate work for entities of any
// degree. Input order does not matter; ratings are order-normalized first.
MfModel train(const std::vector<RatingEvent>& ratings, const ScorerConfig& cfg);

// Loss and raw (unpreconditioned) analytic gradient at the model's current
// parameters, for verification against finite differences.
double model_loss(const MfModel& model, const std::vector<RatingEvent>& ratings,
                  const ScorerConfig& cfg);

struct ModelGradient {
    double mu = 0.0;
    std::vector<double> note_intercept;
    std::vector<double> rater_intercept;
    std::vector<double> note_factor;
    std::vector<double> rater_factor;
};

ModelGradient model_gradient(const MfModel& model, const std::vector<RatingEvent>& ratings,
                             const ScorerConfig& cfg);

struct NoteScore {
    NoteStatus status = NoteStatus::NeedsMoreRatings;
    double note_intercept = 0.0;
    double abs_factor = 0.0;
    std::uint64_t n_ratings = 0;
    bool locked = false;

    friend bool operator==(const NoteScore&, const NoteScore&) = default;
};

struct StatusAssignment {
    std::map<std::string, NoteScore> notes;

    std::uint64_t count(NoteStatus s) const;
    std::vector<std::string> notes_with(NoteStatus s) const; // sorted note_ids
};

// Threshold rules on the trained parameters; notes under the rating floor
// stay NMR no matter what the model says.
StatusAssignment assign_status(const MfModel& model, const std::vector<RatingEvent>& ratings,
                               const ScorerConfig& cfg);

// train + assign_status + locked-status pass-through from the history.
StatusAssignment score_corpus(const std::vector<RatingEvent>& ratings,
                              const std::vector<StatusRecord>& status_history,
                              const ScorerConfig& cfg);

} // namespace notelab::scorer
