#include "notelab/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "notelab/errors.hpp"
#include "notelab/mathutil.hpp"
#include "notelab/parallel.hpp"
#include "notelab/rng.hpp"

namespace notelab::scorer {

void ScorerConfig::validate() const {
    if (factor_dim < 1) throw UsageError("factor_dim must be >= 1");
    if (lambda_intercept <= 0.0) throw UsageError("lambda_intercept must be > 0");
    if (lambda_factor <= 0.0) throw UsageError("lambda_factor must be > 0");
    if (learning_rate <= 0.0) throw UsageError("learning_rate must be > 0");
    if (lr_decay <= 0.0 || lr_decay > 1.0) throw UsageError("lr_decay must be in (0, 1]");
    if (epochs < 1) throw UsageError("epochs must be >= 1");
    if (convergence_tol < 0.0) throw UsageError("convergence_tol must be >= 0");
    if (crh_threshold <= crnh_intercept_threshold)
        throw UsageError("crh_threshold must exceed crnh_intercept_threshold");
    if (crnh_factor_slope < 0.0) throw UsageError("crnh_factor_slope must be >= 0");
    if (min_ratings_for_status < 1) throw UsageError("min_ratings_for_status must be >= 1");
    if (threads < 1) throw UsageError("threads must be >= 1");
}

double encode_rating(RatingLevel level) {
    switch (level) {
        case RatingLevel::Helpful: return 1.0;
        case RatingLevel::SomewhatHelpful: return 0.5;
        case RatingLevel::NotHelpful: return 0.0;
    }
    throw NumericError("unreachable rating level");
}

double MfModel::note_intercept_of(const std::string& note_id) const {
    auto it = note_index.find(note_id);
    if (it == note_index.end()) throw DataError("note '" + note_id + "' not in model");
    return note_intercept[it->second];
}

double MfModel::rater_intercept_of(const std::string& rater_id) const {
    auto it = rater_index.find(rater_id);
    if (it == rater_index.end()) throw DataError("rater '" + rater_id + "' not in model");
    return rater_intercept[it->second];
}

double MfModel::note_factor_norm(const std::string& note_id) const {
    auto it = note_index.find(note_id);
    if (it == note_index.end()) throw DataError("note '" + note_id + "' not in model");
    double s = 0.0;
    for (int d = 0; d < factor_dim; ++d) {
        double v = note_factor[it->second * static_cast<std::size_t>(factor_dim) +
                               static_cast<std::size_t>(d)];
        s += v * v;
    }
    return std::sqrt(s);
}

double MfModel::predict(const std::string& note_id, const std::string& rater_id) const {
    auto ni = note_index.find(note_id);
    auto ri = rater_index.find(rater_id);
    if (ni == note_index.end() || ri == rater_index.end())
        throw DataError("prediction for an entity not in the model");
    double p = mu + note_intercept[ni->second] + rater_intercept[ri->second];
    std::size_t d = static_cast<std::size_t>(factor_dim);
    for (std::size_t k = 0; k < d; ++k)
        p += note_factor[ni->second * d + k] * rater_factor[ri->second * d + k];
    return p;
}

namespace {

// Ratings flattened to index triples, note-sorted, with a rater-sorted view.
struct Encoded {
    std::vector<std::uint32_t> note_of;  // per rating, note-sorted order
    std::vector<std::uint32_t> rater_of;
    std::vector<double> value;
    std::vector<std::size_t> note_offset;  // CSR over notes
    std::vector<std::size_t> rater_offset; // CSR over raters
    std::vector<std::uint32_t> by_rater;   // permutation into note-sorted arrays
};

Encoded encode(const std::vector<RatingEvent>& sorted, const MfModel& m) {
    Encoded e;
    std::size_t n = sorted.size();
    e.note_of.resize(n);
    e.rater_of.resize(n);
    e.value.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        e.note_of[k] = static_cast<std::uint32_t>(m.note_index.at(sorted[k].note_id));
        e.rater_of[k] = static_cast<std::uint32_t>(m.rater_index.at(sorted[k].rater_id));
        e.value[k] = encode_rating(sorted[k].level);
    }
    e.note_offset.assign(m.note_ids.size() + 1, 0);
    for (std::size_t k = 0; k < n; ++k) ++e.note_offset[e.note_of[k] + 1];
    std::partial_sum(e.note_offset.begin(), e.note_offset.end(), e.note_offset.begin());

    e.rater_offset.assign(m.rater_ids.size() + 1, 0);
    for (std::size_t k = 0; k < n; ++k) ++e.rater_offset[e.rater_of[k] + 1];
    std::partial_sum(e.rater_offset.begin(), e.rater_offset.end(), e.rater_offset.begin());
    e.by_rater.resize(n);
    {
        std::vector<std::size_t> cursor(e.rater_offset.begin(), e.rater_offset.end() - 1);
        for (std::size_t k = 0; k < n; ++k)
            e.by_rater[cursor[e.rater_of[k]]++] = static_cast<std::uint32_t>(k);
    }
    return e;
}

// Residuals r - prediction for every rating, plus fixed-chunk partial sums
// of e and e^2 so the totals do not depend on the thread count.
struct ResidualSums {
    double sum_e = 0.0;
    double sse = 0.0;
};

constexpr std::size_t kChunks = 64;

ResidualSums residuals(const Encoded& enc, const MfModel& m, unsigned threads,
                       std::vector<double>& out) {
    std::size_t n = enc.value.size();
    std::size_t d = static_cast<std::size_t>(m.factor_dim);
    std::size_t chunk = (n + kChunks - 1) / kChunks;
    double part_e[kChunks] = {};
    double part_sse[kChunks] = {};
    parallel_for(kChunks, threads, [&](std::size_t c) {
        std::size_t lo = c * chunk;
        std::size_t hi = std::min(lo + chunk, n);
        double pe = 0.0, ps = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            std::size_t ni = enc.note_of[k], ri = enc.rater_of[k];
            double p = m.mu + m.note_intercept[ni] + m.rater_intercept[ri];
            for (std::size_t t = 0; t < d; ++t)
                p += m.note_factor[ni * d + t] * m.rater_factor[ri * d + t];
            double e = enc.value[k] - p;
            out[k] = e;
            pe += e;
            ps += e * e;
        }
        part_e[c] = pe;
        part_sse[c] = ps;
    });
    ResidualSums s;
    for (std::size_t c = 0; c < kChunks; ++c) {
        s.sum_e += part_e[c];
        s.sse += part_sse[c];
    }
    return s;
}

double reg_terms(const MfModel& m, const ScorerConfig& cfg) {
    double ssq_i = m.mu * m.mu;
    for (double v : m.note_intercept) ssq_i += v * v;
    for (double v : m.rater_intercept) ssq_i += v * v;
    double ssq_f = 0.0;
    for (double v : m.note_factor) ssq_f += v * v;
    for (double v : m.rater_factor) ssq_f += v * v;
    return cfg.lambda_intercept * ssq_i + cfg.lambda_factor * ssq_f;
}

std::vector<RatingEvent> order_normalized(const std::vector<RatingEvent>& ratings) {
    std::vector<RatingEvent> sorted(ratings);
    std::sort(sorted.begin(), sorted.end(), [](const RatingEvent& a, const RatingEvent& b) {
        if (a.note_id != b.note_id) return a.note_id < b.note_id;
        return a.rater_id < b.rater_id;
    });
    return sorted;
}

} // namespace

MfModel train(const std::vector<RatingEvent>& ratings, const ScorerConfig& cfg) {
    cfg.validate();
    if (ratings.empty()) throw DataError("cannot train on empty ratings");

    auto sorted = order_normalized(ratings);

    MfModel m;
    m.factor_dim = cfg.factor_dim;
    for (const auto& r : sorted) {
        if (m.note_index.emplace(r.note_id, m.note_ids.size()).second)
            m.note_ids.push_back(r.note_id);
        if (m.rater_index.emplace(r.rater_id, m.rater_ids.size()).second)
            m.rater_ids.push_back(r.rater_id);
    }
    // rater ids are not sorted yet (insertion order follows note-major order)
    {
        std::sort(m.rater_ids.begin(), m.rater_ids.end());
        m.rater_index.clear();
        for (std::size_t i = 0; i < m.rater_ids.size(); ++i) m.rater_index[m.rater_ids[i]] = i;
    }

    std::size_t n_notes = m.note_ids.size();
    std::size_t n_raters = m.rater_ids.size();
    std::size_t d = static_cast<std::size_t>(cfg.factor_dim);
    m.note_intercept.assign(n_notes, 0.0);
    m.rater_intercept.assign(n_raters, 0.0);
    m.note_factor.resize(n_notes * d);
    m.rater_factor.resize(n_raters * d);
    {
        // factors seeded uniform(-0.05, 0.05), keyed per entity id so the
        // draw for one entity never depends on which others are present
        auto seed_factors = [&](const std::vector<std::string>& ids, std::vector<double>& out,
                                std::uint64_t tag) {
            for (std::size_t i = 0; i < ids.size(); ++i) {
                Rng rng(Rng::derive(cfg.seed, fnv1a64(ids[i].data(), ids[i].size(), tag)));
                for (std::size_t j = 0; j < d; ++j)
                    out[i * d + j] = -0.05 + 0.1 * rng.next_double();
            }
        };
        seed_factors(m.rater_ids, m.rater_factor, fnv1a64("rater", 5));
        seed_factors(m.note_ids, m.note_factor, fnv1a64("note", 4));
    }

    Encoded enc = encode(sorted, m);
    std::size_t n = enc.value.size();

    std::vector<double> resid(n);
    std::vector<double> g_note_i(n_notes), g_note_f(n_notes * d);
    std::vector<double> g_rater_i(n_raters), g_rater_f(n_raters * d);

    double lr = cfg.learning_rate;
    double prev_loss = std::numeric_limits<double>::quiet_NaN();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto sums = residuals(enc, m, cfg.threads, resid);
        double loss = sums.sse + reg_terms(m, cfg);
        if (!std::isfinite(loss))
            throw NumericError("non-finite training loss at epoch " + std::to_string(epoch));
        m.loss_history.push_back(loss);
        m.epochs_run = epoch + 1;
        if (epoch > 0) {
            double rel = std::fabs(prev_loss - loss) / std::max(std::fabs(prev_loss), 1e-300);
            if (rel < cfg.convergence_tol) break;
        }
        prev_loss = loss;

        // phase A: gradients at frozen parameters (Jacobi step)
        parallel_for(n_notes, cfg.threads, [&](std::size_t ni) {
            double s = 0.0;
            for (std::size_t t = 0; t < d; ++t) g_note_f[ni * d + t] = 0.0;
            for (std::size_t k = enc.note_offset[ni]; k < enc.note_offset[ni + 1]; ++k) {
                double e = resid[k];
                s += e;
                std::size_t ri = enc.rater_of[k];
                for (std::size_t t = 0; t < d; ++t)
                    g_note_f[ni * d + t] += e * m.rater_factor[ri * d + t];
            }
            g_note_i[ni] = s;
        });
        parallel_for(n_raters, cfg.threads, [&](std::size_t ri) {
            double s = 0.0;
            for (std::size_t t = 0; t < d; ++t) g_rater_f[ri * d + t] = 0.0;
            for (std::size_t p = enc.rater_offset[ri]; p < enc.rater_offset[ri + 1]; ++p) {
                std::size_t k = enc.by_rater[p];
                double e = resid[k];
                s += e;
                std::size_t ni = enc.note_of[k];
                for (std::size_t t = 0; t < d; ++t)
                    g_rater_f[ri * d + t] += e * m.note_factor[ni * d + t];
            }
            g_rater_i[ri] = s;
        });

        // phase B: preconditioned updates; each gradient is divided by the
        // parameter's observation count so curvature is degree-independent
        double n_d = static_cast<double>(n);
        m.mu += lr * (sums.sum_e - cfg.lambda_intercept * m.mu) / n_d;
        parallel_for(n_notes, cfg.threads, [&](std::size_t ni) {
            double deg = static_cast<double>(enc.note_offset[ni + 1] - enc.note_offset[ni]);
            m.note_intercept[ni] +=
                lr * (g_note_i[ni] - cfg.lambda_intercept * m.note_intercept[ni]) / deg;
            for (std::size_t t = 0; t < d; ++t)
                m.note_factor[ni * d + t] +=
                    lr * (g_note_f[ni * d + t] - cfg.lambda_factor * m.note_factor[ni * d + t]) /
                    deg;
        });
        parallel_for(n_raters, cfg.threads, [&](std::size_t ri) {
            double deg = static_cast<double>(enc.rater_offset[ri + 1] - enc.rater_offset[ri]);
            m.rater_intercept[ri] +=
                lr * (g_rater_i[ri] - cfg.lambda_intercept * m.rater_intercept[ri]) / deg;
            for (std::size_t t = 0; t < d; ++t)
                m.rater_factor[ri * d + t] +=
                    lr * (g_rater_f[ri * d + t] - cfg.lambda_factor * m.rater_factor[ri * d + t]) /
                    deg;
        });
        lr *= cfg.lr_decay;
    }

    auto sums = residuals(enc, m, cfg.threads, resid);
    m.final_loss = sums.sse + reg_terms(m, cfg);
    if (!std::isfinite(m.final_loss)) throw NumericError("non-finite final loss");
    return m;
}

double model_loss(const MfModel& model, const std::vector<RatingEvent>& ratings,
                  const ScorerConfig& cfg) {
    double sse = 0.0;
    for (const auto& r : ratings) {
        double e = encode_rating(r.level) - model.predict(r.note_id, r.rater_id);
        sse += e * e;
    }
    return sse + reg_terms(model, cfg);
}

ModelGradient model_gradient(const MfModel& m, const std::vector<RatingEvent>& ratings,
                             const ScorerConfig& cfg) {
    ModelGradient g;
    std::size_t d = static_cast<std::size_t>(m.factor_dim);
    g.note_intercept.assign(m.note_intercept.size(), 0.0);
    g.rater_intercept.assign(m.rater_intercept.size(), 0.0);
    g.note_factor.assign(m.note_factor.size(), 0.0);
    g.rater_factor.assign(m.rater_factor.size(), 0.0);
    for (const auto& r : ratings) {
        std::size_t ni = m.note_index.at(r.note_id);
        std::size_t ri = m.rater_index.at(r.rater_id);
        double e = encode_rating(r.level) - m.predict(r.note_id, r.rater_id);
        g.mu -= 2.0 * e;
        g.note_intercept[ni] -= 2.0 * e;
        g.rater_intercept[ri] -= 2.0 * e;
        for (std::size_t t = 0; t < d; ++t) {
            g.note_factor[ni * d + t] -= 2.0 * e * m.rater_factor[ri * d + t];
            g.rater_factor[ri * d + t] -= 2.0 * e * m.note_factor[ni * d + t];
        }
    }
    g.mu += 2.0 * cfg.lambda_intercept * m.mu;
    for (std::size_t i = 0; i < g.note_intercept.size(); ++i)
        g.note_intercept[i] += 2.0 * cfg.lambda_intercept * m.note_intercept[i];
    for (std::size_t i = 0; i < g.rater_intercept.size(); ++i)
        g.rater_intercept[i] += 2.0 * cfg.lambda_intercept * m.rater_intercept[i];
    for (std::size_t i = 0; i < g.note_factor.size(); ++i)
        g.note_factor[i] += 2.0 * cfg.lambda_factor * m.note_factor[i];
    for (std::size_t i = 0; i < g.rater_factor.size(); ++i)
        g.rater_factor[i] += 2.0 * cfg.lambda_factor * m.rater_factor[i];
    return g;
}

std::uint64_t StatusAssignment::count(NoteStatus s) const {
    std::uint64_t c = 0;
    for (const auto& [_, sc] : notes)
        if (sc.status == s) ++c;
    return c;
}

std::vector<std::string> StatusAssignment::notes_with(NoteStatus s) const {
    std::vector<std::string> out;
    for (const auto& [id, sc] : notes)
        if (sc.status == s) out.push_back(id);
    return out;
}

StatusAssignment assign_status(const MfModel& model, const std::vector<RatingEvent>& ratings,
                               const ScorerConfig& cfg) {
    std::unordered_map<std::string, std::uint64_t> n_ratings;
    for (const auto& r : ratings) ++n_ratings[r.note_id];

    StatusAssignment out;
    for (const auto& [note_id, count] : n_ratings) {
        auto it = model.note_index.find(note_id);
        if (it == model.note_index.end())
            throw DataError("note '" + note_id + "' has ratings but no model parameters");
        NoteScore sc;
        sc.n_ratings = count;
        sc.note_intercept = model.note_intercept[it->second];
        sc.abs_factor = model.note_factor_norm(note_id);
        if (count < cfg.min_ratings_for_status) {
            sc.status = NoteStatus::NeedsMoreRatings;
        } else if (sc.note_intercept >= cfg.crh_threshold) {
            sc.status = NoteStatus::CurrentlyRatedHelpful;
        } else if (sc.note_intercept <=
                   cfg.crnh_intercept_threshold - cfg.crnh_factor_slope * sc.abs_factor) {
            sc.status = NoteStatus::CurrentlyRatedNotHelpful;
        } else {
            sc.status = NoteStatus::NeedsMoreRatings;
        }
        out.notes.emplace(note_id, sc);
    }
    return out;
}

StatusAssignment score_corpus(const std::vector<RatingEvent>& ratings,
                              const std::vector<StatusRecord>& status_history,
                              const ScorerConfig& cfg) {
    cfg.validate();
    StatusAssignment out;
    if (!ratings.empty()) {
        auto deduped = dedup_ratings(ratings);
        MfModel model = train(deduped, cfg);
        out = assign_status(model, deduped, cfg);
    }
    for (const auto& rec : status_history) {
        if (!rec.locked_status) continue;
        auto [it, inserted] = out.notes.try_emplace(rec.note_id);
        it->second.status = *rec.locked_status;
        it->second.locked = true;
        if (inserted) {
            it->second.note_intercept = 0.0;
            it->second.abs_factor = 0.0;
            it->second.n_ratings = 0;
        }
    }
    return out;
}

} // namespace notelab::scorer
