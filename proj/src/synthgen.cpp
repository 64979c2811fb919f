#include "notelab/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "notelab/concentration.hpp"
#include "notelab/counterfactual.hpp"
#include "notelab/errors.hpp"
#include "notelab/ingest.hpp"
#include "notelab/polarization.hpp"
#include "notelab/rng.hpp"

namespace notelab::synthgen {

namespace fs = std::filesystem;

std::string_view format_note_type(NoteType t) {
    switch (t) {
        case NoteType::Bridging: return "BRIDGING";
        case NoteType::PartisanDem: return "PARTISAN_D";
        case NoteType::PartisanRep: return "PARTISAN_R";
    }
    throw NumericError("invalid note type");
}

NoteType parse_note_type(std::string_view token) {
    if (token == "BRIDGING") return NoteType::Bridging;
    if (token == "PARTISAN_D") return NoteType::PartisanDem;
    if (token == "PARTISAN_R") return NoteType::PartisanRep;
    throw DataError("unknown note type '" + std::string(token) + "'");
}

void SynthConfig::validate() const {
    auto fail = [](const char* msg) { throw UsageError(std::string("synth config: ") + msg); };
    if (n_raters == 0) fail("n_raters must be positive");
    if (n_notes == 0) fail("n_notes must be positive");
    if (n_authors == 0) fail("n_authors must be positive");
    if (!(activity_alpha > 1.0)) fail("activity_alpha must exceed 1");
    if (activity_xmin == 0) fail("activity_xmin must be positive");
    if (leaning_mix.sigma1 < 0.0) fail("leaning_mix sigma_1 must be nonnegative");
    if (leaning_mix.sigma2 < 0.0) fail("leaning_mix sigma_2 must be nonnegative");
    if (leaning_mix.w1 < 0.0 || leaning_mix.w2 < 0.0) fail("leaning_mix weights must be nonnegative");
    if (std::abs(leaning_mix.w1 + leaning_mix.w2 - 1.0) > 1e-9)
        fail("leaning_mix weights must sum to 1");
    if (polarization_by_activity < 0.0) fail("polarization_by_activity must be nonnegative");
    if (selectivity_zipf_s < 0.0) fail("selectivity_zipf_s must be nonnegative");
    if (frac_bridging_notes < 0.0 || frac_bridging_notes > 1.0)
        fail("frac_bridging_notes must lie in [0,1]");
    if (noise < 0.0 || noise >= 0.5) fail("noise must lie in [0, 0.5)");
}

namespace {

constexpr std::int64_t kNoteBaseTs = 1577836800000;   // 2020-01-01 UTC
constexpr std::int64_t kRatingBaseTs = 1609459200000; // 2021-01-01 UTC
constexpr std::uint64_t kActivityStream = 0xAC7;
constexpr std::uint64_t kLeaningStream = 0x1EA;
constexpr std::uint64_t kNoteStream = 0x407E;
constexpr std::uint64_t kRaterStreamBase = 0x100000;

std::string padid(char prefix, std::uint64_t idx, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%c%0*llu", prefix, width,
                  static_cast<unsigned long long>(idx));
    return buf;
}

} // namespace

SynthCorpus generate(const SynthConfig& cfg) {
    cfg.validate();
    SynthCorpus sc;

    const std::size_t n_raters = cfg.n_raters;
    const std::size_t n_notes = cfg.n_notes;
    const std::size_t n_authors = cfg.n_authors;

    std::vector<std::string> author_id(n_authors);
    std::vector<Party> author_party(n_authors);
    std::vector<std::uint32_t> dem_authors, rep_authors;
    for (std::size_t a = 0; a < n_authors; ++a) {
        author_id[a] = padid('a', a, 5);
        author_party[a] = a % 2 == 0 ? Party::Democrat : Party::Republican;
        (author_party[a] == Party::Democrat ? dem_authors : rep_authors)
            .push_back(static_cast<std::uint32_t>(a));
        sc.truth.author_party[author_id[a]] = author_party[a];
    }

    std::vector<std::string> rater_id(n_raters);
    for (std::size_t u = 0; u < n_raters; ++u) rater_id[u] = padid('u', u, 6);

    concentration::DiscretePowerLaw activity_law{cfg.activity_alpha, cfg.activity_xmin};
    Rng act_rng(Rng::derive(cfg.seed, kActivityStream));
    std::vector<std::uint64_t> activity(n_raters);
    for (std::size_t u = 0; u < n_raters; ++u)
        activity[u] = std::min<std::uint64_t>(activity_law.sample(act_rng), n_notes);

    // Leaning extremity grows with the activity decile; tiny corpora all sit
    // in decile 1.
    std::vector<int> decile(n_raters, 1);
    if (n_raters >= 10) {
        concentration::ActivityCounts counts;
        std::set<std::string> everyone;
        for (std::size_t u = 0; u < n_raters; ++u) {
            counts.by_rater[rater_id[u]] = activity[u];
            everyone.insert(rater_id[u]);
        }
        auto part = polarization::decile_partition(counts, everyone);
        for (std::size_t u = 0; u < n_raters; ++u) decile[u] = part.at(rater_id[u]);
    }

    Rng lean_rng(Rng::derive(cfg.seed, kLeaningStream));
    std::vector<double> leaning(n_raters);
    for (std::size_t u = 0; u < n_raters; ++u) {
        const auto& mix = cfg.leaning_mix;
        double base = lean_rng.next_double() < mix.w1 ? mix.mu1 + mix.sigma1 * lean_rng.normal()
                                                      : mix.mu2 + mix.sigma2 * lean_rng.normal();
        double scaled = base * (1.0 + cfg.polarization_by_activity * (decile[u] - 1));
        leaning[u] = std::clamp(scaled, -1.0, 1.0);
        sc.truth.rater_leaning[rater_id[u]] = leaning[u];
    }

    Rng note_rng(Rng::derive(cfg.seed, kNoteStream));
    const std::size_t n_writers = std::max<std::size_t>(1, n_notes / 4);
    std::vector<std::string> note_id(n_notes);
    std::vector<std::vector<std::uint32_t>> notes_of_author(n_authors);
    std::vector<bool> bridging(n_notes), misleading(n_notes);
    std::vector<double> party_sign(n_notes); // DEM tweets -1, REP tweets +1
    for (std::size_t i = 0; i < n_notes; ++i) {
        note_id[i] = padid('n', i, 6);
        double draw = note_rng.next_double();
        NoteType type;
        if (draw < cfg.frac_bridging_notes)
            type = NoteType::Bridging;
        else
            type = note_rng.next_double() < 0.5 ? NoteType::PartisanDem : NoteType::PartisanRep;

        std::uint32_t author;
        NoteClassification cls;
        if (type == NoteType::Bridging) {
            author = static_cast<std::uint32_t>(note_rng.below(n_authors));
            cls = note_rng.next_double() < 0.5 ? NoteClassification::Misleading
                                               : NoteClassification::NotMisleading;
        } else {
            // A partisan note either flags the opposing party's tweet as
            // misleading or defends its own party's tweet.
            Party flagged = type == NoteType::PartisanDem ? Party::Republican : Party::Democrat;
            bool flag_variant = note_rng.next_double() < 0.5;
            Party want = flag_variant ? flagged
                                      : (flagged == Party::Republican ? Party::Democrat
                                                                      : Party::Republican);
            const auto& pool = want == Party::Democrat ? dem_authors : rep_authors;
            const auto& alt = want == Party::Democrat ? rep_authors : dem_authors;
            if (pool.empty()) {
                const auto& other = alt;
                author = other[note_rng.below(other.size())];
                flag_variant = !flag_variant;
            } else {
                author = pool[note_rng.below(pool.size())];
            }
            cls = flag_variant ? NoteClassification::Misleading
                               : NoteClassification::NotMisleading;
        }

        bridging[i] = type == NoteType::Bridging;
        misleading[i] = cls == NoteClassification::Misleading;
        party_sign[i] = author_party[author] == Party::Republican ? 1.0 : -1.0;
        notes_of_author[author].push_back(static_cast<std::uint32_t>(i));

        std::string tweet = padid('t', i, 6);
        std::string writer = padid('w', note_rng.below(n_writers), 5);
        std::int64_t created = kNoteBaseTs + static_cast<std::int64_t>(i);
        sc.corpus.notes.push_back({note_id[i], tweet, writer, cls, created});
        sc.corpus.annotations.push_back({tweet, author_id[author], author_party[author]});
        sc.corpus.status.push_back({note_id[i],
                                    NoteStatus::NeedsMoreRatings,
                                    std::nullopt,
                                    std::nullopt,
                                    {{"createdAtMillis", created},
                                     {"timestampMillisOfCurrentStatus", created}}});
        sc.truth.note_type[note_id[i]] = type;
    }

    std::vector<double> zipf_cum(n_authors);
    double zipf_total = 0.0;
    for (std::size_t j = 0; j < n_authors; ++j) {
        zipf_total += std::pow(static_cast<double>(j + 1), -cfg.selectivity_zipf_s);
        zipf_cum[j] = zipf_total;
    }

    // Each rater is an independent stream keyed by (seed, rater index), so
    // per-rater generation could run in parallel without changing output.
    std::vector<RatingEvent> ratings;
    for (std::size_t u = 0; u < n_raters; ++u) {
        Rng rng(Rng::derive(cfg.seed, kRaterStreamBase + u));
        const std::size_t rot = rng.below(n_authors);
        std::unordered_set<std::uint32_t> rated;
        for (std::uint64_t k = 0; k < activity[u]; ++k) {
            std::uint32_t pick = std::numeric_limits<std::uint32_t>::max();
            for (int attempt = 0; attempt < 64; ++attempt) {
                double x = rng.next_double() * zipf_total;
                std::size_t rank = static_cast<std::size_t>(
                    std::lower_bound(zipf_cum.begin(), zipf_cum.end(), x) - zipf_cum.begin());
                if (rank >= n_authors) rank = n_authors - 1;
                const auto& list = notes_of_author[(rot + rank) % n_authors];
                if (list.empty()) continue;
                std::uint32_t cand = list[rng.below(list.size())];
                if (rated.contains(cand)) continue;
                pick = cand;
                break;
            }
            if (pick == std::numeric_limits<std::uint32_t>::max()) {
                std::size_t start = rng.below(n_notes);
                for (std::size_t j = 0; j < n_notes; ++j) {
                    auto cand = static_cast<std::uint32_t>((start + j) % n_notes);
                    if (!rated.contains(cand)) {
                        pick = cand;
                        break;
                    }
                }
            }
            rated.insert(pick);

            bool helpful;
            if (bridging[pick]) {
                helpful = rng.next_double() < 0.9;
            } else {
                double pro_p = std::clamp(0.5 * (1.0 + leaning[u] * party_sign[pick]), 0.0, 1.0);
                bool pro = rng.next_double() < pro_p;
                helpful = misleading[pick] ? !pro : pro;
                if (rng.next_double() < cfg.noise) helpful = !helpful;
            }
            std::int64_t ts = kRatingBaseTs +
                              static_cast<std::int64_t>(u) * static_cast<std::int64_t>(n_notes + 1) +
                              static_cast<std::int64_t>(k);
            ratings.push_back({note_id[pick], rater_id[u], ts,
                               helpful ? RatingLevel::Helpful : RatingLevel::NotHelpful});
        }
    }
    sc.corpus.ratings = dedup_ratings(std::move(ratings));
    return sc;
}

SynthCorpus plant_pivotal_rater(SynthCorpus sc, std::size_t n_pivotal,
                                const scorer::ScorerConfig& scorer_cfg) {
    if (n_pivotal == 0) return sc;
    scorer_cfg.validate();
    const std::string super_id = "u-super";
    const auto& ratings = sc.corpus.ratings;

    struct Tally {
        std::uint64_t n = 0;
        std::uint64_t helpful = 0;
    };
    std::map<std::string, Tally> tally;
    std::int64_t earliest_ts = kRatingBaseTs;
    for (const auto& r : ratings) {
        auto& t = tally[r.note_id];
        ++t.n;
        if (r.level == RatingLevel::Helpful) ++t.helpful;
        earliest_ts = std::min(earliest_ts, r.created_at_ms);
    }

    const std::uint64_t gate = scorer_cfg.min_ratings_for_status;
    auto is_bridging = [&](const std::string& note) {
        auto it = sc.truth.note_type.find(note);
        return it != sc.truth.note_type.end() && it->second == NoteType::Bridging;
    };

    // Gate candidates sit one rating below the status floor; all-helpful ones
    // clear the CRH threshold most reliably once the super-rater tops them up.
    std::vector<std::string> candidates, partial;
    for (const auto& [note, t] : tally) {
        if (t.n + 1 != gate || !is_bridging(note)) continue;
        (t.helpful == t.n ? candidates : partial).push_back(note);
    }
    candidates.insert(candidates.end(), partial.begin(), partial.end());
    if (candidates.size() < n_pivotal)
        throw DataError("cannot plant pivotal rater: only " +
                        std::to_string(candidates.size()) +
                        " bridging notes sit one rating below the status floor (need " +
                        std::to_string(n_pivotal) + ")");

    std::uint64_t max_count = 0;
    for (const auto& [id, e] : counterfactual::rater_activity(ratings).by_rater)
        max_count = std::max(max_count, e.count);

    auto base_assign = scorer::score_corpus(ratings, sc.corpus.status, scorer_cfg);
    auto base_crh = base_assign.notes_with(NoteStatus::CurrentlyRatedHelpful);

    // Padding ratings lift the super-rater to top-1 activity without moving
    // any note: each padded note keeps its majority level. Notes whose
    // majority-level nudge points away from the CRH boundary pad first, then
    // boundary-ward notes by decreasing distance, so the padding perturbs the
    // verified CRH set as little as possible.
    struct Pad {
        std::string note;
        RatingLevel level;
        double safety;
        std::uint64_t n;
    };
    std::vector<Pad> pads;
    for (const auto& [note, t] : tally) {
        if (t.n < gate) continue;
        auto it = base_assign.notes.find(note);
        if (it == base_assign.notes.end()) continue;
        auto lvl = 2 * t.helpful >= t.n ? RatingLevel::Helpful : RatingLevel::NotHelpful;
        bool crh = it->second.status == NoteStatus::CurrentlyRatedHelpful;
        double margin = std::fabs(it->second.note_intercept - scorer_cfg.crh_threshold);
        bool boundary_ward = (lvl == RatingLevel::Helpful) != crh;
        pads.push_back({note, lvl, boundary_ward ? margin : 2.0 + margin, t.n});
    }
    std::sort(pads.begin(), pads.end(), [](const Pad& a, const Pad& b) {
        if (a.safety != b.safety) return a.safety > b.safety;
        if (a.n != b.n) return a.n > b.n;
        return a.note < b.note;
    });
    std::vector<std::pair<std::string, RatingLevel>> pool;
    pool.reserve(pads.size());
    for (auto& p : pads) pool.emplace_back(std::move(p.note), p.level);

    // Borderline notes whose CRH side flips from the super-rater's presence
    // alone get a counteracting rating on the next attempt; window rotation
    // cannot fix those.
    std::map<std::string, RatingLevel> corrections;

    for (std::size_t attempt = 0; attempt < 100; ++attempt) {
        if (attempt + n_pivotal > candidates.size()) break;
        std::vector<std::string> targets(candidates.begin() + attempt,
                                         candidates.begin() + attempt + n_pivotal);
        std::sort(targets.begin(), targets.end());

        std::vector<RatingEvent> extra;
        std::int64_t ts = earliest_ts - 1000000;
        for (const auto& note : targets)
            extra.push_back({note, super_id, ts++, RatingLevel::Helpful});
        for (const auto& [note, lvl] : corrections)
            if (!std::binary_search(targets.begin(), targets.end(), note))
                extra.push_back({note, super_id, ts++, lvl});
        const std::size_t want = static_cast<std::size_t>(max_count) + 1;
        for (std::size_t j = 0; j < pool.size() && extra.size() < want; ++j) {
            const auto& [note, lvl] = pool[(attempt + j) % pool.size()];
            if (corrections.count(note)) continue;
            extra.push_back({note, super_id, ts++, lvl});
        }
        if (extra.size() < want) break; // not enough notes to out-rate everyone

        auto with = ratings;
        with.insert(with.end(), extra.begin(), extra.end());
        with = dedup_ratings(std::move(with));

        auto top1 = counterfactual::top_k_raters(counterfactual::rater_activity(with), 1);
        if (top1.size() != 1 || top1[0] != super_id) continue;

        auto with_assign = scorer::score_corpus(with, sc.corpus.status, scorer_cfg);
        auto with_crh = with_assign.notes_with(NoteStatus::CurrentlyRatedHelpful);

        std::vector<std::string> expected;
        std::set_union(base_crh.begin(), base_crh.end(), targets.begin(), targets.end(),
                       std::back_inserter(expected));
        bool disjoint = expected.size() == base_crh.size() + targets.size();
        if (!disjoint || with_crh != expected) {
            std::set<std::string> exp(expected.begin(), expected.end());
            std::set<std::string> got(with_crh.begin(), with_crh.end());
            for (const auto& note : with_crh)
                if (!exp.count(note)) corrections[note] = RatingLevel::NotHelpful;
            for (const auto& note : expected)
                if (!got.count(note) &&
                    !std::binary_search(targets.begin(), targets.end(), note))
                    corrections[note] = RatingLevel::Helpful;
            continue;
        }

        sc.corpus.ratings = std::move(with);
        sc.truth.rater_leaning[super_id] = 0.0;
        sc.truth.pivotal_notes = std::move(targets);
        sc.truth.super_rater = super_id;
        return sc;
    }
    throw DataError("cannot plant pivotal rater within 100 attempts");
}

namespace {

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write '" + p.string() + "'");
    return out;
}

} // namespace

void write_synth(const fs::path& dir, const SynthCorpus& sc) {
    fs::create_directories(dir);
    {
        auto out = open_out(dir / "ratings-00000.tsv");
        ingest::write_ratings_tsv(out, sc.corpus.ratings);
    }
    {
        auto out = open_out(dir / "notes-00000.tsv");
        ingest::write_notes_tsv(out, sc.corpus.notes);
    }
    {
        auto out = open_out(dir / "noteStatusHistory-00000.tsv");
        ingest::write_status_history_tsv(out, sc.corpus.status);
    }
    {
        auto out = open_out(dir / "annotations.csv");
        ingest::write_annotations_csv(out, sc.corpus.annotations);
    }
    nlohmann::ordered_json j;
    j["rater_leaning"] = sc.truth.rater_leaning;
    auto& types = j["note_type"] = nlohmann::ordered_json::object();
    for (const auto& [note, t] : sc.truth.note_type) types[note] = format_note_type(t);
    auto& parties = j["author_party"] = nlohmann::ordered_json::object();
    for (const auto& [author, p] : sc.truth.author_party) parties[author] = format_party(p);
    j["pivotal_notes"] = sc.truth.pivotal_notes;
    j["super_rater"] = sc.truth.super_rater;
    auto out = open_out(dir / "ground_truth.json");
    out << j.dump(2) << '\n';
}

GroundTruth read_ground_truth(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot read '" + file.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid ground truth json: " + std::string(e.what()));
    }
    GroundTruth gt;
    for (const auto& [k, v] : j.at("rater_leaning").items()) gt.rater_leaning[k] = v.get<double>();
    for (const auto& [k, v] : j.at("note_type").items())
        gt.note_type[k] = parse_note_type(v.get<std::string>());
    for (const auto& [k, v] : j.at("author_party").items())
        gt.author_party[k] = parse_party(v.get<std::string>());
    for (const auto& v : j.at("pivotal_notes")) gt.pivotal_notes.push_back(v.get<std::string>());
    gt.super_rater = j.at("super_rater").get<std::string>();
    return gt;
}

} // namespace notelab::synthgen
