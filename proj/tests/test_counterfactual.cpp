#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "notelab/counterfactual.hpp"
#include "notelab/errors.hpp"

using namespace notelab;
using namespace notelab::counterfactual;

TEST_SUITE_BEGIN("counterfactual");

namespace {

RatingEvent ev(const std::string& note, const std::string& rater, std::int64_t ts,
               RatingLevel lvl = RatingLevel::Helpful) {
    return RatingEvent{note, rater, ts, lvl};
}

} // namespace

TEST_CASE("rater activity tracks counts and first timestamps") {
    std::vector<RatingEvent> evs{
        ev("n1", "a", 50), ev("n2", "a", 20), ev("n3", "a", 90),
        ev("n1", "b", 10),
    };
    auto act = rater_activity(evs);
    CHECK(act.by_rater.at("a").count == 3);
    CHECK(act.by_rater.at("a").first_ts == 20);
    CHECK(act.by_rater.at("b").count == 1);
    CHECK(act.by_rater.at("b").first_ts == 10);
}

TEST_CASE("top-k ranks by count, first timestamp, then id") {
    std::vector<RatingEvent> evs;
    // a: 5 ratings from t=100; c: 5 ratings from t=200; b: 3 ratings
    for (int i = 0; i < 5; ++i) evs.push_back(ev("n" + std::to_string(i), "a", 100 + i));
    for (int i = 0; i < 5; ++i) evs.push_back(ev("n" + std::to_string(i), "c", 200 + i));
    for (int i = 0; i < 3; ++i) evs.push_back(ev("n" + std::to_string(i), "b", 10 + i));
    auto act = rater_activity(evs);

    CHECK(top_k_raters(act, 0).empty());
    auto top2 = top_k_raters(act, 2);
    REQUIRE(top2.size() == 2);
    CHECK(top2[0] == "a"); // earlier first rating wins the tie
    CHECK(top2[1] == "c");

    auto all = top_k_raters(act, 10);
    REQUIRE(all.size() == 3);
    CHECK(all[2] == "b");

    // exact tie on count and timestamp falls back to the id
    std::vector<RatingEvent> tied{ev("n1", "x", 5), ev("n1", "w", 5)};
    auto t = top_k_raters(rater_activity(tied), 1);
    CHECK(t[0] == "w");
}

TEST_CASE("remove_raters drops exactly the named raters") {
    std::vector<RatingEvent> evs{ev("n1", "a", 1), ev("n2", "b", 2), ev("n3", "a", 3),
                                 ev("n4", "c", 4)};
    CHECK(remove_raters(evs, {}) == evs);
    CHECK(remove_raters(evs, {"a", "b", "c"}).empty());
    auto out = remove_raters(evs, {"a"});
    REQUIRE(out.size() == 2);
    CHECK(out[0].rater_id == "b");
    CHECK(out[1].rater_id == "c");
}

TEST_CASE("jaccard on id sets") {
    CHECK(jaccard({"a", "b"}, {"a", "b"}) == doctest::Approx(1.0));
    CHECK(jaccard({"a"}, {"b"}) == doctest::Approx(0.0));
    CHECK(jaccard({"a", "b", "c"}, {"b", "c", "d"}) == doctest::Approx(0.5));
    CHECK(jaccard({}, {}) == doctest::Approx(1.0));
    CHECK(jaccard({}, {"a"}) == doctest::Approx(0.0));
}

TEST_CASE("config digest is stable and sensitive") {
    scorer::ScorerConfig a, b;
    CHECK(config_digest(a) == config_digest(b));
    b.crh_threshold = 0.41;
    CHECK(config_digest(a) != config_digest(b));
    CHECK(config_digest(a).size() == 16);
}

TEST_CASE("ladder requires the baseline") {
    std::vector<RatingEvent> evs{ev("n1", "a", 1)};
    scorer::ScorerConfig cfg;
    CHECK_THROWS_AS(run_ladder(evs, {}, {10, 100}, cfg), UsageError);
    CHECK_THROWS_AS(run_ladder(evs, {}, {}, cfg), UsageError);
}

namespace {

struct PivotalCorpus {
    std::vector<RatingEvent> ratings;
    std::vector<std::string> pivots;
    std::string super_rater = "zz_super";
};

// Two blocs of 200 raters over 60 notes (6 bridging, 54 partisan), plus 10
// five-rating pivot notes whose fifth rating comes from one hyperactive rater;
// removing that rater drops the pivots under the rating floor.
PivotalCorpus pivotal_corpus() {
    PivotalCorpus pc;
    const int half = 200;
    std::int64_t ts = 1000;
    for (int n = 0; n < 60; ++n) {
        std::string note = "n" + std::to_string(n);
        bool bridging = n < 6;
        bool pro_a = n % 2 == 0;
        for (int bloc = 0; bloc < 2; ++bloc)
            for (int k = 0; k < 15; ++k) {
                int u = (n * 7 + k * 13) % half + bloc * half;
                RatingLevel lvl = bridging || ((bloc == 0) == pro_a) ? RatingLevel::Helpful
                                                                    : RatingLevel::NotHelpful;
                pc.ratings.push_back(ev(note, "u" + std::to_string(u), ++ts, lvl));
            }
        pc.ratings.push_back(ev(note, pc.super_rater, ++ts));
    }
    for (int p = 0; p < 10; ++p) {
        std::string note = "p" + std::to_string(p);
        pc.pivots.push_back(note);
        for (int u : {2 * p, 2 * p + 1, half + 2 * p, half + 2 * p + 1})
            pc.ratings.push_back(ev(note, "u" + std::to_string(u), ++ts));
        pc.ratings.push_back(ev(note, pc.super_rater, ++ts));
    }
    pc.ratings = dedup_ratings(pc.ratings);
    return pc;
}

} // namespace

TEST_CASE("removing the pivotal rater flips gated notes out of CRH") {
    auto pc = pivotal_corpus();
    scorer::ScorerConfig cfg;
    cfg.seed = 4;

    auto act = rater_activity(pc.ratings);
    auto top1 = top_k_raters(act, 1);
    REQUIRE(top1.size() == 1);
    REQUIRE(top1[0] == pc.super_rater);

    auto report = run_ladder(pc.ratings, {}, {0, 1}, cfg);
    REQUIRE(report.scenarios.size() == 2);
    const auto& base = report.scenarios[0];
    const auto& removed = report.scenarios[1];

    for (auto status : {NoteStatus::NeedsMoreRatings, NoteStatus::CurrentlyRatedHelpful,
                        NoteStatus::CurrentlyRatedNotHelpful}) {
        CHECK(base.by_status.at(status).jaccard == doctest::Approx(1.0));
        CHECK(base.by_status.at(status).gained == 0);
        CHECK(base.by_status.at(status).lost == 0);
    }

    for (const auto& note : pc.pivots) {
        CHECK(base.assignment.notes.at(note).status == NoteStatus::CurrentlyRatedHelpful);
        CHECK(removed.assignment.notes.at(note).status == NoteStatus::NeedsMoreRatings);
    }
    CHECK(removed.by_status.at(NoteStatus::CurrentlyRatedHelpful).jaccard < 1.0);
    CHECK(removed.by_status.at(NoteStatus::CurrentlyRatedHelpful).lost >= 10);
    CHECK(removed.n_ratings_remaining < base.n_ratings_remaining);
}

TEST_CASE("report algebra reconciles with the jaccard values") {
    auto pc = pivotal_corpus();
    scorer::ScorerConfig cfg;
    cfg.seed = 9;
    auto report = run_ladder(pc.ratings, {}, {0, 2, 5}, cfg);

    std::size_t universe = report.scenarios[0].assignment.notes.size();
    std::uint64_t prev_remaining = report.scenarios[0].n_ratings_remaining + 1;
    for (const auto& sc : report.scenarios) {
        CHECK(sc.assignment.notes.size() == universe);
        CHECK(sc.n_ratings_remaining < prev_remaining);
        prev_remaining = sc.n_ratings_remaining;

        std::uint64_t total = 0;
        for (const auto& [status, sum] : sc.by_status) {
            total += sum.n_notes;
            CHECK(sum.retained + sum.gained == sum.n_notes);
            std::uint64_t uni = sum.retained + sum.gained + sum.lost;
            if (uni == 0)
                CHECK(sum.jaccard == doctest::Approx(1.0));
            else
                CHECK(sum.jaccard ==
                      doctest::Approx(static_cast<double>(sum.retained) /
                                      static_cast<double>(uni)));
        }
        CHECK(total == universe);
    }
}

TEST_CASE("ladder is deterministic") {
    auto pc = pivotal_corpus();
    scorer::ScorerConfig cfg;
    cfg.seed = 2;
    auto a = run_ladder(pc.ratings, {}, {0, 3}, cfg);
    auto b = run_ladder(pc.ratings, {}, {0, 3}, cfg);
    REQUIRE(a.scenarios.size() == b.scenarios.size());
    for (std::size_t i = 0; i < a.scenarios.size(); ++i) {
        CHECK(a.scenarios[i].assignment.notes == b.scenarios[i].assignment.notes);
        CHECK(a.scenarios[i].removed_raters == b.scenarios[i].removed_raters);
    }
    CHECK(a.config_digest == b.config_digest);
}

TEST_CASE("locks are cleared by default but can be kept") {
    auto pc = pivotal_corpus();
    // lock an all-helpful note CRNH; scoring alone would never rate it CRNH
    std::vector<StatusRecord> history{
        {"p0", NoteStatus::NeedsMoreRatings, NoteStatus::CurrentlyRatedNotHelpful, 999, {}},
    };
    scorer::ScorerConfig cfg;
    cfg.seed = 6;

    auto cleared = run_ladder(pc.ratings, history, {0}, cfg);
    CHECK(cleared.scenarios[0].assignment.notes.at("p0").status !=
          NoteStatus::CurrentlyRatedNotHelpful);
    CHECK(!cleared.scenarios[0].assignment.notes.at("p0").locked);

    LadderOptions keep;
    keep.clear_locks = false;
    auto kept = run_ladder(pc.ratings, history, {0}, cfg, keep);
    CHECK(kept.scenarios[0].assignment.notes.at("p0").status ==
          NoteStatus::CurrentlyRatedNotHelpful);
    CHECK(kept.scenarios[0].assignment.notes.at("p0").locked);
}

TEST_SUITE_END();
