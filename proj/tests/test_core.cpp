#include <doctest.h>

#include <vector>

#include "notelab/core.hpp"
#include "notelab/errors.hpp"
#include "notelab/rng.hpp"

using namespace notelab;

TEST_SUITE_BEGIN("core");

TEST_CASE("rating level tokens round-trip") {
    for (auto lvl : {RatingLevel::Helpful, RatingLevel::SomewhatHelpful, RatingLevel::NotHelpful})
        CHECK(parse_rating_level(format_rating_level(lvl)) == lvl);
    CHECK(parse_rating_level("HELPFUL") == RatingLevel::Helpful);
    CHECK(parse_rating_level("SOMEWHAT_HELPFUL") == RatingLevel::SomewhatHelpful);
    CHECK(parse_rating_level("NOT_HELPFUL") == RatingLevel::NotHelpful);
    CHECK_THROWS_AS(parse_rating_level("helpful"), DataError);
    CHECK_THROWS_AS(parse_rating_level(""), DataError);
    CHECK_THROWS_AS(parse_rating_level("HELPFUL "), DataError);
}

TEST_CASE("classification tokens round-trip") {
    CHECK(parse_note_classification("MISINFORMED_OR_POTENTIALLY_MISLEADING") ==
          NoteClassification::Misleading);
    CHECK(parse_note_classification("NOT_MISLEADING") == NoteClassification::NotMisleading);
    for (auto c : {NoteClassification::Misleading, NoteClassification::NotMisleading})
        CHECK(parse_note_classification(format_note_classification(c)) == c);
    CHECK_THROWS_AS(parse_note_classification("MISLEADING"), DataError);
}

TEST_CASE("status tokens and short codes round-trip") {
    for (auto s : {NoteStatus::NeedsMoreRatings, NoteStatus::CurrentlyRatedHelpful,
                   NoteStatus::CurrentlyRatedNotHelpful}) {
        CHECK(parse_note_status(format_note_status(s)) == s);
        CHECK(parse_status_code(status_code(s)) == s);
    }
    CHECK(status_code(NoteStatus::NeedsMoreRatings) == "NMR");
    CHECK(status_code(NoteStatus::CurrentlyRatedHelpful) == "CRH");
    CHECK(status_code(NoteStatus::CurrentlyRatedNotHelpful) == "CRNH");
    CHECK_THROWS_AS(parse_note_status("RATED_HELPFUL"), DataError);
    CHECK_THROWS_AS(parse_status_code("crh"), DataError);
}

TEST_CASE("party tokens round-trip") {
    CHECK(parse_party("D") == Party::Democrat);
    CHECK(parse_party("R") == Party::Republican);
    CHECK(format_party(Party::Democrat) == "D");
    CHECK(format_party(Party::Republican) == "R");
    CHECK_THROWS_AS(parse_party("I"), DataError);
}

namespace {

RatingEvent ev(const char* note, const char* rater, std::int64_t ts, RatingLevel lvl) {
    return RatingEvent{note, rater, ts, lvl};
}

} // namespace

TEST_CASE("dedup keeps the latest rating per (note, rater)") {
    std::vector<RatingEvent> in{
        ev("n1", "r1", 100, RatingLevel::Helpful),
        ev("n1", "r1", 300, RatingLevel::NotHelpful),
        ev("n1", "r1", 200, RatingLevel::SomewhatHelpful),
        ev("n2", "r1", 50, RatingLevel::Helpful),
    };
    auto out = dedup_ratings(in);
    REQUIRE(out.size() == 2);
    CHECK(out[0].note_id == "n1");
    CHECK(out[0].created_at_ms == 300);
    CHECK(out[0].level == RatingLevel::NotHelpful);
    CHECK(out[1].note_id == "n2");
}

TEST_CASE("dedup ties on timestamp keep the later input row") {
    std::vector<RatingEvent> in{
        ev("n1", "r1", 100, RatingLevel::Helpful),
        ev("n1", "r1", 100, RatingLevel::NotHelpful),
    };
    auto out = dedup_ratings(in);
    REQUIRE(out.size() == 1);
    CHECK(out[0].level == RatingLevel::NotHelpful);
}

TEST_CASE("dedup output is sorted by (note_id, rater_id)") {
    std::vector<RatingEvent> in{
        ev("n2", "r1", 1, RatingLevel::Helpful),
        ev("n1", "r2", 2, RatingLevel::Helpful),
        ev("n1", "r1", 3, RatingLevel::Helpful),
        ev("n10", "r1", 4, RatingLevel::Helpful),
    };
    auto out = dedup_ratings(in);
    REQUIRE(out.size() == 4);
    CHECK(out[0].note_id == "n1");
    CHECK(out[0].rater_id == "r1");
    CHECK(out[1].note_id == "n1");
    CHECK(out[1].rater_id == "r2");
    CHECK(out[2].note_id == "n10"); // lexicographic, not numeric
    CHECK(out[3].note_id == "n2");
}

TEST_CASE("dedup is idempotent on random inputs") {
    Rng rng(99);
    std::vector<RatingEvent> in;
    for (int i = 0; i < 500; ++i) {
        RatingEvent e;
        e.note_id = "n" + std::to_string(rng.below(20));
        e.rater_id = "r" + std::to_string(rng.below(30));
        e.created_at_ms = static_cast<std::int64_t>(rng.below(1000));
        e.level = static_cast<RatingLevel>(rng.below(3));
        in.push_back(e);
    }
    auto once = dedup_ratings(in);
    auto twice = dedup_ratings(once);
    CHECK(once == twice);
    for (std::size_t i = 1; i < once.size(); ++i) {
        bool ordered = once[i - 1].note_id < once[i].note_id ||
                       (once[i - 1].note_id == once[i].note_id &&
                        once[i - 1].rater_id < once[i].rater_id);
        CHECK(ordered);
    }
}

TEST_SUITE_END();
