#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace notelab {

// Shared vocabulary of the whole toolkit. All records are immutable value
// types; ids are opaque strings and never parsed numerically (the public
// release uses 64-bit-overflowing ids and hashed participant ids).

enum class RatingLevel : std::uint8_t { Helpful, SomewhatHelpful, NotHelpful };

enum class NoteClassification : std::uint8_t { Misleading, NotMisleading };

enum class NoteStatus : std::uint8_t {
    NeedsMoreRatings,
    CurrentlyRatedHelpful,
    CurrentlyRatedNotHelpful,
};

enum class Party : std::uint8_t { Democrat, Republican };

struct RatingEvent {
    std::string note_id;
    std::string rater_id;
    std::int64_t created_at_ms = 0;
    RatingLevel level = RatingLevel::Helpful;

    friend bool operator==(const RatingEvent&, const RatingEvent&) = default;
};

struct NoteRecord {
    std::string note_id;
    std::string tweet_id;
    std::string author_participant_id; // the note writer
    NoteClassification classification = NoteClassification::Misleading;
    std::int64_t created_at_ms = 0;

    friend bool operator==(const NoteRecord&, const NoteRecord&) = default;
};

struct StatusRecord {
    std::string note_id;
    NoteStatus current_status = NoteStatus::NeedsMoreRatings;
    std::optional<NoteStatus> locked_status;
    std::optional<std::int64_t> lock_timestamp_ms;
    // Other status-transition timestamps keyed by their column name.
    std::map<std::string, std::int64_t> status_timestamps;

    friend bool operator==(const StatusRecord&, const StatusRecord&) = default;
};

struct PoliticalAnnotation {
    std::string tweet_id;
    std::string tweet_author_id;
    Party party = Party::Democrat;

    friend bool operator==(const PoliticalAnnotation&, const PoliticalAnnotation&) = default;
};

// --- token maps (public data release spellings; case-sensitive) -----------

RatingLevel parse_rating_level(std::string_view token);
NoteClassification parse_note_classification(std::string_view token);
NoteStatus parse_note_status(std::string_view token);
Party parse_party(std::string_view token); // "D" / "R" (annotation table)

std::string_view format_rating_level(RatingLevel level);
std::string_view format_note_classification(NoteClassification c);
std::string_view format_note_status(NoteStatus s);
std::string_view format_party(Party p);

// Short report codes: NMR / CRH / CRNH.
std::string_view status_code(NoteStatus s);
NoteStatus parse_status_code(std::string_view code);

// Keep the latest rating per (note_id, rater_id); ties on created_at broken
// by last occurrence in input order. Output sorted by (note_id, rater_id).
std::vector<RatingEvent> dedup_ratings(const std::vector<RatingEvent>& events);

} // namespace notelab
