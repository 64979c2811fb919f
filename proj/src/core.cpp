#include "notelab/core.hpp"

#include <algorithm>
#include <unordered_map>

#include "notelab/errors.hpp"

namespace notelab {

RatingLevel parse_rating_level(std::string_view token) {
    if (token == "HELPFUL") return RatingLevel::Helpful;
    if (token == "SOMEWHAT_HELPFUL") return RatingLevel::SomewhatHelpful;
    if (token == "NOT_HELPFUL") return RatingLevel::NotHelpful;
    throw DataError("unknown rating level token '" + std::string(token) + "'");
}

NoteClassification parse_note_classification(std::string_view token) {
    if (token == "MISINFORMED_OR_POTENTIALLY_MISLEADING") return NoteClassification::Misleading;
    if (token == "NOT_MISLEADING") return NoteClassification::NotMisleading;
    throw DataError("unknown note classification token '" + std::string(token) + "'");
}

NoteStatus parse_note_status(std::string_view token) {
    if (token == "NEEDS_MORE_RATINGS") return NoteStatus::NeedsMoreRatings;
    if (token == "CURRENTLY_RATED_HELPFUL") return NoteStatus::CurrentlyRatedHelpful;
    if (token == "CURRENTLY_RATED_NOT_HELPFUL") return NoteStatus::CurrentlyRatedNotHelpful;
    throw DataError("unknown note status token '" + std::string(token) + "'");
}

Party parse_party(std::string_view token) {
    if (token == "D") return Party::Democrat;
    if (token == "R") return Party::Republican;
    throw DataError("unknown party token '" + std::string(token) + "' (expected D or R)");
}

std::string_view format_rating_level(RatingLevel level) {
    switch (level) {
        case RatingLevel::Helpful: return "HELPFUL";
        case RatingLevel::SomewhatHelpful: return "SOMEWHAT_HELPFUL";
        case RatingLevel::NotHelpful: return "NOT_HELPFUL";
    }
    return "HELPFUL";
}

std::string_view format_note_classification(NoteClassification c) {
    switch (c) {
        case NoteClassification::Misleading: return "MISINFORMED_OR_POTENTIALLY_MISLEADING";
        case NoteClassification::NotMisleading: return "NOT_MISLEADING";
    }
    return "NOT_MISLEADING";
}

std::string_view format_note_status(NoteStatus s) {
    switch (s) {
        case NoteStatus::NeedsMoreRatings: return "NEEDS_MORE_RATINGS";
        case NoteStatus::CurrentlyRatedHelpful: return "CURRENTLY_RATED_HELPFUL";
        case NoteStatus::CurrentlyRatedNotHelpful: return "CURRENTLY_RATED_NOT_HELPFUL";
    }
    return "NEEDS_MORE_RATINGS";
}

std::string_view format_party(Party p) {
    return p == Party::Democrat ? "D" : "R";
}

std::string_view status_code(NoteStatus s) {
    switch (s) {
        case NoteStatus::NeedsMoreRatings: return "NMR";
        case NoteStatus::CurrentlyRatedHelpful: return "CRH";
        case NoteStatus::CurrentlyRatedNotHelpful: return "CRNH";
    }
    return "NMR";
}

NoteStatus parse_status_code(std::string_view code) {
    if (code == "NMR") return NoteStatus::NeedsMoreRatings;
    if (code == "CRH") return NoteStatus::CurrentlyRatedHelpful;
    if (code == "CRNH") return NoteStatus::CurrentlyRatedNotHelpful;
    throw DataError("unknown status code '" + std::string(code) + "'");
}

std::vector<RatingEvent> dedup_ratings(const std::vector<RatingEvent>& events) {
    // Winner per pair: largest created_at, ties broken by later input index.
    std::unordered_map<std::string, std::size_t> winner;
    winner.reserve(events.size());
    std::string key;
    for (std::size_t i = 0; i < events.size(); ++i) {
        key.assign(events[i].note_id);
        key.push_back('\t');
        key.append(events[i].rater_id);
        auto [it, inserted] = winner.emplace(key, i);
        if (!inserted && events[i].created_at_ms >= events[it->second].created_at_ms)
            it->second = i;
    }
    std::vector<RatingEvent> out;
    out.reserve(winner.size());
    for (const auto& [k, idx] : winner) out.push_back(events[idx]);
    std::sort(out.begin(), out.end(), [](const RatingEvent& a, const RatingEvent& b) {
        if (a.note_id != b.note_id) return a.note_id < b.note_id;
        return a.rater_id < b.rater_id;
    });
    return out;
}

} // namespace notelab
