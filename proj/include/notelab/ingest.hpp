#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "notelab/core.hpp"

namespace notelab::ingest {

// Tab-separated, '\n' line endings, no quoting/escaping (the public release
// dialect). Unknown columns are ignored; the platform adds columns over time.

struct ParseOptions {
    bool lenient = false; // skip + count malformed rows instead of throwing
};

struct ParseCounters {
    std::size_t rows = 0;      // data rows seen (excluding header)
    std::size_t malformed = 0; // rows skipped in lenient mode
};

// Streaming parsers: constant memory per row, row numbers preserved in
// error messages. The sink is invoked once per valid record.
void parse_ratings_tsv(std::istream& in, const ParseOptions& opt, ParseCounters& counters,
                       const std::function<void(RatingEvent&&)>& sink);
void parse_notes_tsv(std::istream& in, const ParseOptions& opt, ParseCounters& counters,
                     const std::function<void(NoteRecord&&)>& sink);
void parse_status_history_tsv(std::istream& in, const ParseOptions& opt, ParseCounters& counters,
                              const std::function<void(StatusRecord&&)>& sink);

// Vector-returning conveniences (strict by default).
std::vector<RatingEvent> read_ratings_tsv(std::istream& in, const ParseOptions& opt = {},
                                          ParseCounters* counters = nullptr);
std::vector<NoteRecord> read_notes_tsv(std::istream& in, const ParseOptions& opt = {},
                                       ParseCounters* counters = nullptr);
std::vector<StatusRecord> read_status_history_tsv(std::istream& in, const ParseOptions& opt = {},
                                                  ParseCounters* counters = nullptr);

// Annotation table: CSV with header tweet_id,author_id,party (party D/R).
std::vector<PoliticalAnnotation> read_annotations_csv(std::istream& in, const ParseOptions& opt = {},
                                                      ParseCounters* counters = nullptr);

// Writers emitting the exact input schemas (used by synthgen and tests).
void write_ratings_tsv(std::ostream& out, const std::vector<RatingEvent>& events);
void write_notes_tsv(std::ostream& out, const std::vector<NoteRecord>& notes);
void write_status_history_tsv(std::ostream& out, const std::vector<StatusRecord>& records);
void write_annotations_csv(std::ostream& out, const std::vector<PoliticalAnnotation>& annotations);

// Strip lock fields so every note is eligible for re-scoring; all other
// fields (including non-lock timestamps) are preserved.
std::vector<StatusRecord> clear_locks(const std::vector<StatusRecord>& records);

struct AnnotatedRating {
    RatingEvent rating;
    NoteClassification note_classification = NoteClassification::Misleading;
    std::string tweet_author_id;
    Party party = Party::Democrat;

    friend bool operator==(const AnnotatedRating&, const AnnotatedRating&) = default;
};

struct JoinResult {
    std::vector<AnnotatedRating> annotated; // sorted by (note_id, rater_id)
    std::size_t dropped_unannotated = 0;    // rating's tweet has no annotation
    std::size_t dropped_missing_note = 0;   // rating's note has no NoteRecord
};

// One AnnotatedRating per rating whose note's tweet author is annotated.
// Throws DataError if an author maps to both parties.
JoinResult join_political(const std::vector<RatingEvent>& ratings,
                          const std::vector<NoteRecord>& notes,
                          const std::vector<PoliticalAnnotation>& annotations);

struct CorpusStats {
    std::uint64_t n_notes = 0;
    std::uint64_t n_raters = 0;
    std::uint64_t n_ratings = 0;
    std::optional<std::int64_t> time_min_ms;
    std::optional<std::int64_t> time_max_ms;
};

CorpusStats corpus_stats(const std::vector<RatingEvent>& ratings,
                         const std::vector<NoteRecord>& notes);

} // namespace notelab::ingest
