#pragma once

#include <optional>
#include <string>
#include <vector>

#include "notelab/core.hpp"
#include "notelab/ingest.hpp"

namespace notelab::cache {

struct Corpus {
    std::vector<NoteRecord> notes;
    std::vector<RatingEvent> ratings; // deduplicated, sorted by (note_id, rater_id)
    std::vector<StatusRecord> status;
    std::vector<PoliticalAnnotation> annotations;
};

// Binary corpus cache: ratings.bin / notes.bin / status.bin / annotations.bin
// plus corpus_stats.json, all little-endian with a magic+version header.
void write_cache(const std::string& dir, const Corpus& corpus);
Corpus read_cache(const std::string& dir);

bool cache_present(const std::string& dir);

// Loads a corpus directory: the binary cache when ratings.bin exists,
// otherwise public-format TSV files (ratings*.tsv, notes*.tsv,
// noteStatusHistory*.tsv / status*.tsv, annotations.csv). Ratings are
// deduplicated either way.
Corpus load_corpus(const std::string& dir, bool lenient = false,
                   ingest::ParseCounters* counters = nullptr);

} // namespace notelab::cache
