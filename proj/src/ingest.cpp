#include "notelab/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string_view>

#include "notelab/errors.hpp"

namespace notelab::ingest {

namespace {

void split_fields(std::string_view line, char sep, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
}

// Header lookup: every required column must be present.
struct Header {
    std::unordered_map<std::string, std::size_t> index;

    std::size_t require(const std::string& name) const {
        auto it = index.find(name);
        if (it == index.end()) throw DataError("missing column '" + name + "'");
        return it->second;
    }
    std::optional<std::size_t> find(const std::string& name) const {
        auto it = index.find(name);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
};

Header read_header(std::istream& in, char sep) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty input: no header line");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string_view> fields;
    split_fields(line, sep, fields);
    Header h;
    for (std::size_t i = 0; i < fields.size(); ++i) h.index.emplace(std::string(fields[i]), i);
    return h;
}

std::int64_t parse_ms(std::string_view field) {
    std::int64_t v = 0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw DataError("bad integer timestamp");
    if (v < 0) throw DataError("negative timestamp");
    return v;
}

std::string_view field_at(const std::vector<std::string_view>& fields, std::size_t idx) {
    if (idx >= fields.size()) throw DataError("row has too few fields");
    return fields[idx];
}

bool lock_field_absent(std::string_view v) {
    return v.empty() || v == "-1";
}

// Shared row loop: header first, then one sink call per row; malformed rows
// are fatal in strict mode, counted and skipped in lenient mode.
template <typename RowFn>
void parse_rows(std::istream& in, char sep, const ParseOptions& opt, ParseCounters& counters,
                RowFn&& row_fn) {
    std::string line;
    std::vector<std::string_view> fields;
    std::size_t line_no = 1; // header was line 1
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++counters.rows;
        split_fields(line, sep, fields);
        try {
            row_fn(fields);
        } catch (const DataError& e) {
            if (!opt.lenient)
                throw DataError("malformed row at line " + std::to_string(line_no) + ": " + e.what());
            ++counters.malformed;
        }
    }
}

} // namespace

void parse_ratings_tsv(std::istream& in, const ParseOptions& opt, ParseCounters& counters,
                       const std::function<void(RatingEvent&&)>& sink) {
    const Header h = read_header(in, '\t');
    const std::size_t c_note = h.require("noteId");
    const std::size_t c_rater = h.require("raterParticipantId");
    const std::size_t c_ts = h.require("createdAtMillis");
    const std::size_t c_level = h.require("helpfulnessLevel");
    parse_rows(in, '\t', opt, counters, [&](const std::vector<std::string_view>& f) {
        RatingEvent ev;
        ev.note_id = std::string(field_at(f, c_note));
        ev.rater_id = std::string(field_at(f, c_rater));
        if (ev.note_id.empty()) throw DataError("empty noteId");
        if (ev.rater_id.empty()) throw DataError("empty raterParticipantId");
        ev.created_at_ms = parse_ms(field_at(f, c_ts));
        ev.level = parse_rating_level(field_at(f, c_level));
        sink(std::move(ev));
    });
}

void parse_notes_tsv(std::istream& in, const ParseOptions& opt, ParseCounters& counters,
                     const std::function<void(NoteRecord&&)>& sink) {
    const Header h = read_header(in, '\t');
    const std::size_t c_note = h.require("noteId");
    const std::size_t c_author = h.require("noteAuthorParticipantId");
    const std::size_t c_tweet = h.require("tweetId");
    const std::size_t c_class = h.require("classification");
    const std::size_t c_ts = h.require("createdAtMillis");
    parse_rows(in, '\t', opt, counters, [&](const std::vector<std::string_view>& f) {
        NoteRecord rec;
        rec.note_id = std::string(field_at(f, c_note));
        if (rec.note_id.empty()) throw DataError("empty noteId");
        rec.author_participant_id = std::string(field_at(f, c_author));
        rec.tweet_id = std::string(field_at(f, c_tweet));
        rec.classification = parse_note_classification(field_at(f, c_class));
        rec.created_at_ms = parse_ms(field_at(f, c_ts));
        sink(std::move(rec));
    });
}

void parse_status_history_tsv(std::istream& in, const ParseOptions& opt, ParseCounters& counters,
                              const std::function<void(StatusRecord&&)>& sink) {
    const Header h = read_header(in, '\t');
    const std::size_t c_note = h.require("noteId");
    const std::size_t c_status = h.require("currentStatus");
    const std::size_t c_lock = h.require("lockedStatus");
    const std::size_t c_lock_ts = h.require("timestampMillisOfStatusLock");
    const auto c_created = h.find("createdAtMillis");
    const auto c_status_ts = h.find("timestampMillisOfCurrentStatus");
    parse_rows(in, '\t', opt, counters, [&](const std::vector<std::string_view>& f) {
        StatusRecord rec;
        rec.note_id = std::string(field_at(f, c_note));
        if (rec.note_id.empty()) throw DataError("empty noteId");
        rec.current_status = parse_note_status(field_at(f, c_status));
        const auto lock = field_at(f, c_lock);
        if (!lock_field_absent(lock)) rec.locked_status = parse_note_status(lock);
        const auto lock_ts = field_at(f, c_lock_ts);
        if (!lock_field_absent(lock_ts)) rec.lock_timestamp_ms = parse_ms(lock_ts);
        for (const auto& [name, idx] : {std::pair{"createdAtMillis", c_created},
                                        std::pair{"timestampMillisOfCurrentStatus", c_status_ts}}) {
            if (idx && *idx < f.size() && !lock_field_absent(f[*idx]))
                rec.status_timestamps.emplace(name, parse_ms(f[*idx]));
        }
        sink(std::move(rec));
    });
}

std::vector<RatingEvent> read_ratings_tsv(std::istream& in, const ParseOptions& opt,
                                          ParseCounters* counters) {
    std::vector<RatingEvent> out;
    ParseCounters local;
    parse_ratings_tsv(in, opt, local, [&](RatingEvent&& ev) { out.push_back(std::move(ev)); });
    if (counters) *counters = local;
    return out;
}

std::vector<NoteRecord> read_notes_tsv(std::istream& in, const ParseOptions& opt,
                                       ParseCounters* counters) {
    std::vector<NoteRecord> out;
    ParseCounters local;
    parse_notes_tsv(in, opt, local, [&](NoteRecord&& rec) { out.push_back(std::move(rec)); });
    if (counters) *counters = local;
    return out;
}

std::vector<StatusRecord> read_status_history_tsv(std::istream& in, const ParseOptions& opt,
                                                  ParseCounters* counters) {
    std::vector<StatusRecord> out;
    std::set<std::string> seen;
    ParseCounters local;
    parse_status_history_tsv(in, opt, local, [&](StatusRecord&& rec) {
        if (!seen.insert(rec.note_id).second)
            throw DataError("duplicate noteId '" + rec.note_id + "' in status history");
        out.push_back(std::move(rec));
    });
    if (counters) *counters = local;
    return out;
}

std::vector<PoliticalAnnotation> read_annotations_csv(std::istream& in, const ParseOptions& opt,
                                                      ParseCounters* counters) {
    const Header h = read_header(in, ',');
    const std::size_t c_tweet = h.require("tweet_id");
    const std::size_t c_author = h.require("author_id");
    const std::size_t c_party = h.require("party");
    std::vector<PoliticalAnnotation> out;
    ParseCounters local;
    parse_rows(in, ',', opt, local, [&](const std::vector<std::string_view>& f) {
        PoliticalAnnotation a;
        a.tweet_id = std::string(field_at(f, c_tweet));
        a.tweet_author_id = std::string(field_at(f, c_author));
        if (a.tweet_id.empty() || a.tweet_author_id.empty()) throw DataError("empty id field");
        a.party = parse_party(field_at(f, c_party));
        out.push_back(std::move(a));
    });
    if (counters) *counters = local;
    return out;
}

void write_ratings_tsv(std::ostream& out, const std::vector<RatingEvent>& events) {
    out << "noteId\traterParticipantId\tcreatedAtMillis\thelpfulnessLevel\n";
    for (const auto& ev : events) {
        out << ev.note_id << '\t' << ev.rater_id << '\t' << ev.created_at_ms << '\t'
            << format_rating_level(ev.level) << '\n';
    }
}

void write_notes_tsv(std::ostream& out, const std::vector<NoteRecord>& notes) {
    out << "noteId\tnoteAuthorParticipantId\ttweetId\tclassification\tcreatedAtMillis\n";
    for (const auto& n : notes) {
        out << n.note_id << '\t' << n.author_participant_id << '\t' << n.tweet_id << '\t'
            << format_note_classification(n.classification) << '\t' << n.created_at_ms << '\n';
    }
}

void write_status_history_tsv(std::ostream& out, const std::vector<StatusRecord>& records) {
    out << "noteId\tcreatedAtMillis\ttimestampMillisOfCurrentStatus\tcurrentStatus"
           "\tlockedStatus\ttimestampMillisOfStatusLock\n";
    for (const auto& r : records) {
        const auto created = r.status_timestamps.find("createdAtMillis");
        const auto status_ts = r.status_timestamps.find("timestampMillisOfCurrentStatus");
        out << r.note_id << '\t';
        if (created != r.status_timestamps.end()) out << created->second;
        out << '\t';
        if (status_ts != r.status_timestamps.end()) out << status_ts->second;
        out << '\t' << format_note_status(r.current_status) << '\t';
        if (r.locked_status) out << format_note_status(*r.locked_status);
        out << '\t';
        if (r.lock_timestamp_ms)
            out << *r.lock_timestamp_ms;
        else
            out << "-1";
        out << '\n';
    }
}

void write_annotations_csv(std::ostream& out, const std::vector<PoliticalAnnotation>& annotations) {
    out << "tweet_id,author_id,party\n";
    for (const auto& a : annotations)
        out << a.tweet_id << ',' << a.tweet_author_id << ',' << format_party(a.party) << '\n';
}

std::vector<StatusRecord> clear_locks(const std::vector<StatusRecord>& records) {
    std::vector<StatusRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        StatusRecord c = r;
        c.locked_status.reset();
        c.lock_timestamp_ms.reset();
        out.push_back(std::move(c));
    }
    return out;
}

JoinResult join_political(const std::vector<RatingEvent>& ratings,
                          const std::vector<NoteRecord>& notes,
                          const std::vector<PoliticalAnnotation>& annotations) {
    std::unordered_map<std::string, Party> author_party;
    std::unordered_map<std::string, const PoliticalAnnotation*> by_tweet;
    author_party.reserve(annotations.size());
    by_tweet.reserve(annotations.size());
    for (const auto& a : annotations) {
        auto [it, inserted] = author_party.emplace(a.tweet_author_id, a.party);
        if (!inserted && it->second != a.party)
            throw DataError("conflicting annotation for author '" + a.tweet_author_id + "'");
        auto [jt, fresh] = by_tweet.emplace(a.tweet_id, &a);
        if (!fresh && jt->second->tweet_author_id != a.tweet_author_id)
            throw DataError("conflicting author for tweet '" + a.tweet_id + "'");
    }
    std::unordered_map<std::string, const NoteRecord*> by_note;
    by_note.reserve(notes.size());
    for (const auto& n : notes) {
        auto [it, inserted] = by_note.emplace(n.note_id, &n);
        if (!inserted) throw DataError("duplicate noteId '" + n.note_id + "' in notes");
    }

    JoinResult result;
    for (const auto& ev : ratings) {
        auto note_it = by_note.find(ev.note_id);
        if (note_it == by_note.end()) {
            ++result.dropped_missing_note;
            continue;
        }
        auto ann_it = by_tweet.find(note_it->second->tweet_id);
        if (ann_it == by_tweet.end()) {
            ++result.dropped_unannotated;
            continue;
        }
        AnnotatedRating ar;
        ar.rating = ev;
        ar.note_classification = note_it->second->classification;
        ar.tweet_author_id = ann_it->second->tweet_author_id;
        ar.party = ann_it->second->party;
        result.annotated.push_back(std::move(ar));
    }
    std::sort(result.annotated.begin(), result.annotated.end(),
              [](const AnnotatedRating& a, const AnnotatedRating& b) {
                  if (a.rating.note_id != b.rating.note_id) return a.rating.note_id < b.rating.note_id;
                  return a.rating.rater_id < b.rating.rater_id;
              });
    return result;
}

CorpusStats corpus_stats(const std::vector<RatingEvent>& ratings,
                         const std::vector<NoteRecord>& notes) {
    CorpusStats s;
    s.n_notes = notes.size();
    s.n_ratings = ratings.size();
    std::set<std::string_view> raters;
    for (const auto& ev : ratings) {
        raters.insert(ev.rater_id);
        if (!s.time_min_ms || ev.created_at_ms < *s.time_min_ms) s.time_min_ms = ev.created_at_ms;
        if (!s.time_max_ms || ev.created_at_ms > *s.time_max_ms) s.time_max_ms = ev.created_at_ms;
    }
    s.n_raters = raters.size();
    return s;
}

} // namespace notelab::ingest
