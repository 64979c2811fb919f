#include "notelab/cache.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "notelab/errors.hpp"

namespace fs = std::filesystem;

namespace notelab::cache {

namespace {

constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

void put_i64(std::ostream& os, std::int64_t v) { put_u64(os, static_cast<std::uint64_t>(v)); }

void put_str(std::ostream& os, const std::string& s) {
    put_u32(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw DataError("truncated cache file");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw DataError("truncated cache file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

std::int64_t get_i64(std::istream& is) { return static_cast<std::int64_t>(get_u64(is)); }

std::string get_str(std::istream& is) {
    std::uint32_t len = get_u32(is);
    std::string s(len, '\0');
    if (len && !is.read(s.data(), len)) throw DataError("truncated cache file");
    return s;
}

void put_u8(std::ostream& os, std::uint8_t v) { os.put(static_cast<char>(v)); }

std::uint8_t get_u8(std::istream& is) {
    int c = is.get();
    if (c == EOF) throw DataError("truncated cache file");
    return static_cast<std::uint8_t>(c);
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw DataError("cannot write " + p.string());
    return os;
}

std::ifstream open_in(const fs::path& p, const char* magic) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw DataError("cannot read " + p.string());
    char got[4];
    if (!is.read(got, 4) || std::memcmp(got, magic, 4) != 0)
        throw DataError("bad magic in " + p.string());
    std::uint32_t version = get_u32(is);
    if (version != kVersion)
        throw DataError("unsupported cache version " + std::to_string(version) + " in " +
                        p.string());
    return is;
}

void write_header(std::ostream& os, const char* magic) {
    os.write(magic, 4);
    put_u32(os, kVersion);
}

} // namespace

void write_cache(const std::string& dir, const Corpus& corpus) {
    fs::create_directories(dir);
    {
        auto os = open_out(fs::path(dir) / "ratings.bin");
        write_header(os, "NLRT");
        // string dictionaries keep the row section fixed-width
        std::vector<std::string> note_ids, rater_ids;
        std::unordered_map<std::string, std::uint32_t> note_idx, rater_idx;
        for (const auto& r : corpus.ratings) {
            if (note_idx.emplace(r.note_id, note_ids.size()).second) note_ids.push_back(r.note_id);
            if (rater_idx.emplace(r.rater_id, rater_ids.size()).second)
                rater_ids.push_back(r.rater_id);
        }
        put_u64(os, note_ids.size());
        for (const auto& s : note_ids) put_str(os, s);
        put_u64(os, rater_ids.size());
        for (const auto& s : rater_ids) put_str(os, s);
        put_u64(os, corpus.ratings.size());
        for (const auto& r : corpus.ratings) {
            put_u32(os, note_idx[r.note_id]);
            put_u32(os, rater_idx[r.rater_id]);
            put_i64(os, r.created_at_ms);
            put_u8(os, static_cast<std::uint8_t>(r.level));
        }
        if (!os) throw DataError("short write to ratings.bin");
    }
    {
        auto os = open_out(fs::path(dir) / "notes.bin");
        write_header(os, "NLNT");
        put_u64(os, corpus.notes.size());
        for (const auto& n : corpus.notes) {
            put_str(os, n.note_id);
            put_str(os, n.tweet_id);
            put_str(os, n.author_participant_id);
            put_u8(os, static_cast<std::uint8_t>(n.classification));
            put_i64(os, n.created_at_ms);
        }
        if (!os) throw DataError("short write to notes.bin");
    }
    {
        auto os = open_out(fs::path(dir) / "status.bin");
        write_header(os, "NLST");
        put_u64(os, corpus.status.size());
        for (const auto& s : corpus.status) {
            put_str(os, s.note_id);
            put_u8(os, static_cast<std::uint8_t>(s.current_status));
            put_u8(os, s.locked_status.has_value() ? 1 : 0);
            if (s.locked_status) put_u8(os, static_cast<std::uint8_t>(*s.locked_status));
            put_u8(os, s.lock_timestamp_ms.has_value() ? 1 : 0);
            if (s.lock_timestamp_ms) put_i64(os, *s.lock_timestamp_ms);
            put_u32(os, static_cast<std::uint32_t>(s.status_timestamps.size()));
            for (const auto& [k, v] : s.status_timestamps) {
                put_str(os, k);
                put_i64(os, v);
            }
        }
        if (!os) throw DataError("short write to status.bin");
    }
    {
        auto os = open_out(fs::path(dir) / "annotations.bin");
        write_header(os, "NLAN");
        put_u64(os, corpus.annotations.size());
        for (const auto& a : corpus.annotations) {
            put_str(os, a.tweet_id);
            put_str(os, a.tweet_author_id);
            put_u8(os, static_cast<std::uint8_t>(a.party));
        }
        if (!os) throw DataError("short write to annotations.bin");
    }
    {
        auto stats = ingest::corpus_stats(corpus.ratings, corpus.notes);
        nlohmann::ordered_json j;
        j["n_notes"] = stats.n_notes;
        j["n_raters"] = stats.n_raters;
        j["n_ratings"] = stats.n_ratings;
        if (stats.time_min_ms) j["time_min_ms"] = *stats.time_min_ms;
        if (stats.time_max_ms) j["time_max_ms"] = *stats.time_max_ms;
        std::ofstream os(fs::path(dir) / "corpus_stats.json");
        os << j.dump(2) << '\n';
        if (!os) throw DataError("short write to corpus_stats.json");
    }
}

Corpus read_cache(const std::string& dir) {
    Corpus corpus;
    {
        auto is = open_in(fs::path(dir) / "ratings.bin", "NLRT");
        std::uint64_t n_notes = get_u64(is);
        std::vector<std::string> note_ids(n_notes);
        for (auto& s : note_ids) s = get_str(is);
        std::uint64_t n_raters = get_u64(is);
        std::vector<std::string> rater_ids(n_raters);
        for (auto& s : rater_ids) s = get_str(is);
        std::uint64_t n = get_u64(is);
        corpus.ratings.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            RatingEvent r;
            std::uint32_t ni = get_u32(is);
            std::uint32_t ri = get_u32(is);
            if (ni >= note_ids.size() || ri >= rater_ids.size())
                throw DataError("corrupt dictionary index in ratings.bin");
            r.note_id = note_ids[ni];
            r.rater_id = rater_ids[ri];
            r.created_at_ms = get_i64(is);
            r.level = static_cast<RatingLevel>(get_u8(is));
            corpus.ratings.push_back(std::move(r));
        }
    }
    {
        auto is = open_in(fs::path(dir) / "notes.bin", "NLNT");
        std::uint64_t n = get_u64(is);
        corpus.notes.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            NoteRecord rec;
            rec.note_id = get_str(is);
            rec.tweet_id = get_str(is);
            rec.author_participant_id = get_str(is);
            rec.classification = static_cast<NoteClassification>(get_u8(is));
            rec.created_at_ms = get_i64(is);
            corpus.notes.push_back(std::move(rec));
        }
    }
    {
        auto is = open_in(fs::path(dir) / "status.bin", "NLST");
        std::uint64_t n = get_u64(is);
        corpus.status.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            StatusRecord rec;
            rec.note_id = get_str(is);
            rec.current_status = static_cast<NoteStatus>(get_u8(is));
            if (get_u8(is)) rec.locked_status = static_cast<NoteStatus>(get_u8(is));
            if (get_u8(is)) rec.lock_timestamp_ms = get_i64(is);
            std::uint32_t m = get_u32(is);
            for (std::uint32_t k = 0; k < m; ++k) {
                std::string key = get_str(is);
                rec.status_timestamps[key] = get_i64(is);
            }
            corpus.status.push_back(std::move(rec));
        }
    }
    {
        auto is = open_in(fs::path(dir) / "annotations.bin", "NLAN");
        std::uint64_t n = get_u64(is);
        corpus.annotations.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            PoliticalAnnotation a;
            a.tweet_id = get_str(is);
            a.tweet_author_id = get_str(is);
            a.party = static_cast<Party>(get_u8(is));
            corpus.annotations.push_back(std::move(a));
        }
    }
    return corpus;
}

bool cache_present(const std::string& dir) {
    return fs::exists(fs::path(dir) / "ratings.bin");
}

namespace {

std::vector<fs::path> files_with_prefix(const std::string& dir, const std::string& prefix,
                                        const std::string& ext) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::string name = e.path().filename().string();
        if (name.size() >= prefix.size() + ext.size() && name.rfind(prefix, 0) == 0 &&
            name.compare(name.size() - ext.size(), ext.size(), ext) == 0)
            out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

Corpus load_corpus(const std::string& dir, bool lenient, ingest::ParseCounters* counters) {
    if (!fs::is_directory(dir)) throw DataError("corpus directory not found: " + dir);
    if (cache_present(dir)) return read_cache(dir);

    ingest::ParseOptions opt;
    opt.lenient = lenient;
    ingest::ParseCounters local;
    ingest::ParseCounters& ctr = counters ? *counters : local;

    auto rating_files = files_with_prefix(dir, "ratings", ".tsv");
    if (rating_files.empty()) throw DataError("no ratings.bin or ratings*.tsv in " + dir);
    Corpus corpus;
    for (const auto& p : rating_files) {
        std::ifstream is(p);
        if (!is) throw DataError("cannot read " + p.string());
        ingest::parse_ratings_tsv(is, opt, ctr,
                                  [&](RatingEvent r) { corpus.ratings.push_back(std::move(r)); });
    }
    corpus.ratings = dedup_ratings(corpus.ratings);

    auto note_files = files_with_prefix(dir, "notes", ".tsv");
    for (const auto& p : note_files) {
        std::ifstream is(p);
        if (!is) throw DataError("cannot read " + p.string());
        ingest::parse_notes_tsv(is, opt, ctr,
                                [&](NoteRecord n) { corpus.notes.push_back(std::move(n)); });
    }

    auto status_files = files_with_prefix(dir, "noteStatusHistory", ".tsv");
    if (status_files.empty()) status_files = files_with_prefix(dir, "status", ".tsv");
    for (const auto& p : status_files) {
        std::ifstream is(p);
        if (!is) throw DataError("cannot read " + p.string());
        ingest::parse_status_history_tsv(
            is, opt, ctr, [&](StatusRecord s) { corpus.status.push_back(std::move(s)); });
    }

    fs::path ann = fs::path(dir) / "annotations.csv";
    if (fs::exists(ann)) {
        std::ifstream is(ann);
        if (!is) throw DataError("cannot read " + ann.string());
        corpus.annotations = ingest::read_annotations_csv(is, opt, &ctr);
    }
    return corpus;
}

} // namespace notelab::cache
