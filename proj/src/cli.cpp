#include "notelab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "notelab/cache.hpp"
#include "notelab/concentration.hpp"
#include "notelab/counterfactual.hpp"
#include "notelab/errors.hpp"
#include "notelab/ingest.hpp"
#include "notelab/mathutil.hpp"
#include "notelab/polarization.hpp"
#include "notelab/rng.hpp"
#include "notelab/scorer.hpp"
#include "notelab/selectivity.hpp"
#include "notelab/synthgen.hpp"

namespace notelab::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr const char* kVersion = "notelab 0.1.0";

int g_log_level = 1; // 0 quiet, 1 info, 2 debug

void info(const std::string& msg) {
    if (g_log_level >= 1) std::cout << msg << '\n';
}

void debug(const std::string& msg) {
    if (g_log_level >= 2) std::cout << msg << '\n';
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Full round-trip precision for CSV cells.
std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hex16(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string iso8601_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[80];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

std::string file_digest(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError("cannot open '" + p.string() + "'");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
    }
    return hex16(h);
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write '" + p.string() + "'");
    return out;
}

void write_text(const fs::path& p, const std::string& text) {
    auto out = open_out(p);
    out << text;
    if (!out) throw DataError("write failed for '" + p.string() + "'");
}

void write_json_file(const fs::path& p, const ojson& j) { write_text(p, j.dump(2) + "\n"); }

// --- run manifest ----------------------------------------------------------

struct Manifest {
    std::string command;
    std::string started;
    std::map<std::string, std::uint64_t> seeds;
    std::map<std::string, std::string> config_digests;
    std::map<std::string, std::string> inputs; // path -> fnv1a64 hex
    std::vector<std::string> outputs;          // relative to the manifest dir
};

void add_input(Manifest& man, const fs::path& p) { man.inputs[p.string()] = file_digest(p); }

// Digest every data file directly under a corpus/cache directory.
void add_dir_inputs(Manifest& man, const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError("no such directory '" + dir.string() + "'");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        if (e.path().filename() == "manifest.json") continue;
        auto ext = e.path().extension().string();
        if (ext == ".bin" || ext == ".tsv" || ext == ".csv" || ext == ".json")
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) add_input(man, p);
}

void write_manifest(const fs::path& dir, const Manifest& man) {
    ojson j;
    j["tool"] = kVersion;
    j["command"] = man.command;
    j["started"] = man.started;
    j["finished"] = iso8601_now();
    j["seeds"] = man.seeds;
    j["config_digests"] = man.config_digests;
    j["inputs"] = man.inputs;
    j["outputs"] = man.outputs;
    write_json_file(dir / "manifest.json", j);
}

// --- flat key = value config files ------------------------------------------

std::string trimmed(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// The subset of TOML the config files use: one `key = value` per line,
// `#` comments, optional double quotes around values.
class FlatConfig {
public:
    explicit FlatConfig(const std::string& path) : path_(path) {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot open config '" + path + "'");
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = trimmed(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw UsageError(at(lineno) + "expected key = value");
            std::string key = trimmed(line.substr(0, eq));
            std::string val = trimmed(line.substr(eq + 1));
            if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
                val = val.substr(1, val.size() - 2);
            if (key.empty() || val.empty()) throw UsageError(at(lineno) + "expected key = value");
            if (!kv_.emplace(key, val).second)
                throw UsageError(at(lineno) + "duplicate key '" + key + "'");
        }
    }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    double pop_double(const std::string& key, double dflt) {
        auto v = pop(key);
        if (!v) return dflt;
        char* end = nullptr;
        double d = std::strtod(v->c_str(), &end);
        if (end != v->c_str() + v->size() || v->empty())
            throw UsageError(path_ + ": key '" + key + "': expected a number, got '" + *v + "'");
        return d;
    }

    std::uint64_t pop_u64(const std::string& key, std::uint64_t dflt) {
        auto v = pop(key);
        if (!v) return dflt;
        return parse_u64(key, *v);
    }

    std::uint64_t require_u64(const std::string& key) {
        auto v = pop(key);
        if (!v) throw UsageError(path_ + ": missing required key '" + key + "'");
        return parse_u64(key, *v);
    }

    int pop_int(const std::string& key, int dflt) {
        double d = pop_double(key, static_cast<double>(dflt));
        int i = static_cast<int>(d);
        if (static_cast<double>(i) != d)
            throw UsageError(path_ + ": key '" + key + "': expected an integer");
        return i;
    }

    void finish() const {
        if (!kv_.empty())
            throw UsageError(path_ + ": unknown key '" + kv_.begin()->first + "'");
    }

private:
    std::string at(std::size_t lineno) const { return path_ + ":" + std::to_string(lineno) + ": "; }

    std::optional<std::string> pop(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        std::string v = it->second;
        kv_.erase(it);
        return v;
    }

    std::uint64_t parse_u64(const std::string& key, const std::string& v) {
        if (v.empty() || v[0] == '-')
            throw UsageError(path_ + ": key '" + key + "': expected a non-negative integer");
        char* end = nullptr;
        unsigned long long u = std::strtoull(v.c_str(), &end, 10);
        if (end != v.c_str() + v.size())
            throw UsageError(path_ + ": key '" + key + "': expected a non-negative integer");
        return static_cast<std::uint64_t>(u);
    }

    std::string path_;
    std::map<std::string, std::string> kv_;
};

scorer::ScorerConfig load_scorer_config(const std::string& path, unsigned threads,
                                        std::optional<std::uint64_t> seed_override) {
    scorer::ScorerConfig cfg;
    if (!path.empty()) {
        FlatConfig c(path);
        cfg.factor_dim = c.pop_int("factor_dim", cfg.factor_dim);
        cfg.lambda_intercept = c.pop_double("lambda_intercept", cfg.lambda_intercept);
        cfg.lambda_factor = c.pop_double("lambda_factor", cfg.lambda_factor);
        cfg.learning_rate = c.pop_double("learning_rate", cfg.learning_rate);
        cfg.lr_decay = c.pop_double("lr_decay", cfg.lr_decay);
        cfg.epochs = c.pop_int("epochs", cfg.epochs);
        cfg.convergence_tol = c.pop_double("convergence_tol", cfg.convergence_tol);
        cfg.crh_threshold = c.pop_double("crh_threshold", cfg.crh_threshold);
        cfg.crnh_intercept_threshold =
            c.pop_double("crnh_intercept_threshold", cfg.crnh_intercept_threshold);
        cfg.crnh_factor_slope = c.pop_double("crnh_factor_slope", cfg.crnh_factor_slope);
        cfg.min_ratings_for_status =
            c.pop_u64("min_ratings_for_status", cfg.min_ratings_for_status);
        cfg.seed = c.pop_u64("seed", cfg.seed);
        c.finish();
    }
    if (seed_override) cfg.seed = *seed_override;
    cfg.threads = threads;
    cfg.validate();
    return cfg;
}

struct SynthFileConfig {
    synthgen::SynthConfig cfg;
    std::uint64_t pivotal_notes = 0;
};

SynthFileConfig load_synth_config(const std::string& path) {
    FlatConfig c(path);
    SynthFileConfig out;
    auto& s = out.cfg;
    s.n_raters = c.pop_u64("n_raters", s.n_raters);
    s.n_notes = c.pop_u64("n_notes", s.n_notes);
    s.n_authors = c.pop_u64("n_authors", s.n_authors);
    s.activity_alpha = c.pop_double("activity_alpha", s.activity_alpha);
    s.activity_xmin = c.pop_u64("activity_xmin", s.activity_xmin);
    s.leaning_mix.mu1 = c.pop_double("mu_1", s.leaning_mix.mu1);
    s.leaning_mix.sigma1 = c.pop_double("sigma_1", s.leaning_mix.sigma1);
    s.leaning_mix.w1 = c.pop_double("w_1", s.leaning_mix.w1);
    s.leaning_mix.mu2 = c.pop_double("mu_2", s.leaning_mix.mu2);
    s.leaning_mix.sigma2 = c.pop_double("sigma_2", s.leaning_mix.sigma2);
    s.leaning_mix.w2 = c.pop_double("w_2", s.leaning_mix.w2);
    s.polarization_by_activity =
        c.pop_double("polarization_by_activity", s.polarization_by_activity);
    s.selectivity_zipf_s = c.pop_double("selectivity_zipf_s", s.selectivity_zipf_s);
    s.frac_bridging_notes = c.pop_double("frac_bridging_notes", s.frac_bridging_notes);
    s.noise = c.pop_double("noise", s.noise);
    s.seed = c.require_u64("seed");
    out.pivotal_notes = c.pop_u64("pivotal_notes", 0);
    c.finish();
    s.validate();
    return out;
}

// --- small parsing helpers ---------------------------------------------------

std::vector<std::uint64_t> parse_ks(const std::string& spec) {
    std::vector<std::uint64_t> ks;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trimmed(item);
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("--ks: expected comma-separated non-negative integers, got '" +
                             spec + "'");
        ks.push_back(std::strtoull(item.c_str(), nullptr, 10));
    }
    if (ks.empty()) throw UsageError("--ks: empty list");
    return ks;
}

bool wildcard_match(std::string_view pat, std::string_view s) {
    std::size_t p = 0, i = 0;
    std::size_t star = std::string_view::npos, mark = 0;
    while (i < s.size()) {
        if (p < pat.size() && (pat[p] == '?' || pat[p] == s[i])) {
            ++p;
            ++i;
        } else if (p < pat.size() && pat[p] == '*') {
            star = p++;
            mark = i;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            i = ++mark;
        } else {
            return false;
        }
    }
    while (p < pat.size() && pat[p] == '*') ++p;
    return p == pat.size();
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
    fs::path pp(pattern);
    std::string name = pp.filename().string();
    if (name.find('*') == std::string::npos && name.find('?') == std::string::npos) {
        if (!fs::is_regular_file(pp)) throw DataError("no such file '" + pattern + "'");
        return {pp};
    }
    fs::path dir = pp.has_parent_path() ? pp.parent_path() : fs::path(".");
    if (!fs::is_directory(dir)) throw DataError("no such directory '" + dir.string() + "'");
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && wildcard_match(name, e.path().filename().string()))
            out.push_back(e.path());
    std::sort(out.begin(), out.end());
    if (out.empty()) throw DataError("no files match '" + pattern + "'");
    return out;
}

// --- CSV / JSON emitters -----------------------------------------------------

void write_lorenz_csv(const fs::path& p, const concentration::GiniResult& g) {
    auto out = open_out(p);
    out << "cum_raters,cum_ratings\n";
    for (const auto& [x, y] : g.lorenz) out << g17(x) << ',' << g17(y) << '\n';
}

void write_points_csv(const fs::path& p, const std::vector<selectivity::SelectivityPoint>& pts) {
    auto out = open_out(p);
    out << "r,n_authors\n";
    for (const auto& pt : pts) out << pt.r << ',' << pt.n_authors << '\n';
}

void write_leaning_csv(const fs::path& p,
                       const std::map<std::string, polarization::LeaningValue>& per_rater,
                       const std::map<std::string, int>& deciles) {
    auto out = open_out(p);
    out << "rater_id,L,n_ratings,decile\n";
    for (const auto& [id, lv] : per_rater)
        out << id << ',' << g17(lv.L) << ',' << lv.n_ratings << ',' << deciles.at(id) << '\n';
}

struct DecileRow {
    polarization::Gmm2 gmm;
    double ashman_d = 0.0;
    std::size_t n = 0;
};

void write_deciles_csv(const fs::path& p, const std::map<int, DecileRow>& rows) {
    auto out = open_out(p);
    out << "decile,mu1,sigma1,w1,mu2,sigma2,w2,ashman_d\n";
    for (const auto& [d, row] : rows) {
        const auto& g = row.gmm;
        out << d << ',' << g17(g.mu1) << ',' << g17(g.sigma1) << ',' << g17(g.w1) << ','
            << g17(g.mu2) << ',' << g17(g.sigma2) << ',' << g17(g.w2) << ','
            << g17(row.ashman_d) << '\n';
    }
}

void write_statuses_csv(const fs::path& p, const scorer::StatusAssignment& a) {
    auto out = open_out(p);
    out << "note_id,status,note_intercept,abs_factor,n_ratings\n";
    for (const auto& [id, s] : a.notes)
        out << id << ',' << status_code(s.status) << ',' << g17(s.note_intercept) << ','
            << g17(s.abs_factor) << ',' << s.n_ratings << '\n';
}

void write_heatmap_csv(const fs::path& p, const counterfactual::StabilityReport& rep) {
    auto out = open_out(p);
    out << "k,status,n_notes,jaccard,gained,lost\n";
    for (const auto& sc : rep.scenarios)
        for (const auto& [st, sum] : sc.by_status)
            out << sc.k << ',' << status_code(st) << ',' << sum.n_notes << ','
                << g17(sum.jaccard) << ',' << sum.gained << ',' << sum.lost << '\n';
}

ojson j_power_fit(const concentration::PowerLawFit& f) {
    return {{"alpha", f.alpha},
            {"alpha_stderr", f.alpha_stderr},
            {"x_min", f.x_min},
            {"ks_distance", f.ks_distance},
            {"n_tail", f.n_tail}};
}

ojson j_lr(const concentration::LrTestResult& t) {
    return {{"R", t.R}, {"p_value", t.p_value}};
}

ojson j_saturation(const selectivity::SaturationFit& f) {
    return {{"n_asy", f.n_asy},         {"tau", f.tau},
            {"ci95_n_asy", f.ci95_n_asy}, {"ci95_tau", f.ci95_tau},
            {"residual_sse", f.residual_sse}, {"iterations", f.iterations}};
}

ojson j_gmm(const polarization::Gmm2& g) {
    return {{"mu1", g.mu1}, {"sigma1", g.sigma1}, {"w1", g.w1},
            {"mu2", g.mu2}, {"sigma2", g.sigma2}, {"w2", g.w2},
            {"log_likelihood", g.log_likelihood}, {"iterations", g.iterations}};
}

ojson stability_json(const counterfactual::StabilityReport& rep) {
    ojson j;
    j["config_digest"] = rep.config_digest;
    ojson arr = ojson::array();
    for (const auto& sc : rep.scenarios) {
        ojson s;
        s["k"] = sc.k;
        s["n_removed"] = sc.removed_raters.size();
        s["n_ratings_remaining"] = sc.n_ratings_remaining;
        ojson by;
        for (const auto& [st, sum] : sc.by_status)
            by[std::string(status_code(st))] = {{"n_notes", sum.n_notes},
                                                {"jaccard", sum.jaccard},
                                                {"gained", sum.gained},
                                                {"lost", sum.lost},
                                                {"retained", sum.retained}};
        s["by_status"] = by;
        arr.push_back(s);
    }
    j["scenarios"] = arr;
    return j;
}

// --- analysis stages (shared between subcommands and reproduce) --------------

struct ConcentrationStage {
    concentration::GiniResult gini;
    concentration::PowerLawFit fit;
    concentration::LrTestResult lr;
    std::map<int, double> by_year;
    ojson report;
};

ConcentrationStage run_concentration_stage(const cache::Corpus& corpus, bool per_year,
                                            unsigned threads) {
    if (corpus.ratings.empty()) throw DataError("corpus has no ratings");
    ConcentrationStage st;
    auto activity = concentration::activity_counts(corpus.ratings);
    st.gini = concentration::gini(activity);
    st.fit = concentration::fit_power_law(activity, threads);
    st.lr = concentration::lr_test_vs_exponential(activity.values(), st.fit);

    ojson rep;
    rep["n_raters"] = activity.n();
    rep["n_ratings"] = corpus.ratings.size();
    rep["gini"] = st.gini.gini;
    rep["top20_share"] = st.gini.top20_share;
    rep["fit"] = j_power_fit(st.fit);
    rep["lr_test"] = j_lr(st.lr);
    if (per_year) {
        st.by_year = concentration::gini_by_year(corpus.ratings);
        ojson by;
        for (const auto& [year, g] : st.by_year) by[std::to_string(year)] = g;
        rep["gini_by_year"] = by;
    }
    rep["lorenz_csv"] = "lorenz.csv";
    st.report = std::move(rep);
    return st;
}

struct SelectivityStage {
    std::vector<selectivity::SelectivityPoint> observed;
    std::vector<selectivity::SelectivityPoint> null_points; // first replicate
    selectivity::SaturationFit obs;
    std::vector<selectivity::SaturationFit> null_fits;
    int tau_separated = 0;
    ojson report;
};

SelectivityStage run_selectivity_stage(const cache::Corpus& corpus, std::uint64_t seed,
                                       unsigned null_reps) {
    if (null_reps < 1) throw UsageError("--null-reps must be >= 1");
    if (corpus.annotations.empty())
        throw DataError("corpus has no political annotations; selectivity needs them");
    auto joined = ingest::join_political(corpus.ratings, corpus.notes, corpus.annotations);
    if (joined.annotated.empty()) throw DataError("no ratings fall on annotated tweets");

    SelectivityStage st;
    st.observed = selectivity::selectivity_points(joined.annotated);
    st.obs = selectivity::fit_saturation(st.observed);
    ojson nulls = ojson::array();
    for (unsigned rep = 0; rep < null_reps; ++rep) {
        auto shuffled = selectivity::shuffle_null(joined.annotated, Rng::derive(seed, rep));
        auto pts = selectivity::selectivity_points(shuffled);
        auto fit = selectivity::fit_saturation(pts);
        if (rep == 0) st.null_points = std::move(pts);
        bool separated = st.obs.tau + st.obs.ci95_tau < fit.tau - fit.ci95_tau;
        st.tau_separated += separated ? 1 : 0;
        ojson jn = j_saturation(fit);
        jn["tau_separated"] = separated;
        nulls.push_back(std::move(jn));
        st.null_fits.push_back(fit);
    }

    ojson rep;
    rep["n_raters"] = st.observed.size();
    rep["dropped_unannotated"] = joined.dropped_unannotated;
    rep["dropped_missing_note"] = joined.dropped_missing_note;
    rep["fit"] = j_saturation(st.obs);
    rep["null_reps"] = null_reps;
    rep["null_fits"] = std::move(nulls);
    rep["tau_separated_count"] = st.tau_separated;
    rep["observed_csv"] = "points_observed.csv";
    rep["null_csv"] = "points_null.csv";
    st.report = std::move(rep);
    return st;
}

struct PolarizationStage {
    std::map<std::string, polarization::LeaningValue> per_rater;
    std::map<std::string, int> deciles;
    polarization::LeaningStats stats;
    polarization::Gmm2 overall;
    double overall_d = 0.0;
    std::map<int, DecileRow> decile_rows;
    ojson report;
};

PolarizationStage run_polarization_stage(const cache::Corpus& corpus, std::uint64_t min_ratings,
                                         std::uint64_t seed) {
    if (corpus.annotations.empty())
        throw DataError("corpus has no political annotations; polarization needs them");
    auto joined = ingest::join_political(corpus.ratings, corpus.notes, corpus.annotations);
    if (joined.annotated.empty()) throw DataError("no ratings fall on annotated tweets");

    PolarizationStage st;
    st.per_rater = polarization::leaning_per_rater(joined.annotated, min_ratings);
    if (st.per_rater.empty())
        throw DataError("no rater reaches the " + std::to_string(min_ratings) +
                        "-rating floor for a leaning estimate");

    std::set<std::string> eligible;
    for (const auto& [id, lv] : st.per_rater) eligible.insert(id);
    auto activity = concentration::activity_counts(corpus.ratings);
    st.deciles = polarization::decile_partition(activity, eligible);

    std::vector<double> values;
    std::map<int, std::vector<double>> by_decile;
    for (const auto& [id, lv] : st.per_rater) {
        values.push_back(lv.L);
        by_decile[st.deciles.at(id)].push_back(lv.L);
    }
    st.stats = polarization::leaning_stats(values);
    st.overall = polarization::fit_gmm2(values, Rng::derive(seed, 0));
    st.overall_d = polarization::ashman_d(st.overall);
    for (const auto& [d, vals] : by_decile) {
        auto g = polarization::fit_gmm2(vals, Rng::derive(seed, static_cast<std::uint64_t>(d)));
        st.decile_rows[d] = DecileRow{g, polarization::ashman_d(g), vals.size()};
    }

    ojson rep;
    rep["n_raters_eligible"] = st.per_rater.size();
    rep["min_ratings"] = min_ratings;
    rep["stats"] = {{"mean", st.stats.mean},
                    {"median", st.stats.median},
                    {"stddev", st.stats.stddev},
                    {"skewness", st.stats.skewness}};
    ojson overall = j_gmm(st.overall);
    overall["ashman_d"] = st.overall_d;
    overall["bimodal"] = polarization::is_bimodal(st.overall_d);
    rep["overall"] = std::move(overall);
    ojson deciles;
    for (const auto& [d, row] : st.decile_rows) {
        ojson jd = j_gmm(row.gmm);
        jd["ashman_d"] = row.ashman_d;
        jd["n"] = row.n;
        deciles[std::to_string(d)] = std::move(jd);
    }
    rep["deciles"] = std::move(deciles);
    rep["per_rater_csv"] = "leaning_per_rater.csv";
    rep["deciles_csv"] = "deciles.csv";
    st.report = std::move(rep);
    return st;
}

// --- global options -----------------------------------------------------------

struct GlobalOpts {
    unsigned threads = 1;
    bool lenient = false;
    std::string command;
};

cache::Corpus load_corpus_checked(const std::string& dir, const GlobalOpts& g) {
    ingest::ParseCounters counters;
    auto corpus = cache::load_corpus(dir, g.lenient, &counters);
    if (counters.malformed > 0)
        info("loaded '" + dir + "' with " + std::to_string(counters.malformed) +
             " malformed rows skipped");
    return corpus;
}

// --- subcommands ---------------------------------------------------------------

int cmd_ingest(const GlobalOpts& g, const std::string& ratings_glob, const std::string& notes_path,
               const std::string& status_path, const std::string& annotations_path,
               const std::string& out_dir) {
    Manifest man;
    man.command = g.command;
    man.started = iso8601_now();

    ingest::ParseOptions opt{g.lenient};
    ingest::ParseCounters counters;
    cache::Corpus corpus;

    for (const auto& p : expand_glob(ratings_glob)) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw DataError("cannot open '" + p.string() + "'");
        debug("reading " + p.string());
        ingest::parse_ratings_tsv(in, opt, counters,
                                  [&](RatingEvent&& e) { corpus.ratings.push_back(std::move(e)); });
        add_input(man, p);
    }
    std::size_t raw_ratings = corpus.ratings.size();
    corpus.ratings = dedup_ratings(corpus.ratings);

    {
        std::ifstream in(notes_path, std::ios::binary);
        if (!in) throw DataError("cannot open '" + notes_path + "'");
        ingest::parse_notes_tsv(in, opt, counters,
                                [&](NoteRecord&& n) { corpus.notes.push_back(std::move(n)); });
        add_input(man, notes_path);
    }
    {
        std::ifstream in(status_path, std::ios::binary);
        if (!in) throw DataError("cannot open '" + status_path + "'");
        ingest::parse_status_history_tsv(
            in, opt, counters, [&](StatusRecord&& s) { corpus.status.push_back(std::move(s)); });
        add_input(man, status_path);
    }
    if (!annotations_path.empty()) {
        std::ifstream in(annotations_path, std::ios::binary);
        if (!in) throw DataError("cannot open '" + annotations_path + "'");
        ingest::ParseCounters ann_counters;
        corpus.annotations = ingest::read_annotations_csv(in, opt, &ann_counters);
        counters.rows += ann_counters.rows;
        counters.malformed += ann_counters.malformed;
        add_input(man, annotations_path);
    }

    cache::write_cache(out_dir, corpus);
    auto stats = ingest::corpus_stats(corpus.ratings, corpus.notes);
    info("ingest: " + std::to_string(stats.n_ratings) + " ratings (" +
         std::to_string(raw_ratings - corpus.ratings.size()) + " duplicates dropped), " +
         std::to_string(stats.n_notes) + " notes, " + std::to_string(stats.n_raters) +
         " raters, " + std::to_string(counters.malformed) + " malformed rows skipped");

    man.outputs = {"ratings.bin", "notes.bin", "status.bin", "annotations.bin",
                   "corpus_stats.json"};
    write_manifest(out_dir, man);
    return 0;
}

int cmd_concentration(const GlobalOpts& g, const std::string& cache_dir,
                      const std::string& out_path, bool per_year) {
    Manifest man;
    man.command = g.command;
    man.started = iso8601_now();
    add_dir_inputs(man, cache_dir);

    auto corpus = load_corpus_checked(cache_dir, g);
    auto st = run_concentration_stage(corpus, per_year, g.threads);

    fs::path outp(out_path);
    fs::path dir = outp.has_parent_path() ? outp.parent_path() : fs::path(".");
    st.report["manifest"] = "manifest.json";
    write_json_file(outp, st.report);
    write_lorenz_csv(dir / "lorenz.csv", st.gini);
    man.outputs = {outp.filename().string(), "lorenz.csv"};
    write_manifest(dir, man);

    info("concentration: gini " + num(st.gini.gini) + ", top-20% share " +
         num(st.gini.top20_share) + ", alpha " + num(st.fit.alpha) + " (x_min " +
         std::to_string(st.fit.x_min) + ", tail " + std::to_string(st.fit.n_tail) + "), R " +
         num(st.lr.R) + " (p " + num(st.lr.p_value) + ")");
    return 0;
}

int cmd_selectivity(const GlobalOpts& g, const std::string& cache_dir, std::uint64_t seed,
                    unsigned null_reps, const std::string& out_path) {
    Manifest man;
    man.command = g.command;
    man.started = iso8601_now();
    man.seeds["seed"] = seed;
    add_dir_inputs(man, cache_dir);

    auto corpus = load_corpus_checked(cache_dir, g);
    auto st = run_selectivity_stage(corpus, seed, null_reps);

    fs::path outp(out_path);
    fs::path dir = outp.has_parent_path() ? outp.parent_path() : fs::path(".");
    st.report["manifest"] = "manifest.json";
    write_json_file(outp, st.report);
    write_points_csv(dir / "points_observed.csv", st.observed);
    write_points_csv(dir / "points_null.csv", st.null_points);
    man.outputs = {outp.filename().string(), "points_observed.csv", "points_null.csv"};
    write_manifest(dir, man);

    info("selectivity: N_asy " + num(st.obs.n_asy) + " +/- " + num(st.obs.ci95_n_asy) +
         ", tau " + num(st.obs.tau) + " +/- " + num(st.obs.ci95_tau) + ", null tau " +
         num(st.null_fits.front().tau) + ", separated " + std::to_string(st.tau_separated) +
         "/" + std::to_string(null_reps));
    return 0;
}

int cmd_polarization(const GlobalOpts& g, const std::string& cache_dir, std::uint64_t min_ratings,
                     std::uint64_t seed, const std::string& out_path) {
    Manifest man;
    man.command = g.command;
    man.started = iso8601_now();
    man.seeds["seed"] = seed;
    add_dir_inputs(man, cache_dir);

    auto corpus = load_corpus_checked(cache_dir, g);
    auto st = run_polarization_stage(corpus, min_ratings, seed);

    fs::path outp(out_path);
    fs::path dir = outp.has_parent_path() ? outp.parent_path() : fs::path(".");
    st.report["manifest"] = "manifest.json";
    write_json_file(outp, st.report);
    write_leaning_csv(dir / "leaning_per_rater.csv", st.per_rater, st.deciles);
    write_deciles_csv(dir / "deciles.csv", st.decile_rows);
    man.outputs = {outp.filename().string(), "leaning_per_rater.csv", "deciles.csv"};
    write_manifest(dir, man);

    info("polarization: " + std::to_string(st.per_rater.size()) + " raters, mean L " +
         num(st.stats.mean) + ", median " + num(st.stats.median) + ", sd " +
         num(st.stats.stddev) + ", skew " + num(st.stats.skewness) + ", overall Ashman D " +
         num(st.overall_d));
    return 0;
}

int cmd_score(const GlobalOpts& g, const std::string& cache_dir, const std::string& config_path,
              std::optional<std::uint64_t> seed_override, const std::string& out_path) {
    Manifest man;
    man.command = g.command;
    man.started = iso8601_now();
    add_dir_inputs(man, cache_dir);

    auto cfg = load_scorer_config(config_path, g.threads, seed_override);
    if (!config_path.empty()) add_input(man, config_path);
    man.config_digests["scorer"] = counterfactual::config_digest(cfg);
    man.seeds["scorer_seed"] = cfg.seed;

    auto corpus = load_corpus_checked(cache_dir, g);
    if (corpus.ratings.empty()) throw DataError("corpus has no ratings");
    auto assignment = scorer::score_corpus(corpus.ratings, corpus.status, cfg);

    fs::path outp(out_path);
    fs::path dir = outp.has_parent_path() ? outp.parent_path() : fs::path(".");
    write_statuses_csv(outp, assignment);
    man.outputs = {outp.filename().string()};
    write_manifest(dir, man);

    info("score: " + std::to_string(assignment.notes.size()) + " notes, CRH " +
         std::to_string(assignment.count(NoteStatus::CurrentlyRatedHelpful)) + ", CRNH " +
         std::to_string(assignment.count(NoteStatus::CurrentlyRatedNotHelpful)) + ", NMR " +
         std::to_string(assignment.count(NoteStatus::NeedsMoreRatings)) + " (config " +
         man.config_digests["scorer"] + ")");
    return 0;
}

int cmd_counterfactual(const GlobalOpts& g, const std::string& cache_dir,
                       const std::string& config_path, std::optional<std::uint64_t> seed_override,
                       const std::string& ks_spec, const std::string& out_path) {
    Manifest man;
    man.command = g.command;
    man.started = iso8601_now();
    add_dir_inputs(man, cache_dir);

    auto cfg = load_scorer_config(config_path, g.threads, seed_override);
    if (!config_path.empty()) add_input(man, config_path);
    man.config_digests["scorer"] = counterfactual::config_digest(cfg);
    man.seeds["scorer_seed"] = cfg.seed;

    auto ks = ks_spec.empty() ? counterfactual::default_ladder_ks() : parse_ks(ks_spec);
    auto corpus = load_corpus_checked(cache_dir, g);
    counterfactual::LadderOptions options;
    options.threads = g.threads;
    auto report = counterfactual::run_ladder(corpus.ratings, corpus.status, ks, cfg, options);

    fs::path outp(out_path);
    fs::path dir = outp.has_parent_path() ? outp.parent_path() : fs::path(".");
    ojson j = stability_json(report);
    j["manifest"] = "manifest.json";
    write_json_file(outp, j);
    write_heatmap_csv(dir / "heatmap.csv", report);
    man.outputs = {outp.filename().string(), "heatmap.csv"};
    for (const auto& sc : report.scenarios) {
        std::string name = "statuses_k" + std::to_string(sc.k) + ".csv";
        write_statuses_csv(dir / name, sc.assignment);
        man.outputs.push_back(name);
    }
    write_manifest(dir, man);

    for (const auto& sc : report.scenarios) {
        const auto& crh = sc.by_status.at(NoteStatus::CurrentlyRatedHelpful);
        info("counterfactual: k " + std::to_string(sc.k) + ", ratings left " +
             std::to_string(sc.n_ratings_remaining) + ", CRH jaccard " + num(crh.jaccard) +
             " (gained " + std::to_string(crh.gained) + ", lost " + std::to_string(crh.lost) +
             ")");
    }
    return 0;
}

int cmd_synth(const GlobalOpts& g, const std::string& config_path, const std::string& out_dir) {
    Manifest man;
    man.command = g.command;
    man.started = iso8601_now();
    add_input(man, config_path);

    auto fc = load_synth_config(config_path);
    man.seeds["seed"] = fc.cfg.seed;
    auto sc = synthgen::generate(fc.cfg);
    if (fc.pivotal_notes > 0) {
        scorer::ScorerConfig scfg;
        scfg.seed = fc.cfg.seed;
        scfg.threads = g.threads;
        sc = synthgen::plant_pivotal_rater(std::move(sc), fc.pivotal_notes, scfg);
        man.config_digests["plant_scorer"] = counterfactual::config_digest(scfg);
    }
    synthgen::write_synth(out_dir, sc);

    man.outputs = {"ratings-00000.tsv", "notes-00000.tsv", "noteStatusHistory-00000.tsv",
                   "annotations.csv", "ground_truth.json"};
    write_manifest(out_dir, man);

    info("synth: " + std::to_string(sc.corpus.ratings.size()) + " ratings over " +
         std::to_string(sc.corpus.notes.size()) + " notes by " +
         std::to_string(fc.cfg.n_raters) + " raters" +
         (fc.pivotal_notes > 0
              ? ", pivotal rater '" + sc.truth.super_rater + "' carries " +
                    std::to_string(sc.truth.pivotal_notes.size()) + " notes"
              : ""));
    return 0;
}

int cmd_reproduce(const GlobalOpts& g, const std::string& cache_dir, std::uint64_t seed,
                  const std::string& config_path, const std::string& ks_spec,
                  std::uint64_t min_ratings, unsigned null_reps, const std::string& out_dir) {
    Manifest man;
    man.command = g.command;
    man.started = iso8601_now();
    man.seeds["seed"] = seed;
    add_dir_inputs(man, cache_dir);

    auto corpus = load_corpus_checked(cache_dir, g);
    fs::create_directories(out_dir);
    fs::path out(out_dir);
    ojson paper;

    auto conc = run_concentration_stage(corpus, true, g.threads);
    conc.report["manifest"] = "manifest.json";
    write_json_file(out / "concentration.json", conc.report);
    write_lorenz_csv(out / "lorenz.csv", conc.gini);
    man.outputs = {"concentration.json", "lorenz.csv"};
    info("reproduce: concentration done (gini " + num(conc.gini.gini) + ", alpha " +
         num(conc.fit.alpha) + ")");

    ojson jc;
    jc["alpha"] = conc.fit.alpha;
    jc["x_min"] = conc.fit.x_min;
    jc["D"] = conc.fit.ks_distance;
    jc["R"] = conc.lr.R;
    jc["p"] = conc.lr.p_value;
    jc["G"] = conc.gini.gini;
    ojson by_year;
    for (const auto& [year, gv] : conc.by_year) by_year[std::to_string(year)] = gv;
    jc["G_by_year"] = by_year;
    jc["top20_share"] = conc.gini.top20_share;
    paper["concentration"] = jc;

    bool annotated = !corpus.annotations.empty();
    if (!annotated)
        info("reproduce: corpus has no political annotations; selectivity and polarization "
             "sections will be null");

    if (annotated) {
        auto sel = run_selectivity_stage(corpus, Rng::derive(seed, 1), null_reps);
        sel.report["manifest"] = "manifest.json";
        write_json_file(out / "selectivity.json", sel.report);
        write_points_csv(out / "points_observed.csv", sel.observed);
        write_points_csv(out / "points_null.csv", sel.null_points);
        man.outputs.insert(man.outputs.end(),
                           {"selectivity.json", "points_observed.csv", "points_null.csv"});
        info("reproduce: selectivity done (tau " + num(sel.obs.tau) + " vs null " +
             num(sel.null_fits.front().tau) + ")");
        paper["selectivity"] = {{"N_asy", sel.obs.n_asy},
                                {"tau", sel.obs.tau},
                                {"ci95_N_asy", sel.obs.ci95_n_asy},
                                {"ci95_tau", sel.obs.ci95_tau},
                                {"null_tau", sel.null_fits.front().tau},
                                {"tau_separated_count", sel.tau_separated}};
    } else {
        paper["selectivity"] = nullptr;
    }

    if (annotated) {
        auto pol = run_polarization_stage(corpus, min_ratings, Rng::derive(seed, 2));
        pol.report["manifest"] = "manifest.json";
        write_json_file(out / "polarization.json", pol.report);
        write_leaning_csv(out / "leaning_per_rater.csv", pol.per_rater, pol.deciles);
        write_deciles_csv(out / "deciles.csv", pol.decile_rows);
        man.outputs.insert(man.outputs.end(),
                           {"polarization.json", "leaning_per_rater.csv", "deciles.csv"});
        info("reproduce: polarization done (mean L " + num(pol.stats.mean) + ", overall D " +
             num(pol.overall_d) + ")");
        ojson jp;
        jp["mu_L"] = pol.stats.mean;
        jp["M_L"] = pol.stats.median;
        jp["sigma_L"] = pol.stats.stddev;
        jp["gamma_L"] = pol.stats.skewness;
        jp["overall_ashman_d"] = pol.overall_d;
        ojson per_decile;
        for (const auto& [d, row] : pol.decile_rows)
            per_decile[std::to_string(d)] = row.ashman_d;
        jp["decile_ashman_d"] = per_decile;
        paper["polarization"] = jp;
    } else {
        paper["polarization"] = nullptr;
    }

    auto cfg = load_scorer_config(config_path, g.threads, seed);
    if (!config_path.empty()) add_input(man, config_path);
    man.config_digests["scorer"] = counterfactual::config_digest(cfg);
    man.seeds["scorer_seed"] = cfg.seed;
    auto ks = ks_spec.empty() ? counterfactual::default_ladder_ks() : parse_ks(ks_spec);
    counterfactual::LadderOptions options;
    options.threads = g.threads;
    auto ladder = counterfactual::run_ladder(corpus.ratings, corpus.status, ks, cfg, options);

    const counterfactual::ScenarioResult* baseline = nullptr;
    for (const auto& s : ladder.scenarios)
        if (s.k == 0) baseline = &s;
    write_statuses_csv(out / "statuses.csv", baseline->assignment);
    ojson js = stability_json(ladder);
    js["manifest"] = "manifest.json";
    write_json_file(out / "stability.json", js);
    write_heatmap_csv(out / "heatmap.csv", ladder);
    man.outputs.insert(man.outputs.end(), {"statuses.csv", "stability.json", "heatmap.csv"});
    info("reproduce: scoring and counterfactual ladder done (CRH " +
         std::to_string(baseline->assignment.count(NoteStatus::CurrentlyRatedHelpful)) + " of " +
         std::to_string(baseline->assignment.notes.size()) + " notes)");

    paper["scorer"] = {
        {"config_digest", ladder.config_digest},
        {"seed", cfg.seed},
        {"n_notes", baseline->assignment.notes.size()},
        {"counts",
         {{"CRH", baseline->assignment.count(NoteStatus::CurrentlyRatedHelpful)},
          {"CRNH", baseline->assignment.count(NoteStatus::CurrentlyRatedNotHelpful)},
          {"NMR", baseline->assignment.count(NoteStatus::NeedsMoreRatings)}}}};

    ojson jaccards = ojson::array();
    for (const auto& s : ladder.scenarios)
        jaccards.push_back(
            {{"k", s.k},
             {"CRH", s.by_status.at(NoteStatus::CurrentlyRatedHelpful).jaccard},
             {"CRNH", s.by_status.at(NoteStatus::CurrentlyRatedNotHelpful).jaccard},
             {"NMR", s.by_status.at(NoteStatus::NeedsMoreRatings).jaccard}});
    paper["counterfactual"] = {{"ks", ks}, {"jaccard", jaccards}};
    paper["manifest"] = "manifest.json";
    write_json_file(out / "paper_report.json", paper);
    man.outputs.push_back("paper_report.json");
    write_manifest(out, man);

    info("reproduce: paper_report.json written to " + out_dir);
    return 0;
}

} // namespace

int run(int argc, char** argv) {
    std::string command;
    for (int i = 0; i < argc; ++i) {
        if (i) command += ' ';
        command += argv[i];
    }

    CLI::App app{"Community Notes rating analysis toolkit", "notelab"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    unsigned threads = 1;
    bool lenient = false;
    std::string log_level = "info";
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--lenient", lenient, "skip malformed input rows instead of failing");
    app.add_option("--log-level", log_level, "quiet|info|debug")
        ->check(CLI::IsMember({"quiet", "info", "debug"}));

    auto* ing = app.add_subcommand("ingest", "parse raw TSV releases into a binary cache");
    ing->fallthrough();
    std::string ing_ratings, ing_notes, ing_status, ing_annotations, ing_out;
    ing->add_option("--ratings", ing_ratings, "ratings TSV path or glob")->required();
    ing->add_option("--notes", ing_notes, "notes TSV path")->required();
    ing->add_option("--status", ing_status, "note status history TSV path")->required();
    ing->add_option("--annotations", ing_annotations, "political annotations CSV");
    ing->add_option("--out", ing_out, "cache directory to create")->required();

    auto* conc = app.add_subcommand("concentration", "activity Gini, Lorenz and power-law fit");
    conc->fallthrough();
    std::string conc_cache, conc_out;
    bool conc_per_year = false;
    conc->add_option("--cache", conc_cache, "corpus cache directory")->required();
    conc->add_option("--out", conc_out, "report JSON path")->required();
    conc->add_flag("--per-year", conc_per_year, "add per-year Gini series");

    auto* sel = app.add_subcommand("selectivity", "author-saturation fit vs shuffled null");
    sel->fallthrough();
    std::string sel_cache, sel_out;
    std::uint64_t sel_seed = 0;
    unsigned sel_reps = 1;
    sel->add_option("--cache", sel_cache, "corpus cache directory")->required();
    sel->add_option("--seed", sel_seed, "seed for the shuffled null")->required();
    sel->add_option("--null-reps", sel_reps, "number of null replicates");
    sel->add_option("--out", sel_out, "report JSON path")->required();

    auto* pol = app.add_subcommand("polarization", "rater leaning and bimodality by decile");
    pol->fallthrough();
    std::string pol_cache, pol_out;
    std::uint64_t pol_min = 30, pol_seed = 0;
    pol->add_option("--cache", pol_cache, "corpus cache directory")->required();
    pol->add_option("--min-ratings", pol_min, "annotated-rating floor per rater");
    pol->add_option("--seed", pol_seed, "seed for GMM restarts")->required();
    pol->add_option("--out", pol_out, "report JSON path")->required();

    auto* sco = app.add_subcommand("score", "matrix-factorization consensus statuses");
    sco->fallthrough();
    std::string sco_cache, sco_config, sco_out;
    std::uint64_t sco_seed = 0;
    sco->add_option("--cache", sco_cache, "corpus cache directory")->required();
    sco->add_option("--config", sco_config, "scorer TOML config");
    auto* sco_seed_opt = sco->add_option("--seed", sco_seed, "override the scorer seed");
    sco->add_option("--out", sco_out, "statuses CSV path")->required();

    auto* cf = app.add_subcommand("counterfactual", "top-k rater-removal stability ladder");
    cf->fallthrough();
    std::string cf_cache, cf_config, cf_ks, cf_out;
    std::uint64_t cf_seed = 0;
    cf->add_option("--cache", cf_cache, "corpus cache directory")->required();
    cf->add_option("--config", cf_config, "scorer TOML config");
    auto* cf_seed_opt = cf->add_option("--seed", cf_seed, "override the scorer seed");
    cf->add_option("--ks", cf_ks, "comma-separated removal sizes (must include 0)");
    cf->add_option("--out", cf_out, "stability JSON path")->required();

    auto* syn = app.add_subcommand("synth", "generate a synthetic corpus with ground truth");
    syn->fallthrough();
    std::string syn_config, syn_out;
    syn->add_option("--config", syn_config, "synth TOML config")->required();
    syn->add_option("--out", syn_out, "output directory")->required();

    auto* rep = app.add_subcommand("reproduce", "full pipeline into one paper report");
    rep->fallthrough();
    std::string rep_cache, rep_config, rep_ks, rep_out;
    std::uint64_t rep_seed = 0, rep_min = 30;
    unsigned rep_reps = 1;
    rep->add_option("--cache", rep_cache, "corpus cache directory")->required();
    rep->add_option("--seed", rep_seed, "master seed for all randomized stages")->required();
    rep->add_option("--config", rep_config, "scorer TOML config");
    rep->add_option("--ks", rep_ks, "comma-separated removal sizes (must include 0)");
    rep->add_option("--min-ratings", rep_min, "annotated-rating floor per rater");
    rep->add_option("--null-reps", rep_reps, "selectivity null replicates");
    rep->add_option("--out", rep_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    g_log_level = log_level == "quiet" ? 0 : log_level == "debug" ? 2 : 1;
    GlobalOpts g{threads, lenient, command};

    try {
        if (*ing) return cmd_ingest(g, ing_ratings, ing_notes, ing_status, ing_annotations, ing_out);
        if (*conc) return cmd_concentration(g, conc_cache, conc_out, conc_per_year);
        if (*sel) return cmd_selectivity(g, sel_cache, sel_seed, sel_reps, sel_out);
        if (*pol) return cmd_polarization(g, pol_cache, pol_min, pol_seed, pol_out);
        if (*sco)
            return cmd_score(g, sco_cache, sco_config,
                             sco_seed_opt->count() ? std::optional<std::uint64_t>(sco_seed)
                                                   : std::nullopt,
                             sco_out);
        if (*cf)
            return cmd_counterfactual(g, cf_cache, cf_config,
                                      cf_seed_opt->count() ? std::optional<std::uint64_t>(cf_seed)
                                                           : std::nullopt,
                                      cf_ks, cf_out);
        if (*syn) return cmd_synth(g, syn_config, syn_out);
        if (*rep)
            return cmd_reproduce(g, rep_cache, rep_seed, rep_config, rep_ks, rep_min, rep_reps,
                                 rep_out);
    } catch (const UsageError& e) {
        std::cerr << "notelab: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "notelab: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "notelab: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "notelab: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

} // namespace notelab::cli
