#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "notelab/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

TEST_SUITE_BEGIN("cli");

namespace {

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "notelab");
    args.insert(args.begin() + 1, "--log-level");
    args.insert(args.begin() + 2, "quiet");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return notelab::cli::run(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string& name) {
    fs::path dir = fs::path("cli_test_dir") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

std::string first_line(const fs::path& p) {
    std::string text = slurp(p);
    return text.substr(0, text.find('\n'));
}

// Small but fully exercisable corpus: every rater clears a 5-rating
// polarization floor and the ten deciles stay at >= 20 raters each.
std::string small_synth_toml(std::uint64_t seed) {
    std::ostringstream os;
    os << "n_raters = 200\n"
          "n_notes = 300\n"
          "n_authors = 20\n"
          "activity_alpha = 2.5\n"
          "activity_xmin = 6\n"
          "mu_1 = -0.6\n"
          "sigma_1 = 0.15\n"
          "w_1 = 0.5\n"
          "mu_2 = 0.6\n"
          "sigma_2 = 0.15\n"
          "w_2 = 0.5\n"
          "polarization_by_activity = 0.05\n"
          "selectivity_zipf_s = 1.0\n"
          "frac_bridging_notes = 0.3\n"
          "noise = 0.08\n"
       << "seed = " << seed << "\n";
    return os.str();
}

// synth + ingest into dir/cache, returning the cache path.
fs::path make_cache(const fs::path& dir, std::uint64_t seed) {
    write_file(dir / "synth.toml", small_synth_toml(seed));
    REQUIRE(run_cli({"synth", "--config", (dir / "synth.toml").string(),
                     "--out", (dir / "corpus").string()}) == 0);
    REQUIRE(run_cli({"ingest", "--ratings", (dir / "corpus" / "ratings-*.tsv").string(),
                     "--notes", (dir / "corpus" / "notes-00000.tsv").string(),
                     "--status", (dir / "corpus" / "noteStatusHistory-00000.tsv").string(),
                     "--annotations", (dir / "corpus" / "annotations.csv").string(),
                     "--out", (dir / "cache").string()}) == 0);
    return dir / "cache";
}

} // namespace

TEST_CASE("bad invocations exit with usage code") {
    CHECK(run_cli({}) == 1);
    CHECK(run_cli({"jaccard"}) == 1);
    CHECK(run_cli({"concentration", "--out", "nowhere.json"}) == 1);
    CHECK(run_cli({"--version"}) == 0);
    CHECK(run_cli({"--help"}) == 0);
}

TEST_CASE("config file errors exit with usage code") {
    auto dir = scratch("config_errors");

    write_file(dir / "no_seed.toml", "n_raters = 50\n");
    CHECK(run_cli({"synth", "--config", (dir / "no_seed.toml").string(),
                   "--out", (dir / "out").string()}) == 1);

    write_file(dir / "unknown.toml", "seed = 1\nn_ratersz = 50\n");
    CHECK(run_cli({"synth", "--config", (dir / "unknown.toml").string(),
                   "--out", (dir / "out").string()}) == 1);

    write_file(dir / "junk.toml", "seed = 1\nnoise = lots\n");
    CHECK(run_cli({"synth", "--config", (dir / "junk.toml").string(),
                   "--out", (dir / "out").string()}) == 1);

    write_file(dir / "noeq.toml", "seed\n");
    CHECK(run_cli({"synth", "--config", (dir / "noeq.toml").string(),
                   "--out", (dir / "out").string()}) == 1);
}

TEST_CASE("synth writes the corpus files deterministically") {
    auto dir = scratch("synth_cmd");
    write_file(dir / "synth.toml", small_synth_toml(31));

    REQUIRE(run_cli({"synth", "--config", (dir / "synth.toml").string(),
                     "--out", (dir / "a").string()}) == 0);
    REQUIRE(run_cli({"synth", "--config", (dir / "synth.toml").string(),
                     "--out", (dir / "b").string()}) == 0);

    for (const char* name : {"ratings-00000.tsv", "notes-00000.tsv",
                             "noteStatusHistory-00000.tsv", "annotations.csv",
                             "ground_truth.json"}) {
        CAPTURE(name);
        REQUIRE(fs::exists(dir / "a" / name));
        CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
    }
    CHECK(fs::exists(dir / "a" / "manifest.json"));

    auto manifest = json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest.at("seeds").at("seed") == 31);
    CHECK(manifest.at("outputs").size() == 5);
}

TEST_CASE("ingest expands globs, dedups and honors lenient mode") {
    auto dir = scratch("ingest_cmd");
    write_file(dir / "synth.toml", small_synth_toml(32));
    REQUIRE(run_cli({"synth", "--config", (dir / "synth.toml").string(),
                     "--out", (dir / "corpus").string()}) == 0);

    // A second part that repeats the first data row: the glob must pick it
    // up and dedup must drop the duplicate.
    std::string ratings = slurp(dir / "corpus" / "ratings-00000.tsv");
    auto nl1 = ratings.find('\n');
    auto nl2 = ratings.find('\n', nl1 + 1);
    write_file(dir / "corpus" / "ratings-00001.tsv", ratings.substr(0, nl2 + 1));

    REQUIRE(run_cli({"ingest", "--ratings", (dir / "corpus" / "ratings-*.tsv").string(),
                     "--notes", (dir / "corpus" / "notes-00000.tsv").string(),
                     "--status", (dir / "corpus" / "noteStatusHistory-00000.tsv").string(),
                     "--annotations", (dir / "corpus" / "annotations.csv").string(),
                     "--out", (dir / "cache").string()}) == 0);

    auto stats = json::parse(slurp(dir / "cache" / "corpus_stats.json"));
    std::size_t expected = std::count(ratings.begin(), ratings.end(), '\n') - 1;
    CHECK(stats.at("n_ratings") == expected);
    CHECK(stats.at("n_notes") == 300);

    auto manifest = json::parse(slurp(dir / "cache" / "manifest.json"));
    CHECK(manifest.at("inputs").size() == 5); // two rating parts + three tables

    // Glob with no match is a data error.
    CHECK(run_cli({"ingest", "--ratings", (dir / "corpus" / "zzz-*.tsv").string(),
                   "--notes", (dir / "corpus" / "notes-00000.tsv").string(),
                   "--status", (dir / "corpus" / "noteStatusHistory-00000.tsv").string(),
                   "--out", (dir / "cache2").string()}) == 2);

    // A malformed row fails strict ingest and is skipped under --lenient.
    write_file(dir / "corpus" / "ratings-00001.tsv",
               ratings.substr(0, nl2 + 1) + "busted row\n");
    CHECK(run_cli({"ingest", "--ratings", (dir / "corpus" / "ratings-*.tsv").string(),
                   "--notes", (dir / "corpus" / "notes-00000.tsv").string(),
                   "--status", (dir / "corpus" / "noteStatusHistory-00000.tsv").string(),
                   "--out", (dir / "cache3").string()}) == 2);
    CHECK(run_cli({"--lenient", "ingest", "--ratings",
                   (dir / "corpus" / "ratings-*.tsv").string(),
                   "--notes", (dir / "corpus" / "notes-00000.tsv").string(),
                   "--status", (dir / "corpus" / "noteStatusHistory-00000.tsv").string(),
                   "--out", (dir / "cache4").string()}) == 0);
}

TEST_CASE("concentration command writes report and lorenz curve") {
    auto dir = scratch("conc_cmd");
    auto cache = make_cache(dir, 33);

    REQUIRE(run_cli({"concentration", "--cache", cache.string(), "--per-year",
                     "--out", (dir / "conc" / "report.json").string()}) == 0);

    auto report = json::parse(slurp(dir / "conc" / "report.json"));
    CHECK(report.at("n_raters") == 200);
    CHECK(report.at("gini").get<double>() > 0.0);
    CHECK(report.at("fit").contains("alpha"));
    CHECK(report.at("lr_test").contains("p_value"));
    CHECK(report.at("gini_by_year").size() >= 1);
    CHECK(report.at("manifest") == "manifest.json");
    CHECK(first_line(dir / "conc" / "lorenz.csv") == "cum_raters,cum_ratings");
    CHECK(fs::exists(dir / "conc" / "manifest.json"));
}

TEST_CASE("selectivity and polarization commands write their sidecars") {
    auto dir = scratch("selpol_cmd");
    auto cache = make_cache(dir, 34);

    REQUIRE(run_cli({"selectivity", "--cache", cache.string(), "--seed", "9",
                     "--out", (dir / "sel" / "report.json").string()}) == 0);
    auto sel = json::parse(slurp(dir / "sel" / "report.json"));
    CHECK(sel.at("fit").at("n_asy").get<double>() > 0.0);
    CHECK(sel.at("null_fits").size() == 1);
    CHECK(first_line(dir / "sel" / "points_observed.csv") == "r,n_authors");
    CHECK(first_line(dir / "sel" / "points_null.csv") == "r,n_authors");

    // Same seed, same report; different seed, different null fit.
    REQUIRE(run_cli({"selectivity", "--cache", cache.string(), "--seed", "9",
                     "--out", (dir / "sel2" / "report.json").string()}) == 0);
    CHECK(slurp(dir / "sel" / "report.json") == slurp(dir / "sel2" / "report.json"));

    REQUIRE(run_cli({"polarization", "--cache", cache.string(), "--seed", "9",
                     "--min-ratings", "5",
                     "--out", (dir / "pol" / "report.json").string()}) == 0);
    auto pol = json::parse(slurp(dir / "pol" / "report.json"));
    CHECK(pol.at("n_raters_eligible") == 200);
    CHECK(pol.at("deciles").size() == 10);
    CHECK(pol.at("stats").contains("skewness"));
    CHECK(first_line(dir / "pol" / "leaning_per_rater.csv") == "rater_id,L,n_ratings,decile");
    CHECK(first_line(dir / "pol" / "deciles.csv") ==
          "decile,mu1,sigma1,w1,mu2,sigma2,w2,ashman_d");

    // Nobody clears the default 30-rating floor in this corpus.
    CHECK(run_cli({"polarization", "--cache", cache.string(), "--seed", "9",
                   "--out", (dir / "pol30" / "report.json").string()}) == 2);
}

TEST_CASE("score command honors the config file") {
    auto dir = scratch("score_cmd");
    auto cache = make_cache(dir, 35);

    REQUIRE(run_cli({"score", "--cache", cache.string(),
                     "--out", (dir / "statuses.csv").string()}) == 0);
    std::string csv = slurp(dir / "statuses.csv");
    CHECK(first_line(dir / "statuses.csv") ==
          "note_id,status,note_intercept,abs_factor,n_ratings");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 301); // header + one per note

    // An unreachable CRH bar empties the helpful bucket.
    write_file(dir / "strict.toml", "crh_threshold = 99.0\nseed = 3\n");
    REQUIRE(run_cli({"score", "--cache", cache.string(),
                     "--config", (dir / "strict.toml").string(),
                     "--out", (dir / "strict.csv").string()}) == 0);
    CHECK(slurp(dir / "strict.csv").find(",CRH,") == std::string::npos);

    write_file(dir / "bad.toml", "epochs = -3\n");
    CHECK(run_cli({"score", "--cache", cache.string(),
                   "--config", (dir / "bad.toml").string(),
                   "--out", (dir / "bad.csv").string()}) == 1);

    auto manifest = json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest.at("config_digests").contains("scorer"));
}

TEST_CASE("counterfactual command writes the ladder outputs") {
    auto dir = scratch("cf_cmd");
    auto cache = make_cache(dir, 36);

    CHECK(run_cli({"counterfactual", "--cache", cache.string(), "--ks", "5,10",
                   "--out", (dir / "cf" / "stability.json").string()}) == 1);
    CHECK(run_cli({"counterfactual", "--cache", cache.string(), "--ks", "0,ten",
                   "--out", (dir / "cf" / "stability.json").string()}) == 1);

    REQUIRE(run_cli({"counterfactual", "--cache", cache.string(), "--ks", "0,5,20",
                     "--out", (dir / "cf" / "stability.json").string()}) == 0);
    auto stab = json::parse(slurp(dir / "cf" / "stability.json"));
    CHECK(stab.at("scenarios").size() == 3);
    CHECK(stab.at("scenarios").at(0).at("k") == 0);
    CHECK(stab.at("scenarios").at(0).at("by_status").at("CRH").at("jaccard") == 1.0);
    CHECK(stab.at("config_digest").get<std::string>().size() == 16);

    std::string heatmap = slurp(dir / "cf" / "heatmap.csv");
    CHECK(first_line(dir / "cf" / "heatmap.csv") == "k,status,n_notes,jaccard,gained,lost");
    CHECK(std::count(heatmap.begin(), heatmap.end(), '\n') == 1 + 3 * 3);
    for (const char* name : {"statuses_k0.csv", "statuses_k5.csv", "statuses_k20.csv"})
        CHECK(fs::exists(dir / "cf" / name));
}

TEST_CASE("reproduce emits the full report set byte-identically") {
    auto dir = scratch("reproduce_cmd");
    auto cache = make_cache(dir, 37);

    std::vector<std::string> base{"reproduce", "--cache", cache.string(),
                                  "--seed", "21", "--min-ratings", "5",
                                  "--ks", "0,5,20"};
    auto run1 = base;
    run1.insert(run1.end(), {"--out", (dir / "rep1").string()});
    auto run2 = base;
    run2.insert(run2.end(), {"--out", (dir / "rep2").string()});
    REQUIRE(run_cli(run1) == 0);
    REQUIRE(run_cli(run2) == 0);

    const char* names[] = {"concentration.json", "lorenz.csv",
                           "selectivity.json", "points_observed.csv", "points_null.csv",
                           "polarization.json", "leaning_per_rater.csv", "deciles.csv",
                           "statuses.csv", "stability.json", "heatmap.csv",
                           "paper_report.json"};
    for (const char* name : names) {
        CAPTURE(name);
        REQUIRE(fs::exists(dir / "rep1" / name));
        CHECK(slurp(dir / "rep1" / name) == slurp(dir / "rep2" / name));
    }

    auto paper = json::parse(slurp(dir / "rep1" / "paper_report.json"));
    for (const char* key : {"alpha", "x_min", "D", "R", "p", "G", "G_by_year"})
        CHECK(paper.at("concentration").contains(key));
    CHECK(paper.at("selectivity").contains("tau"));
    for (const char* key : {"mu_L", "M_L", "sigma_L", "gamma_L", "decile_ashman_d"})
        CHECK(paper.at("polarization").contains(key));
    CHECK(paper.at("scorer").at("counts").contains("CRH"));
    CHECK(paper.at("counterfactual").at("jaccard").size() == 3);
    CHECK(paper.at("counterfactual").at("jaccard").at(0).at("CRH") == 1.0);
}

TEST_CASE("reproduce without annotations reports null sections") {
    auto dir = scratch("reproduce_noann");
    write_file(dir / "synth.toml", small_synth_toml(38));
    REQUIRE(run_cli({"synth", "--config", (dir / "synth.toml").string(),
                     "--out", (dir / "corpus").string()}) == 0);
    REQUIRE(run_cli({"ingest", "--ratings", (dir / "corpus" / "ratings-*.tsv").string(),
                     "--notes", (dir / "corpus" / "notes-00000.tsv").string(),
                     "--status", (dir / "corpus" / "noteStatusHistory-00000.tsv").string(),
                     "--out", (dir / "cache").string()}) == 0);

    REQUIRE(run_cli({"reproduce", "--cache", (dir / "cache").string(), "--seed", "3",
                     "--ks", "0,5", "--out", (dir / "rep").string()}) == 0);
    auto paper = json::parse(slurp(dir / "rep" / "paper_report.json"));
    CHECK(paper.at("selectivity").is_null());
    CHECK(paper.at("polarization").is_null());
    CHECK(paper.at("concentration").contains("G"));
    CHECK_FALSE(fs::exists(dir / "rep" / "polarization.json"));
}

TEST_SUITE_END();
