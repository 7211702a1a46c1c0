#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "mtb/csv.hpp"
#include "mtb/generators.hpp"
#include "mtb/grid_field.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using namespace mtb;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

fs::path scratch(const std::string& name)
{
    const auto p = fs::path(MTB_SCRATCH_DIR) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Runs the mtb binary with the given arguments, capturing both streams.
Run run_cli(const std::string& args, const std::string& env = "")
{
    const auto dir = fs::path(MTB_SCRATCH_DIR);
    fs::create_directories(dir);
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd = env + " '" + std::string(MTB_CLI_PATH) + "' " + args + " >'" + out.string() + "' 2>'" +
                            err.string() + "'";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

/// FNV-1a hash of every regular file below a directory, keyed by relative path.
std::map<std::string, std::uint64_t> hash_tree(const fs::path& root)
{
    std::map<std::string, std::uint64_t> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file())
            continue;
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : slurp(e.path()))
            h = (h ^ c) * 1099511628211ull;
        out[fs::relative(e.path(), root).string()] = h;
    }
    return out;
}

std::size_t count_files(const fs::path& dir, const std::string& ext)
{
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir))
        n += e.path().extension() == ext;
    return n;
}

CsvTable csv(const fs::path& p)
{
    return CsvTable::parse(slurp(p));
}

/// Small base field that keeps the noise benchmark fast.
fs::path small_field(const fs::path& dir)
{
    const auto p = dir / "base.mtb";
    write_field(vortex_street_field({16, 12, 1}, 2), p.string());
    return p;
}

const std::string kSmallBench = "--steps 4 --repeats 2 --taus 0.05,0.15 --methods edit,path";

} // namespace

TEST_CASE("gen instability writes the requested number of fields deterministically")
{
    const auto a = scratch("gen_inst_a");
    const auto b = scratch("gen_inst_b");
    REQUIRE(run_cli("gen instability --seed 7 --count 2 --out " + a.string()).code == 0);
    CHECK(count_files(a, ".mtb") == 2);
    const auto manifest = csv(a / "manifest.csv");
    CHECK(manifest.rows.size() == 2);
    CHECK(manifest.header == std::vector<std::string>{"index", "seed", "file"});
    for (const auto& row : manifest.rows)
        CHECK(load_field((a / row[2]).string()).size() == 64 * 64);

    REQUIRE(run_cli("gen instability --count 2 --out " + b.string(), "MTB_SEED=7").code == 0);
    CHECK(hash_tree(a) == hash_tree(b));

    const auto c = scratch("gen_inst_c");
    REQUIRE(run_cli("gen instability --seed 8 --count 2 --out " + c.string()).code == 0);
    CHECK(hash_tree(a) != hash_tree(c));
}

TEST_CASE("gen series writes forty fields with increasing noise levels")
{
    const auto a = scratch("gen_series_a");
    const auto b = scratch("gen_series_b");
    const std::string args = " --tau 0.05 --eps-max 0.05 --steps 40 --seed 5";
    REQUIRE(run_cli("gen series --out " + a.string() + args).code == 0);
    CHECK(count_files(a, ".mtb") == 40);
    const auto manifest = csv(a / "manifest.csv");
    REQUIRE(manifest.rows.size() == 40);
    CHECK(std::stod(manifest.rows.front()[1]) == 0.0);
    CHECK(std::stod(manifest.rows.back()[1]) == doctest::Approx(0.05));
    for (std::size_t i = 1; i < manifest.rows.size(); ++i)
        CHECK(std::stod(manifest.rows[i][1]) > std::stod(manifest.rows[i - 1][1]));
    CHECK(load_field((a / manifest.rows.front()[2]).string()).bitwise_equal(vortex_street_field()));

    REQUIRE(run_cli("gen series --out " + b.string() + args).code == 0);
    CHECK(hash_tree(a) == hash_tree(b));
}

TEST_CASE("gen gaussian and text encoding")
{
    const auto d = scratch("gen_gauss");
    const auto f = d / "g.mtb";
    REQUIRE(run_cli("gen gaussian --dims 9,9 --peak 4,4,0,1,2 --encoding text --out " + f.string()).code == 0);
    CHECK(slurp(f).rfind("MTB1 9 9 1", 0) == 0);
    const auto field = load_field(f.string());
    CHECK(field[4 * 9 + 4] == 1.0);
    CHECK(run_cli("gen gaussian --dims 9,9 --out " + f.string()).code == 2);
    CHECK(run_cli("gen clouds --out " + f.string()).code == 2);
}

TEST_CASE("tree of a monotone ramp has two nodes")
{
    const auto d = scratch("tree_ramp");
    const auto f = d / "ramp.mtb";
    std::ofstream(f) << "MTB1 3 1 1 1 1 1 text\n0 1 2\n";
    const auto r = run_cli("tree --simplify 0 --field " + f.string());
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["direction"] == "join");
    REQUIRE(j["nodes"].size() == 2);
    CHECK(j["nodes"][0]["vertex"] == 0);
    CHECK(j["nodes"][0]["type"] == "leaf");
    CHECK(j["nodes"][1]["vertex"] == 2);
    CHECK(j["parent"] == nlohmann::json::array({1, -1}));

    const auto split = nlohmann::json::parse(run_cli("tree --simplify 0 --dir split --field " + f.string()).out);
    CHECK(split["nodes"][0]["type"] == "root");
    CHECK(split["nodes"][1]["vertex"] == 2);
    CHECK(split["nodes"][1]["type"] == "leaf");
}

TEST_CASE("invalid input exits with code 2")
{
    const auto d = scratch("bad_input");
    CHECK(run_cli("tree --field " + (d / "missing.mtb").string()).code == 2);
    std::ofstream(d / "short.mtb") << "MTB1 3 1 1 1 1 1 text\n0 1\n";
    const auto r = run_cli("tree --field " + (d / "short.mtb").string());
    CHECK(r.code == 2);
    CHECK(r.err.find("payload length mismatch") != std::string::npos);
    CHECK(run_cli("tree --field " + (d / "short.mtb").string() + " --bogus").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("noise-bench --steps 1 --out " + d.string()).code == 2);
    CHECK(run_cli("noise-bench --methods fastest --out " + d.string()).code == 2);
}

TEST_CASE("match reproduces the regrouping example through the command line")
{
    const auto d = scratch("match_fixture");
    const auto t1 = d / "t1.json";
    const auto t2 = d / "t2.json";
    std::ofstream(t1) << tree_to_json(fixture::horizontal_first());
    std::ofstream(t2) << tree_to_json(fixture::horizontal_second());
    const auto r = run_cli("match --method path --look-ahead 4 " + t1.string() + " " + t2.string());
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["method"] == "path");
    std::set<std::pair<int, int>> pairs;
    for (const auto& p : j["pairs"])
        pairs.insert({p[0].get<int>(), p[1].get<int>()});
    for (int leaf : {1, 2, 3})
        CHECK(pairs.count(std::make_pair(leaf, leaf)) == 1);

    const auto self = nlohmann::json::parse(run_cli("match --method edit " + t1.string() + " " + t1.string()).out);
    CHECK(self["distance"] == 0.0);
    CHECK(self["unmatched1"].empty());

    const auto join = d / "join.json";
    const auto ramp = d / "ramp.mtb";
    std::ofstream(ramp) << "MTB1 3 1 1 1 1 1 text\n0 1 2\n";
    REQUIRE(run_cli("tree --simplify 0 --field " + ramp.string() + " --out " + join.string()).code == 0);
    const auto mismatch = run_cli("match " + join.string() + " " + t1.string());
    CHECK(mismatch.code != 0);
    CHECK(mismatch.code != 2);
    CHECK(run_cli("match --method fastest " + t1.string() + " " + t1.string()).code == 2);
}

TEST_CASE("track writes counts, paths, histograms and similarity tables")
{
    const auto series = scratch("track_series");
    REQUIRE(run_cli("gen series --dims 16,12 --steps 5 --seed 3 --out " + series.string() + " --field " +
                small_field(series).string())
                .code == 0);
    const auto out = scratch("track_out");
    REQUIRE(run_cli("track --svg --manifest " + (series / "manifest.csv").string() + " --out " + out.string()).code == 0);
    const auto counts = csv(out / "matched_counts.csv");
    CHECK(counts.header == std::vector<std::string>{"step", "method", "pairs", "total", "leaf_pairs", "saddle_pairs"});
    CHECK(counts.rows.size() == 4 * 4);
    for (const auto& row : counts.rows)
        CHECK(std::stoi(row[2]) == std::stoi(row[4]) + std::stoi(row[5]));
    const auto paths = nlohmann::json::parse(slurp(out / "paths.json"));
    CHECK(paths["steps"] == 5);
    CHECK(paths["methods"].size() == 4);
    for (const char* f : {"similarity_raw.csv", "similarity_scaled.csv", "similarity_heatmap.svg", "matched_counts.svg",
                          "histogram_edit.csv", "histogram_path.svg"})
        CHECK_MESSAGE(fs::exists(out / f), f);
    const auto raw = csv(out / "similarity_raw.csv");
    for (std::size_t i = 0; i < raw.rows.size(); ++i)
        CHECK(raw.rows[i][i + 1] == "0");

    CHECK(run_cli("track --out " + out.string() + " " + (series / "step_000.mtb").string()).code == 2);
}

TEST_CASE("noise-bench is deterministic across runs and worker counts")
{
    const auto d = scratch("bench_det");
    const auto field = small_field(d);
    const auto a = d / "a";
    const auto b = d / "b";
    const std::string base = "noise-bench " + kSmallBench + " --seed 9 --field " + field.string();
    const auto r = run_cli(base + " --jobs 1 --out " + a.string());
    REQUIRE(r.code == 0);
    CHECK(r.err.find("4 cells (0 reused), 8 rows") != std::string::npos);
    REQUIRE(run_cli(base + " --jobs 3 --out " + b.string()).code == 0);
    CHECK(hash_tree(a) == hash_tree(b));

    const auto raw = csv(a / "stability_raw.csv");
    CHECK(raw.header == std::vector<std::string>{"method", "tau", "repeat", "score"});
    CHECK(raw.rows.size() == 8);
    CHECK(csv(a / "stability_agg.csv").rows.size() == 4);
}

TEST_CASE("noise-bench resumes after an interruption with identical output")
{
    const auto d = scratch("bench_resume");
    const auto field = small_field(d);
    const auto full = d / "full";
    const auto cut = d / "cut";
    const std::string base = "noise-bench " + kSmallBench + " --seed 2 --field " + field.string();
    REQUIRE(run_cli(base + " --out " + full.string()).code == 0);
    REQUIRE(run_cli(base + " --out " + cut.string()).code == 0);

    // Simulate a run killed part-way: some cells missing, one half written, no final tables.
    int removed = 0;
    for (const auto& e : fs::directory_iterator(cut / "cells")) {
        if (e.path().extension() == ".csv" && removed++ % 2 == 0)
            fs::remove(e.path());
    }
    for (const auto& e : fs::directory_iterator(cut / "cells")) {
        if (e.path().extension() == ".csv") {
            const auto text = slurp(e.path());
            std::ofstream(e.path(), std::ios::trunc) << text.substr(0, text.size() / 2);
            break;
        }
    }
    fs::remove(cut / "stability_raw.csv");
    fs::remove(cut / "stability_agg.csv");

    const auto r = run_cli(base + " --resume --jobs 2 --out " + cut.string());
    REQUIRE(r.code == 0);
    CHECK(r.err.find("reused") != std::string::npos);
    CHECK(r.err.find("(0 reused)") == std::string::npos);
    CHECK(slurp(cut / "stability_raw.csv") == slurp(full / "stability_raw.csv"));
    CHECK(slurp(cut / "stability_agg.csv") == slurp(full / "stability_agg.csv"));

    CHECK(run_cli(base + " --seed 3 --resume --out " + cut.string()).code == 2);
}

TEST_CASE("noise-bench default configuration has two hundred rows")
{
    const auto d = scratch("bench_default");
    const auto field = small_field(d);
    REQUIRE(run_cli("noise-bench --steps 2 --field " + field.string() + " --out " + (d / "out").string()).code == 0);
    const auto raw = csv(d / "out" / "stability_raw.csv");
    CHECK(raw.rows.size() == 200);
    std::set<std::string> methods;
    for (const auto& row : raw.rows)
        methods.insert(row[0]);
    CHECK(methods.size() == 4);
}

TEST_CASE("noise-bench without noise scores one everywhere and reads config files")
{
    const auto d = scratch("bench_zero");
    const auto field = small_field(d);
    const auto cfg = d / "zero.cfg";
    std::ofstream(cfg) << "# no noise\neps_max = 0\nsteps = 3\nrepeats = 1\ntaus = 0.15\n";
    REQUIRE(run_cli("noise-bench --svg --config " + cfg.string() + " --field " + field.string() + " --out " +
                (d / "out").string())
                .code == 0);
    const auto raw = csv(d / "out" / "stability_raw.csv");
    CHECK(raw.rows.size() == 4);
    for (const auto& row : raw.rows)
        CHECK(std::stod(row[3]) == 1.0);
    CHECK(fs::exists(d / "out" / "stability_box.svg"));

    std::ofstream(d / "bad.cfg") << "colour = blue\n";
    CHECK(run_cli("noise-bench --config " + (d / "bad.cfg").string() + " --out " + (d / "x").string()).code == 2);
}

TEST_CASE("instability-bench reports one row per seed and method")
{
    const auto d = scratch("inst_bench");
    const auto r = run_cli("instability-bench --seeds 3 --amplitude 0 --out " + d.string());
    REQUIRE(r.code == 0);
    const auto report = csv(d / "instability_report.csv");
    CHECK(report.header == std::vector<std::string>{"seed_index", "seed", "method", "features", "correct", "expected"});
    CHECK(report.rows.size() == 3 * 4);
    for (const auto& row : report.rows)
        CHECK(row[5] == "1");
    CHECK(r.out.find("edit: expected pairing missed on 0 of 3 seeds") != std::string::npos);
}

TEST_CASE("report renders frozen charts")
{
    const auto d = scratch("report");
    CHECK(run_cli("report " + d.string()).code == 2);
    const fs::path golden(MTB_GOLDEN_DIR);
    fs::copy_file(golden / "stability_agg.csv", d / "stability_agg.csv");
    fs::copy_file(golden / "similarity_scaled.csv", d / "similarity_scaled.csv");
    REQUIRE(run_cli("report " + d.string()).code == 0);
    CHECK(slurp(d / "stability_box.svg") == slurp(golden / "stability_box.svg"));
    CHECK(slurp(d / "similarity_heatmap.svg") == slurp(golden / "similarity_heatmap.svg"));
}
