#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "mtb/csv.hpp"
#include "mtb/errors.hpp"
#include "mtb/generators.hpp"
#include "mtb/instability.hpp"
#include "mtb/noise.hpp"
#include "mtb/rng.hpp"
#include "mtb/stability.hpp"
#include "mtb/svg.hpp"
#include "mtb/tracking.hpp"

namespace fs = std::filesystem;

namespace mtb::cli {
namespace {

/// Runs fn(0..count-1) on up to `jobs` threads. The first exception thrown
/// by any job is rethrown after all threads have joined.
template <class Fn>
void run_parallel(int jobs, std::size_t count, Fn&& fn)
{
    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = count;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    if (error)
        std::rethrow_exception(error);
}

std::string numbered(const std::string& dir, const char* stem, int index)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03d.mtb", stem, index);
    return (fs::path(dir) / buf).string();
}

void make_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

SweepDirection direction_arg(const std::string& s)
{
    try {
        return parse_direction(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

FieldEncoding encoding_arg(const std::string& s)
{
    if (s == "f64le")
        return FieldEncoding::F64LE;
    if (s == "text")
        return FieldEncoding::Text;
    throw UsageError("unknown encoding '" + s + "' (expected f64le or text)");
}

Dims dims_arg(const std::string& s)
{
    const auto v = parse_double_list("dims", s);
    if (v.size() < 2 || v.size() > 3)
        throw UsageError("dims expects nx,ny[,nz]");
    Dims d{static_cast<std::int64_t>(v[0]), static_cast<std::int64_t>(v[1]),
           v.size() == 3 ? static_cast<std::int64_t>(v[2]) : 1};
    if (d.nx < 1 || d.ny < 1 || d.nz < 1)
        throw UsageError("dims must be positive");
    return d;
}

GridField base_field(const ExperimentConfig& c)
{
    return c.field.empty() ? vortex_street_field() : load_field(c.field);
}

std::string percent_label(double tau)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g%%", tau * 100.0);
    return buf;
}

MergeTree load_tree(const std::string& path)
{
    const std::string text = read_text_file(path);
    try {
        return tree_from_json(text);
    } catch (const std::exception& e) {
        throw UsageError("tree file '" + path + "': " + e.what());
    }
}

// ---- SVG rendering from emitted CSV tables ---------------------------------

std::string stability_svg(const CsvTable& t)
{
    std::vector<BoxStats> boxes;
    const auto m = t.column("method"), tau = t.column("tau"), med = t.column("median"), q1 = t.column("q1"),
               q3 = t.column("q3"), lo = t.column("min"), hi = t.column("max");
    for (const auto& r : t.rows) {
        boxes.push_back({percent_label(parse_double("tau", r[tau])), r[m], parse_double("median", r[med]),
                         parse_double("q1", r[q1]), parse_double("q3", r[q3]), parse_double("min", r[lo]),
                         parse_double("max", r[hi])});
    }
    std::stable_sort(boxes.begin(), boxes.end(), [](const BoxStats& a, const BoxStats& b) {
        return std::stod(a.group) < std::stod(b.group);
    });
    return svg_box_plot(boxes, "Tracking stability by noise fraction");
}

std::string matched_counts_svg(const CsvTable& t)
{
    const auto m = t.column("method"), leaf = t.column("leaf_pairs"), saddle = t.column("saddle_pairs");
    std::vector<BarGroup> bars;
    for (const auto& r : t.rows) {
        auto it = std::find_if(bars.begin(), bars.end(), [&](const BarGroup& b) { return b.label == r[m]; });
        if (it == bars.end()) {
            bars.push_back({r[m], {0.0, 0.0}});
            it = bars.end() - 1;
        }
        it->values[0] += parse_double("leaf_pairs", r[leaf]);
        it->values[1] += parse_double("saddle_pairs", r[saddle]);
    }
    return svg_stacked_bars(bars, {"leaf pairs", "saddle pairs"}, "Matched node pairs over all steps");
}

std::string similarity_svg(const CsvTable& t)
{
    std::vector<std::string> labels(t.header.begin() + 1, t.header.end());
    std::vector<std::vector<std::optional<double>>> cells;
    for (const auto& r : t.rows) {
        std::vector<std::optional<double>> row;
        for (std::size_t j = 1; j < r.size(); ++j)
            row.push_back(r[j].empty() ? std::nullopt : std::optional<double>(parse_double("similarity", r[j])));
        cells.push_back(std::move(row));
    }
    return svg_heat_map(labels, cells, "Shared tracked pairs (%)");
}

std::string histogram_svg(const CsvTable& t, const std::string& method)
{
    const auto len = t.column("length"), count = t.column("count");
    std::map<int, int> bins;
    for (const auto& r : t.rows)
        bins[static_cast<int>(parse_int("length", r[len]))] = static_cast<int>(parse_int("count", r[count]));
    return svg_histogram(bins, "Tracking path lengths: " + method);
}

void write_csv(const std::string& dir, const std::string& name, const CsvTable& t)
{
    write_text_file((fs::path(dir) / name).string(), t.to_string());
}

// ---- noise bench cells ---------------------------------------------------------

std::string cell_path(const std::string& dir, std::size_t tau_index, int repeat)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "cell_t%02zu_r%03d.csv", tau_index, repeat);
    return (fs::path(dir) / "cells" / buf).string();
}

std::string config_fingerprint(const ExperimentConfig& c)
{
    std::string s = "field=" + c.field + "\ndirection=" + to_string(c.direction) + "\nsimplify=" + csv_number(c.simplify) +
                    "\nmethods=";
    for (Method m : c.methods)
        s += std::string(to_string(m)) + ",";
    s += "\nlook_ahead=" + std::to_string(c.look_ahead) + "\ntaus=";
    for (double t : c.taus)
        s += csv_number(t) + ",";
    s += "\neps_max=" + csv_number(c.eps_max) + "\nsteps=" + std::to_string(c.steps) +
         "\nrepeats=" + std::to_string(c.repeats) + "\nseed=" + std::to_string(c.seed) + "\n";
    return s;
}

std::optional<std::vector<StabilityRow>> read_cell(const std::string& path, const ExperimentConfig& c)
{
    if (!fs::exists(path))
        return std::nullopt;
    try {
        const auto t = CsvTable::parse(read_text_file(path));
        if (t.rows.size() != c.methods.size())
            return std::nullopt;
        std::vector<StabilityRow> rows;
        for (const auto& r : t.rows) {
            rows.push_back({parse_method(r[t.column("method")]), parse_double("tau", r[t.column("tau")]),
                            static_cast<int>(parse_int("repeat", r[t.column("repeat")])),
                            parse_double("score", r[t.column("score")])});
        }
        return rows;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

CsvTable rows_table(const std::vector<StabilityRow>& rows)
{
    CsvTable t{{"method", "tau", "repeat", "score"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({to_string(r.method), csv_number(r.tau), std::to_string(r.repeat), csv_number(r.score)});
    return t;
}

} // namespace

int cmd_gen(const GenArgs& a)
{
    if (a.out.empty())
        throw UsageError("--out is required");
    const FieldEncoding enc = encoding_arg(a.encoding);
    if (a.kind == "instability") {
        if (a.count < 1)
            throw UsageError("--count must be positive");
        if (a.amplitude < 0.0)
            throw UsageError("--amplitude must be non-negative");
        make_dir(a.out);
        CsvTable manifest{{"index", "seed", "file"}, {}};
        for (int k = 0; k < a.count; ++k) {
            const std::uint64_t s = derive_seed(a.seed, static_cast<std::uint64_t>(k));
            const auto f = instability_field({a.amplitude, s}, a.grid);
            const std::string path = numbered(a.out, "instability", k);
            write_field(f.field, path, enc);
            manifest.rows.push_back({std::to_string(k), std::to_string(s), fs::path(path).filename().string()});
        }
        write_csv(a.out, "manifest.csv", manifest);
    } else if (a.kind == "gaussian") {
        if (a.peaks.empty())
            throw UsageError("gen gaussian needs at least one --peak x,y,z,height,sigma");
        std::vector<GaussianPeakSpec> peaks;
        for (const auto& p : a.peaks) {
            const auto v = parse_double_list("peak", p);
            if (v.size() != 5)
                throw UsageError("--peak expects x,y,z,height,sigma");
            if (v[4] <= 0.0)
                throw UsageError("peak sigma must be positive");
            peaks.push_back({{v[0], v[1], v[2]}, v[3], v[4]});
        }
        write_field(gaussian_mixture(dims_arg(a.dims.empty() ? "64,64,1" : a.dims), peaks), a.out, enc);
    } else if (a.kind == "vortex") {
        write_field(vortex_street_field(dims_arg(a.dims.empty() ? "48,32,1" : a.dims)), a.out, enc);
    } else if (a.kind == "series") {
        if (!(a.tau > 0.0 && a.tau <= 1.0))
            throw UsageError("--tau must lie in (0, 1]");
        if (a.eps_max < 0.0 || a.eps_max > 1.0)
            throw UsageError("--eps-max must lie in [0, 1]");
        if (a.steps < 2)
            throw UsageError("--steps must be at least 2");
        const GridField base = a.field.empty() ? vortex_street_field() : load_field(a.field);
        const auto series = epsilon_series(base, direction_arg(a.direction), a.tau, a.eps_max, a.steps, a.seed);
        make_dir(a.out);
        CsvTable manifest{{"step", "epsilon", "file"}, {}};
        for (int i = 0; i < series.size(); ++i) {
            const std::string path = numbered(a.out, "step", i);
            write_field(series.fields[static_cast<std::size_t>(i)], path, enc);
            manifest.rows.push_back({std::to_string(i), csv_number(series.epsilons[static_cast<std::size_t>(i)]),
                                     fs::path(path).filename().string()});
        }
        write_csv(a.out, "manifest.csv", manifest);
    } else {
        throw UsageError("unknown field kind '" + a.kind + "' (expected instability, gaussian, vortex or series)");
    }
    return 0;
}

int cmd_tree(const TreeArgs& a)
{
    if (a.simplify < 0.0 || a.simplify > 1.0)
        throw UsageError("--simplify must lie in [0, 1]");
    const SweepDirection dir = direction_arg(a.direction);
    const GridField f = load_field(a.field);
    MergeTree t = compute_merge_tree(f, dir);
    if (f.range() > 0.0)
        t = simplify(t, a.simplify, f.range());
    const std::string json = tree_to_json(t);
    if (a.out.empty())
        std::cout << json;
    else
        write_text_file(a.out, json);
    return 0;
}

int cmd_match(const MatchArgs& a)
{
    if (a.look_ahead < 0)
        throw UsageError("--look-ahead must be non-negative");
    Method method;
    try {
        method = parse_method(a.method);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const MergeTree t1 = load_tree(a.tree1);
    const MergeTree t2 = load_tree(a.tree2);
    const Matching m = match_trees(t1, t2, method, {a.look_ahead});
    const std::string json = matching_to_json(m, t1, t2);
    if (a.out.empty())
        std::cout << json;
    else
        write_text_file(a.out, json);
    return 0;
}

int cmd_track(const TrackArgs& a)
{
    const ExperimentConfig& c = a.config;
    c.validate();
    if (a.min_length < 1)
        throw UsageError("--min-length must be at least 1");
    std::vector<std::string> files = a.fields;
    if (!a.manifest.empty()) {
        const auto t = CsvTable::parse(read_text_file(a.manifest));
        const auto col = t.column("file");
        for (const auto& r : t.rows)
            files.push_back((fs::path(a.manifest).parent_path() / r[col]).string());
    }
    if (files.size() < 2)
        throw UsageError("track needs at least two fields (positional paths or --manifest)");
    std::vector<GridField> fields;
    for (const auto& f : files)
        fields.push_back(load_field(f));
    const auto trees = series_trees(fields, c.direction, c.simplify);
    const std::size_t steps = trees.size() - 1;
    const std::size_t nm = c.methods.size();

    std::vector<std::vector<Matching>> matchings(nm, std::vector<Matching>(steps));
    run_parallel(c.jobs, nm * steps, [&](std::size_t job) {
        const std::size_t m = job / steps, s = job % steps;
        matchings[m][s] = match_trees(trees[s], trees[s + 1], c.methods[m], {c.look_ahead});
    });

    make_dir(c.out);
    CsvTable counts{{"step", "method", "pairs", "total", "leaf_pairs", "saddle_pairs"}, {}};
    for (std::size_t s = 0; s < steps; ++s) {
        for (std::size_t m = 0; m < nm; ++m) {
            const auto mc = matched_counts(matchings[m][s], trees[s], trees[s + 1]);
            counts.rows.push_back({std::to_string(s), to_string(c.methods[m]), std::to_string(mc.pairs),
                                   std::to_string(mc.total_nodes), std::to_string(mc.leaf_pairs),
                                   std::to_string(mc.saddle_pairs)});
        }
    }
    write_csv(c.out, "matched_counts.csv", counts);

    nlohmann::ordered_json paths_json;
    paths_json["steps"] = trees.size();
    auto per_method = nlohmann::ordered_json::array();
    std::vector<std::vector<VertexPairs>> vertex_results(nm);
    for (std::size_t m = 0; m < nm; ++m) {
        const auto paths = build_tracking_paths(trees, matchings[m], c.methods[m]);
        auto arr = nlohmann::ordered_json::array();
        for (const auto& p : paths) {
            std::vector<std::int64_t> vertices;
            for (std::size_t i = 0; i < p.nodes.size(); ++i)
                vertices.push_back(trees[static_cast<std::size_t>(p.start_step) + i].vertex(p.nodes[i]));
            arr.push_back({{"start_step", p.start_step}, {"length", p.length()}, {"vertices", vertices}});
        }
        per_method.push_back({{"method", to_string(c.methods[m])}, {"paths", std::move(arr)}});

        CsvTable hist{{"length", "count"}, {}};
        for (const auto& [len, count] : path_length_histogram(paths, a.min_length))
            hist.rows.push_back({std::to_string(len), std::to_string(count)});
        const std::string name = std::string("histogram_") + to_string(c.methods[m]);
        write_csv(c.out, name + ".csv", hist);
        if (a.svg)
            write_text_file((fs::path(c.out) / (name + ".svg")).string(), histogram_svg(hist, to_string(c.methods[m])));

        for (std::size_t s = 0; s < steps; ++s)
            vertex_results[m].push_back(vertex_pairs(matchings[m][s], trees[s], trees[s + 1]));
    }
    paths_json["methods"] = std::move(per_method);
    write_text_file((fs::path(c.out) / "paths.json").string(), paths_json.dump(2) + "\n");

    if (nm >= 2) {
        const auto sim = similarity_matrix(c.methods, vertex_results);
        CsvTable raw{{"method"}, {}}, scaled{{"method"}, {}};
        for (Method m : c.methods) {
            raw.header.push_back(to_string(m));
            scaled.header.push_back(to_string(m));
        }
        for (std::size_t i = 0; i < nm; ++i) {
            std::vector<std::string> r{to_string(c.methods[i])}, s{to_string(c.methods[i])};
            for (std::size_t j = 0; j < nm; ++j) {
                r.push_back(std::to_string(sim.raw[i][j]));
                s.push_back(sim.scaled[i][j] ? csv_number(*sim.scaled[i][j]) : "");
            }
            raw.rows.push_back(std::move(r));
            scaled.rows.push_back(std::move(s));
        }
        write_csv(c.out, "similarity_raw.csv", raw);
        write_csv(c.out, "similarity_scaled.csv", scaled);
        if (a.svg)
            write_text_file((fs::path(c.out) / "similarity_heatmap.svg").string(), similarity_svg(scaled));
    }
    if (a.svg)
        write_text_file((fs::path(c.out) / "matched_counts.svg").string(), matched_counts_svg(counts));
    return 0;
}

int cmd_noise_bench(const NoiseBenchArgs& a)
{
    const ExperimentConfig& c = a.config;
    c.validate();
    const GridField base = base_field(c);
    make_dir((fs::path(c.out) / "cells").string());

    const std::string fingerprint = config_fingerprint(c);
    const std::string fp_path = (fs::path(c.out) / "cells" / "config.txt").string();
    if (a.resume && fs::exists(fp_path) && read_text_file(fp_path) != fingerprint)
        throw UsageError("--resume: '" + c.out + "' holds cells of a different configuration");
    write_text_file(fp_path, fingerprint);

    StabilityConfig sc;
    sc.taus = c.taus;
    sc.eps_max = c.eps_max;
    sc.t = c.steps;
    sc.repeats = c.repeats;
    sc.methods = c.methods;
    sc.look_ahead = {c.look_ahead};
    sc.simplify = c.simplify;
    sc.seed = c.seed;

    const std::size_t ntau = c.taus.size();
    const std::size_t cells = ntau * static_cast<std::size_t>(c.repeats);
    std::vector<std::vector<StabilityRow>> results(cells);
    std::atomic<int> reused{0};
    run_parallel(c.jobs, cells, [&](std::size_t job) {
        const std::size_t ti = job / static_cast<std::size_t>(c.repeats);
        const int rep = static_cast<int>(job % static_cast<std::size_t>(c.repeats));
        const std::string path = cell_path(c.out, ti, rep);
        if (a.resume) {
            if (auto rows = read_cell(path, c)) {
                results[job] = std::move(*rows);
                ++reused;
                return;
            }
        }
        std::vector<StabilityRow> rows;
        for (const auto& r : stability_cell(base, c.direction, sc, ti, rep))
            rows.push_back({r.method, c.taus[ti], rep, r.score});
        write_text_file(path, rows_table(rows).to_string());
        results[job] = std::move(rows);
    });

    std::vector<StabilityRow> all;
    for (std::size_t mi = 0; mi < c.methods.size(); ++mi) {
        for (std::size_t ti = 0; ti < ntau; ++ti) {
            for (int rep = 0; rep < c.repeats; ++rep) {
                for (const auto& r : results[ti * static_cast<std::size_t>(c.repeats) + static_cast<std::size_t>(rep)])
                    if (r.method == c.methods[mi])
                        all.push_back(r);
            }
        }
    }
    write_csv(c.out, "stability_raw.csv", rows_table(all));
    CsvTable agg{{"method", "tau", "median", "q1", "q3", "min", "max"}, {}};
    for (const auto& g : aggregate_scores(all)) {
        agg.rows.push_back({to_string(g.method), csv_number(g.tau), csv_number(g.median), csv_number(g.q1),
                            csv_number(g.q3), csv_number(g.min), csv_number(g.max)});
    }
    write_csv(c.out, "stability_agg.csv", agg);
    if (a.svg)
        write_text_file((fs::path(c.out) / "stability_box.svg").string(), stability_svg(agg));
    std::cerr << "noise-bench: " << cells << " cells (" << reused.load() << " reused), " << all.size() << " rows\n";
    return 0;
}

int cmd_instability_bench(const InstabilityArgs& a)
{
    if (a.seeds < 1)
        throw UsageError("--seeds must be positive");
    if (a.amplitude < 0.0)
        throw UsageError("--amplitude must be non-negative");
    if (a.methods.empty())
        throw UsageError("at least one method is required");
    const std::size_t n = static_cast<std::size_t>(a.seeds);
    std::vector<std::vector<InstabilityOutcome>> results(n);
    run_parallel(a.jobs, n, [&](std::size_t k) {
        const std::uint64_t s = derive_seed(a.seed, k);
        const auto pair = instability_pair(s, a.amplitude, a.grid);
        for (Method m : a.methods)
            results[k].push_back(instability_trial(pair, s, m, {a.look_ahead}));
    });
    make_dir(a.out);
    CsvTable report{{"seed_index", "seed", "method", "features", "correct", "expected"}, {}};
    std::map<Method, int> failures;
    for (std::size_t k = 0; k < n; ++k) {
        for (const auto& o : results[k]) {
            report.rows.push_back({std::to_string(k), std::to_string(o.seed), to_string(o.method),
                                   std::to_string(o.features), std::to_string(o.correct), o.expected() ? "1" : "0"});
            failures[o.method] += o.expected() ? 0 : 1;
        }
    }
    write_csv(a.out, "instability_report.csv", report);
    for (Method m : a.methods)
        std::cout << to_string(m) << ": expected pairing missed on " << failures[m] << " of " << n << " seeds\n";
    return 0;
}

int cmd_report(const std::string& dir)
{
    if (!fs::is_directory(dir))
        throw IoError("run directory '" + dir + "' does not exist");
    const fs::path d(dir);
    bool any = false;
    if (fs::exists(d / "stability_agg.csv")) {
        write_text_file((d / "stability_box.svg").string(),
                        stability_svg(CsvTable::parse(read_text_file((d / "stability_agg.csv").string()))));
        any = true;
    }
    if (fs::exists(d / "matched_counts.csv")) {
        write_text_file((d / "matched_counts.svg").string(),
                        matched_counts_svg(CsvTable::parse(read_text_file((d / "matched_counts.csv").string()))));
        any = true;
    }
    if (fs::exists(d / "similarity_scaled.csv")) {
        write_text_file((d / "similarity_heatmap.svg").string(),
                        similarity_svg(CsvTable::parse(read_text_file((d / "similarity_scaled.csv").string()))));
        any = true;
    }
    for (Method m : kAllMethods) {
        const std::string name = std::string("histogram_") + to_string(m);
        if (fs::exists(d / (name + ".csv"))) {
            write_text_file((d / (name + ".svg")).string(),
                            histogram_svg(CsvTable::parse(read_text_file((d / (name + ".csv")).string())), to_string(m)));
            any = true;
        }
    }
    if (!any)
        throw IoError("nothing to report in '" + dir +
                      "': missing stability_agg.csv, matched_counts.csv, similarity_scaled.csv and histogram_<method>.csv");
    return 0;
}

} // namespace mtb::cli
