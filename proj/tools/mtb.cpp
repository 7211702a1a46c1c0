#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "mtb/csv.hpp"
#include "mtb/errors.hpp"

using namespace mtb::cli;

namespace {

/// Experiment flags are collected as raw strings so that a config file can be
/// loaded first and the flags given on the command line applied on top.
struct ExperimentFlags {
    std::string config_file;
    std::map<std::string, std::string> values;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help)
    {
        app->add_option_function<std::string>(flag, [this, key](const std::string& v) { values[key] = v; }, help);
    }

    ExperimentConfig resolve(std::uint64_t default_seed_value) const
    {
        ExperimentConfig c;
        c.seed = default_seed_value;
        if (!config_file.empty())
            apply_config(c, parse_config_text(mtb::read_text_file(config_file)));
        apply_config(c, values);
        return c;
    }
};

void add_experiment_flags(CLI::App* app, ExperimentFlags& f)
{
    app->add_option("--config", f.config_file, "Key/value experiment config file");
    f.add(app, "--field", "field", "Base field file (default: built-in vortex street field)");
    f.add(app, "--dir", "direction", "join or split");
    f.add(app, "--simplify", "simplify", "Simplification threshold as a fraction of each field's range");
    f.add(app, "--methods", "methods", "Comma separated: edit, wasserstein, branch, path or all");
    f.add(app, "--look-ahead", "look_ahead", "Look-ahead depth of the path mapping");
    f.add(app, "--taus", "taus", "Comma separated fractions of perturbed vertices");
    f.add(app, "--eps-max", "eps_max", "Largest noise amplitude as a fraction of the range");
    f.add(app, "--steps", "steps", "Fields per noise series");
    f.add(app, "--repeats", "repeats", "Repeats per noise fraction");
    f.add(app, "--out", "out", "Output directory");
    f.add(app, "--seed", "seed", "Base seed (default: $MTB_SEED or 1)");
    f.add(app, "--jobs", "jobs", "Worker threads (0: all cores)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Merge tree matching and feature tracking toolkit"};
    app.require_subcommand(1);
    const std::uint64_t seed0 = default_seed();

    GenArgs gen;
    gen.seed = seed0;
    auto* gen_cmd = app.add_subcommand("gen", "Generate scalar field files");
    gen_cmd->add_option("kind", gen.kind, "instability, gaussian, vortex or series")->required();
    gen_cmd->add_option("--out", gen.out, "Output file (gaussian, vortex) or directory (instability, series)")->required();
    gen_cmd->add_option("--seed", gen.seed, "Seed (default: $MTB_SEED or 1)");
    gen_cmd->add_option("--count", gen.count, "Number of perturbed three-peak fields");
    gen_cmd->add_option("--amplitude", gen.amplitude, "Perturbation amplitude of the three-peak field");
    gen_cmd->add_option("--grid", gen.grid, "Grid size of the three-peak field");
    gen_cmd->add_option("--peak", gen.peaks, "Gaussian peak x,y,z,height,sigma (repeatable)");
    gen_cmd->add_option("--dims", gen.dims, "Grid dimensions nx,ny[,nz]");
    gen_cmd->add_option("--field", gen.field, "Base field of a noise series (default: vortex street field)");
    gen_cmd->add_option("--dir", gen.direction, "join or split");
    gen_cmd->add_option("--tau", gen.tau, "Fraction of perturbed vertices");
    gen_cmd->add_option("--eps-max", gen.eps_max, "Largest noise amplitude as a fraction of the range");
    gen_cmd->add_option("--steps", gen.steps, "Fields in the series");
    gen_cmd->add_option("--encoding", gen.encoding, "f64le or text");

    TreeArgs tree;
    auto* tree_cmd = app.add_subcommand("tree", "Compute and simplify a merge tree, print JSON");
    tree_cmd->add_option("--field", tree.field, "Field file")->required();
    tree_cmd->add_option("--dir", tree.direction, "join or split");
    tree_cmd->add_option("--simplify", tree.simplify, "Threshold as a fraction of the data range");
    tree_cmd->add_option("--out", tree.out, "Output file (default: stdout)");

    MatchArgs match;
    auto* match_cmd = app.add_subcommand("match", "Match two merge trees, print JSON");
    match_cmd->add_option("tree1", match.tree1, "First tree JSON")->required();
    match_cmd->add_option("tree2", match.tree2, "Second tree JSON")->required();
    match_cmd->add_option("--method", match.method, "edit, wasserstein, branch or path");
    match_cmd->add_option("--look-ahead", match.look_ahead, "Look-ahead depth of the path mapping");
    match_cmd->add_option("--out", match.out, "Output file (default: stdout)");

    TrackArgs track;
    ExperimentFlags track_flags;
    auto* track_cmd = app.add_subcommand("track", "Track features through a field series");
    track_cmd->add_option("fields", track.fields, "Field files in time order");
    track_cmd->add_option("--manifest", track.manifest, "Series manifest.csv written by gen series");
    track_cmd->add_option("--min-length", track.min_length, "Shortest path counted in the histogram");
    track_cmd->add_flag("--svg", track.svg, "Also write SVG charts");
    add_experiment_flags(track_cmd, track_flags);

    NoiseBenchArgs bench;
    ExperimentFlags bench_flags;
    auto* bench_cmd = app.add_subcommand("noise-bench", "Stability scores under extrema-preserving noise");
    bench_cmd->add_flag("--resume", bench.resume, "Reuse completed cells in the output directory");
    bench_cmd->add_flag("--svg", bench.svg, "Also write the box plot");
    add_experiment_flags(bench_cmd, bench_flags);

    InstabilityArgs inst;
    inst.seed = seed0;
    std::string inst_methods = "all";
    auto* inst_cmd = app.add_subcommand("instability-bench", "Expected pairing on perturbed three-peak pairs");
    inst_cmd->add_option("--seeds", inst.seeds, "Number of perturbed pairs");
    inst_cmd->add_option("--seed", inst.seed, "Base seed (default: $MTB_SEED or 1)");
    inst_cmd->add_option("--amplitude", inst.amplitude, "Perturbation amplitude");
    inst_cmd->add_option("--grid", inst.grid, "Grid size");
    inst_cmd->add_option("--methods", inst_methods, "Comma separated methods or all");
    inst_cmd->add_option("--look-ahead", inst.look_ahead, "Look-ahead depth of the path mapping");
    inst_cmd->add_option("--out", inst.out, "Output directory");
    inst_cmd->add_option("--jobs", inst.jobs, "Worker threads (0: all cores)");

    std::string report_dir;
    auto* report_cmd = app.add_subcommand("report", "Render SVG charts from the CSV files of a run");
    report_cmd->add_option("dir", report_dir, "Run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen_cmd->parsed())
            return cmd_gen(gen);
        if (tree_cmd->parsed())
            return cmd_tree(tree);
        if (match_cmd->parsed())
            return cmd_match(match);
        if (track_cmd->parsed()) {
            track.config = track_flags.resolve(seed0);
            return cmd_track(track);
        }
        if (bench_cmd->parsed()) {
            bench.config = bench_flags.resolve(seed0);
            return cmd_noise_bench(bench);
        }
        if (inst_cmd->parsed()) {
            inst.methods = parse_method_list(inst_methods);
            return cmd_instability_bench(inst);
        }
        if (report_cmd->parsed())
            return cmd_report(report_dir);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mtb::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mtb::FieldFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
