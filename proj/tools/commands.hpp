#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"

namespace mtb::cli {

struct GenArgs {
    std::string kind;                 // instability, gaussian, vortex, series
    std::string out;
    std::uint64_t seed = 1;
    int count = 1;
    double amplitude = 0.01;
    int grid = 64;
    std::vector<std::string> peaks;   // "x,y,z,height,sigma"
    std::string dims;                 // empty: 64,64,1 for gaussian, 48,32,1 for vortex
    std::string field;
    std::string direction = "join";
    double tau = 0.05;
    double eps_max = 0.05;
    int steps = 40;
    std::string encoding = "f64le";
};

struct TreeArgs {
    std::string field;
    std::string direction = "join";
    double simplify = 0.01;
    std::string out;
};

struct MatchArgs {
    std::string tree1;
    std::string tree2;
    std::string method = "path";
    int look_ahead = 4;
    std::string out;
};

struct TrackArgs {
    std::vector<std::string> fields;
    std::string manifest;
    ExperimentConfig config;
    int min_length = 2;
    bool svg = false;
};

struct NoiseBenchArgs {
    ExperimentConfig config;
    bool resume = false;
    bool svg = false;
};

struct InstabilityArgs {
    int seeds = 20;
    std::uint64_t seed = 1;
    double amplitude = 0.01;
    int grid = 64;
    std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
    int look_ahead = 4;
    std::string out = "out";
    int jobs = 0;
};

/// Each command returns the process exit code. Invalid input raises
/// UsageError or IoError, failed computations any other exception.
int cmd_gen(const GenArgs& args);
int cmd_tree(const TreeArgs& args);
int cmd_match(const MatchArgs& args);
int cmd_track(const TrackArgs& args);
int cmd_noise_bench(const NoiseBenchArgs& args);
int cmd_instability_bench(const InstabilityArgs& args);
int cmd_report(const std::string& dir);

} // namespace mtb::cli
