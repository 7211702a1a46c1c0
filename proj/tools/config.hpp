#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtb/matching.hpp"
#include "mtb/merge_tree.hpp"

namespace mtb::cli {

/// Bad command-line or config input; reported with exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Settings shared by the experiment subcommands. Every field can come from
/// a config file and be overridden by a flag.
struct ExperimentConfig {
    std::string field;                 // empty: built-in vortex street field
    SweepDirection direction = SweepDirection::Join;
    double simplify = 0.01;
    std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
    int look_ahead = 4;
    std::vector<double> taus{0.01, 0.02, 0.05, 0.10, 0.15};
    double eps_max = 0.05;
    int steps = 40;
    int repeats = 10;
    std::string out = "out";
    std::uint64_t seed = 1;
    int jobs = 0;                      // 0: hardware concurrency

    /// Throws UsageError when a value is out of range.
    void validate() const;
};

/// Default seed: $MTB_SEED when set and numeric, otherwise 1.
std::uint64_t default_seed();

/// Key/value config text: one `key = value` per line, `#` starts a comment,
/// blank lines are ignored. Keys: field, direction, simplify, methods,
/// look_ahead, taus, eps_max, steps, repeats, out, seed, jobs. Lists are
/// comma separated. Unknown keys and malformed values raise UsageError.
std::map<std::string, std::string> parse_config_text(const std::string& text);
void apply_config(ExperimentConfig& config, const std::map<std::string, std::string>& entries);

double parse_double(const std::string& key, const std::string& value);
std::int64_t parse_int(const std::string& key, const std::string& value);
std::uint64_t parse_seed(const std::string& key, const std::string& value);
std::vector<double> parse_double_list(const std::string& key, const std::string& value);
std::vector<Method> parse_method_list(const std::string& value);

} // namespace mtb::cli
