#include "config.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace mtb::cli {
namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::istringstream is(value);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

} // namespace

void ExperimentConfig::validate() const
{
    if (methods.empty())
        throw UsageError("at least one method is required");
    if (simplify < 0.0 || simplify > 1.0)
        throw UsageError("simplify must lie in [0, 1]");
    if (look_ahead < 0)
        throw UsageError("look_ahead must be non-negative");
    if (taus.empty())
        throw UsageError("at least one tau is required");
    for (double t : taus)
        if (!(t > 0.0 && t <= 1.0))
            throw UsageError("every tau must lie in (0, 1]");
    if (eps_max < 0.0 || eps_max > 1.0)
        throw UsageError("eps_max must lie in [0, 1]");
    if (steps < 2)
        throw UsageError("steps must be at least 2");
    if (repeats < 1)
        throw UsageError("repeats must be at least 1");
    if (jobs < 0)
        throw UsageError("jobs must be non-negative");
}

std::uint64_t default_seed()
{
    if (const char* env = std::getenv("MTB_SEED")) {
        try {
            return parse_seed("MTB_SEED", env);
        } catch (const UsageError&) {
            return 1;
        }
    }
    return 1;
}

double parse_double(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size())
        throw UsageError("'" + key + "' expects a number, got '" + value + "'");
    return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size())
        throw UsageError("'" + key + "' expects an integer, got '" + value + "'");
    return v;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!value.empty() && value[0] != '-')
            v = std::stoull(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size())
        throw UsageError("'" + key + "' expects an unsigned integer, got '" + value + "'");
    return v;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value)
{
    std::vector<double> out;
    for (const auto& item : split_list(value))
        out.push_back(parse_double(key, item));
    return out;
}

std::vector<Method> parse_method_list(const std::string& value)
{
    std::vector<Method> out;
    for (const auto& item : split_list(value)) {
        if (item == "all") {
            out.assign(std::begin(kAllMethods), std::end(kAllMethods));
            continue;
        }
        Method m;
        try {
            m = parse_method(item);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (std::find(out.begin(), out.end(), m) == out.end())
            out.push_back(m);
    }
    return out;
}

std::map<std::string, std::string> parse_config_text(const std::string& text)
{
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::string line;
    int number = 0;
    while (std::getline(is, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(number) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw UsageError("config line " + std::to_string(number) + ": missing key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

void apply_config(ExperimentConfig& c, const std::map<std::string, std::string>& entries)
{
    for (const auto& [key, value] : entries) {
        if (key == "field") {
            c.field = value;
        } else if (key == "direction") {
            try {
                c.direction = parse_direction(value);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        } else if (key == "simplify") {
            c.simplify = parse_double(key, value);
        } else if (key == "methods") {
            c.methods = parse_method_list(value);
        } else if (key == "look_ahead") {
            c.look_ahead = static_cast<int>(parse_int(key, value));
        } else if (key == "taus") {
            c.taus = parse_double_list(key, value);
        } else if (key == "eps_max") {
            c.eps_max = parse_double(key, value);
        } else if (key == "steps") {
            c.steps = static_cast<int>(parse_int(key, value));
        } else if (key == "repeats") {
            c.repeats = static_cast<int>(parse_int(key, value));
        } else if (key == "out") {
            c.out = value;
        } else if (key == "seed") {
            c.seed = parse_seed(key, value);
        } else if (key == "jobs") {
            c.jobs = static_cast<int>(parse_int(key, value));
        } else {
            throw UsageError("unknown config key '" + key + "'");
        }
    }
}

} // namespace mtb::cli
