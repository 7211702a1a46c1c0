#include "mtb/matching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "mtb/rng.hpp"

namespace mtb {

const char* to_string(Method m)
{
    switch (m) {
    case Method::ConstrainedEdit: return "edit";
    case Method::Wasserstein: return "wasserstein";
    case Method::BranchMapping: return "branch";
    case Method::PathMapping: return "path";
    }
    return "?";
}

Method parse_method(const std::string& s)
{
    for (Method m : kAllMethods) {
        if (s == to_string(m))
            return m;
    }
    throw std::invalid_argument("unknown method '" + s + "' (expected edit, wasserstein, branch or path)");
}

double edit_cost(const std::optional<Interval>& a, const std::optional<Interval>& b, const CostModel& model)
{
    if (!a && !b)
        return 0.0;
    if (!a || !b) {
        const Interval& x = a ? *a : *b;
        const double span = std::abs(x.death - x.birth);
        return model.norm == Norm::Linf ? span / 2.0 : span / std::sqrt(2.0);
    }
    const double db = std::abs(a->birth - b->birth);
    const double dd = std::abs(a->death - b->death);
    return model.norm == Norm::Linf ? std::max(db, dd) : std::sqrt(db * db + dd * dd);
}

MatchKey pair_key(double cost, std::int64_t id1, std::int64_t id2)
{
    const std::uint64_t h = mix64(static_cast<std::uint64_t>(id1) * 0x9e3779b97f4a7c15ULL ^
                                  mix64(static_cast<std::uint64_t>(id2)));
    return {cost, id1 > id2 ? id1 - id2 : id2 - id1, -1, static_cast<std::int64_t>(h >> 32)};
}

Matching make_matching(Method method, double distance, std::vector<std::pair<int, int>> pairs, int n1, int n2)
{
    Matching m;
    m.method = method;
    m.distance = distance;
    std::sort(pairs.begin(), pairs.end());
    std::vector<char> used1(static_cast<std::size_t>(n1), 0), used2(static_cast<std::size_t>(n2), 0);
    for (const auto& [a, b] : pairs) {
        used1[static_cast<std::size_t>(a)] = 1;
        used2[static_cast<std::size_t>(b)] = 1;
    }
    for (int i = 0; i < n1; ++i) {
        if (!used1[static_cast<std::size_t>(i)])
            m.unmatched1.push_back(i);
    }
    for (int j = 0; j < n2; ++j) {
        if (!used2[static_cast<std::size_t>(j)])
            m.unmatched2.push_back(j);
    }
    m.pairs = std::move(pairs);
    return m;
}

namespace {

template <class Anc1, class Anc2>
std::string check_pairs(const std::vector<std::pair<int, int>>& pairs, int n1, int n2, Anc1&& anc1, Anc2&& anc2)
{
    std::vector<char> used1(static_cast<std::size_t>(n1), 0), used2(static_cast<std::size_t>(n2), 0);
    for (const auto& [a, b] : pairs) {
        if (a < 0 || a >= n1 || b < 0 || b >= n2)
            return "pair (" + std::to_string(a) + "," + std::to_string(b) + ") out of range";
        if (used1[static_cast<std::size_t>(a)] || used2[static_cast<std::size_t>(b)])
            return "node used twice in pair (" + std::to_string(a) + "," + std::to_string(b) + ")";
        used1[static_cast<std::size_t>(a)] = used2[static_cast<std::size_t>(b)] = 1;
    }
    for (const auto& [a, b] : pairs) {
        for (const auto& [c, d] : pairs) {
            if (a == c)
                continue;
            if (anc1(a, c) != anc2(b, d))
                return "ancestor relation broken between pairs (" + std::to_string(a) + "," + std::to_string(b) +
                       ") and (" + std::to_string(c) + "," + std::to_string(d) + ")";
        }
    }
    return {};
}

} // namespace

std::string validate_matching(const Matching& m, const MergeTree& t1, const MergeTree& t2)
{
    std::string err = check_pairs(
        m.pairs, t1.size(), t2.size(), [&](int a, int b) { return t1.is_ancestor(a, b); },
        [&](int a, int b) { return t2.is_ancestor(a, b); });
    if (!err.empty())
        return err;
    if (m.pairs.size() + m.unmatched1.size() != static_cast<std::size_t>(t1.size()) ||
        m.pairs.size() + m.unmatched2.size() != static_cast<std::size_t>(t2.size()))
        return "pairs and unmatched nodes do not partition the trees";
    std::vector<char> seen1(static_cast<std::size_t>(t1.size()), 0), seen2(static_cast<std::size_t>(t2.size()), 0);
    for (const auto& [a, b] : m.pairs) {
        seen1[static_cast<std::size_t>(a)] = 1;
        seen2[static_cast<std::size_t>(b)] = 1;
    }
    for (int a : m.unmatched1) {
        if (a < 0 || a >= t1.size() || seen1[static_cast<std::size_t>(a)]++)
            return "unmatched node " + std::to_string(a) + " of T1 invalid or repeated";
    }
    for (int b : m.unmatched2) {
        if (b < 0 || b >= t2.size() || seen2[static_cast<std::size_t>(b)]++)
            return "unmatched node " + std::to_string(b) + " of T2 invalid or repeated";
    }
    if (!(m.distance >= 0.0) || !std::isfinite(m.distance))
        return "distance is negative or not finite";
    return {};
}

std::string validate_matching(const std::vector<std::pair<int, int>>& pairs, const LabeledTree& t1,
                              const LabeledTree& t2)
{
    return check_pairs(
        pairs, t1.size(), t2.size(), [&](int a, int b) { return t1.is_ancestor(a, b); },
        [&](int a, int b) { return t2.is_ancestor(a, b); });
}

std::vector<std::pair<std::int64_t, std::int64_t>> vertex_pairs(const Matching& m, const MergeTree& t1,
                                                                const MergeTree& t2)
{
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    out.reserve(m.pairs.size());
    for (const auto& [a, b] : m.pairs)
        out.emplace_back(t1.vertex(a), t2.vertex(b));
    std::sort(out.begin(), out.end());
    return out;
}

std::string matching_to_json(const Matching& m, const MergeTree& t1, const MergeTree& t2)
{
    nlohmann::ordered_json j;
    j["method"] = to_string(m.method);
    j["distance"] = m.distance;
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& [a, b] : vertex_pairs(m, t1, t2))
        pairs.push_back({a, b});
    j["pairs"] = std::move(pairs);
    std::vector<std::int64_t> u1, u2;
    for (int a : m.unmatched1)
        u1.push_back(t1.vertex(a));
    for (int b : m.unmatched2)
        u2.push_back(t2.vertex(b));
    std::sort(u1.begin(), u1.end());
    std::sort(u2.begin(), u2.end());
    j["unmatched1"] = u1;
    j["unmatched2"] = u2;
    return j.dump(2) + "\n";
}

Matching match_trees(const MergeTree& t1, const MergeTree& t2, Method method, LookAhead la)
{
    switch (method) {
    case Method::ConstrainedEdit: return constrained_edit_matching(t1, t2);
    case Method::Wasserstein: return wasserstein_matching(t1, t2);
    case Method::BranchMapping: return branch_mapping(t1, t2);
    case Method::PathMapping: return path_mapping(t1, t2, la);
    }
    throw std::invalid_argument("unknown method");
}

} // namespace mtb
