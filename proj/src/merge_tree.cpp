#include "mtb/merge_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace mtb {

const char* to_string(SweepDirection d)
{
    return d == SweepDirection::Join ? "join" : "split";
}

const char* to_string(NodeType t)
{
    switch (t) {
    case NodeType::Leaf: return "leaf";
    case NodeType::Saddle: return "saddle";
    case NodeType::Root: return "root";
    }
    return "?";
}

SweepDirection parse_direction(const std::string& s)
{
    if (s == "join")
        return SweepDirection::Join;
    if (s == "split")
        return SweepDirection::Split;
    throw std::invalid_argument("unknown sweep direction '" + s + "' (expected join or split)");
}

MergeTree::MergeTree(std::vector<MergeTreeNode> nodes, std::vector<int> parent, SweepDirection direction)
    : direction_(direction)
{
    const int n = static_cast<int>(nodes.size());
    if (n < 2)
        throw std::invalid_argument("merge tree needs at least a leaf and a root");
    if (parent.size() != nodes.size())
        throw std::invalid_argument("parent array length does not match node count");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& x = nodes[static_cast<std::size_t>(a)];
        const auto& y = nodes[static_cast<std::size_t>(b)];
        return sweep_before(direction, x.scalar, x.vertex, y.scalar, y.vertex);
    });
    std::vector<int> rank(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        rank[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

    nodes_.resize(static_cast<std::size_t>(n));
    parent_.assign(static_cast<std::size_t>(n), -1);
    children_.assign(static_cast<std::size_t>(n), {});
    int roots = 0;
    for (int i = 0; i < n; ++i) {
        const int old = order[static_cast<std::size_t>(i)];
        nodes_[static_cast<std::size_t>(i)] = nodes[static_cast<std::size_t>(old)];
        if (!std::isfinite(nodes_[static_cast<std::size_t>(i)].scalar))
            throw std::invalid_argument("merge tree node scalar must be finite");
        if (nodes_[static_cast<std::size_t>(i)].vertex < 0)
            throw std::invalid_argument("merge tree vertex index must be non-negative");
        const int p = parent[static_cast<std::size_t>(old)];
        if (p < -1 || p >= n)
            throw std::invalid_argument("parent index out of range");
        if (p == -1) {
            ++roots;
            continue;
        }
        parent_[static_cast<std::size_t>(i)] = rank[static_cast<std::size_t>(p)];
    }
    if (roots != 1)
        throw std::invalid_argument("merge tree must have exactly one root");
    if (parent_.back() != -1)
        throw std::invalid_argument("root must be the last node of the sweep");
    for (int i = 0; i + 1 < n; ++i) {
        const int p = parent_[static_cast<std::size_t>(i)];
        if (p <= i)
            throw std::invalid_argument("scalar values are not monotone along the leaf-to-root path");
        children_[static_cast<std::size_t>(p)].push_back(i);
    }
    std::vector<std::int64_t> vertices;
    vertices.reserve(static_cast<std::size_t>(n));
    for (const auto& node : nodes_)
        vertices.push_back(node.vertex);
    std::sort(vertices.begin(), vertices.end());
    if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
        throw std::invalid_argument("merge tree vertex indices must be distinct");

    depth_.assign(static_cast<std::size_t>(n), 0);
    for (int i = n - 1; i >= 0; --i) {
        auto& node = nodes_[static_cast<std::size_t>(i)];
        const auto& ch = children_[static_cast<std::size_t>(i)];
        if (i == n - 1) {
            node.type = NodeType::Root;
        } else {
            depth_[static_cast<std::size_t>(i)] = depth_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(i)])] + 1;
            if (ch.empty())
                node.type = NodeType::Leaf;
            else if (ch.size() == 1)
                throw std::invalid_argument("inner merge tree node with a single child");
            else
                node.type = NodeType::Saddle;
        }
    }
    if (children_.back().empty())
        throw std::invalid_argument("root has no children");
}

std::vector<int> MergeTree::leaves() const
{
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
        if (is_leaf(i))
            out.push_back(i);
    }
    return out;
}

bool MergeTree::is_ancestor(int a, int b) const
{
    while (b != -1 && b < a)
        b = parent(b);
    return b == a;
}

double MergeTree::scalar_range() const
{
    return std::abs(scalar(root()) - scalar(0));
}

bool MergeTree::operator==(const MergeTree& other) const
{
    if (direction_ != other.direction_ || size() != other.size() || parent_ != other.parent_)
        return false;
    for (int i = 0; i < size(); ++i) {
        const auto& a = node(i);
        const auto& b = other.node(i);
        if (a.vertex != b.vertex || a.scalar != b.scalar || a.type != b.type)
            return false;
    }
    return true;
}

namespace {

struct UnionFind {
    std::vector<std::int64_t> parent;
    explicit UnionFind(std::int64_t n) : parent(static_cast<std::size_t>(n), -1) {}

    std::int64_t find(std::int64_t x)
    {
        std::int64_t r = x;
        while (parent[static_cast<std::size_t>(r)] >= 0)
            r = parent[static_cast<std::size_t>(r)];
        while (parent[static_cast<std::size_t>(x)] >= 0) {
            const std::int64_t next = parent[static_cast<std::size_t>(x)];
            parent[static_cast<std::size_t>(x)] = r;
            x = next;
        }
        return r;
    }
};

/// Rebuilds a tree from a subset of nodes. `parent_of` maps kept nodes to
/// kept parents.
MergeTree rebuild(const MergeTree& tree, const std::vector<char>& keep, const std::vector<int>& parent_of)
{
    std::vector<int> id(static_cast<std::size_t>(tree.size()), -1);
    std::vector<MergeTreeNode> nodes;
    for (int i = 0; i < tree.size(); ++i) {
        if (keep[static_cast<std::size_t>(i)]) {
            id[static_cast<std::size_t>(i)] = static_cast<int>(nodes.size());
            nodes.push_back(tree.node(i));
        }
    }
    std::vector<int> parent;
    parent.reserve(nodes.size());
    for (int i = 0; i < tree.size(); ++i) {
        if (keep[static_cast<std::size_t>(i)]) {
            const int p = parent_of[static_cast<std::size_t>(i)];
            parent.push_back(p < 0 ? -1 : id[static_cast<std::size_t>(p)]);
        }
    }
    return MergeTree(std::move(nodes), std::move(parent), tree.direction());
}

} // namespace

MergeTree compute_merge_tree(const GridField& field, SweepDirection direction)
{
    const std::int64_t n = field.size();
    std::vector<std::int64_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::int64_t{0});
    std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        return sweep_before(direction, field[a], a, field[b], b);
    });

    UnionFind uf(n);
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    std::vector<int> head(static_cast<std::size_t>(n), -1);  // component root -> lowest open tree node
    std::vector<MergeTreeNode> nodes;
    std::vector<int> parent;
    std::vector<std::int64_t> comps;

    for (std::int64_t k = 0; k < n; ++k) {
        const std::int64_t v = order[static_cast<std::size_t>(k)];
        comps.clear();
        for_each_neighbor(field.dims(), v, [&](std::int64_t u) {
            if (!visited[static_cast<std::size_t>(u)])
                return;
            const std::int64_t r = uf.find(u);
            if (std::find(comps.begin(), comps.end(), r) == comps.end())
                comps.push_back(r);
        });
        visited[static_cast<std::size_t>(v)] = 1;
        const bool last = k + 1 == n;
        if (comps.size() == 1 && !last) {
            uf.parent[static_cast<std::size_t>(v)] = comps[0];
            continue;
        }
        const int node = static_cast<int>(nodes.size());
        nodes.push_back({v, field[v], NodeType::Leaf});
        parent.push_back(-1);
        for (std::int64_t r : comps) {
            parent[static_cast<std::size_t>(head[static_cast<std::size_t>(r)])] = node;
            uf.parent[static_cast<std::size_t>(r)] = v;
        }
        head[static_cast<std::size_t>(v)] = node;
    }
    return MergeTree(std::move(nodes), std::move(parent), direction);
}

std::vector<int> owning_leaves(const MergeTree& tree)
{
    std::vector<int> oldest(static_cast<std::size_t>(tree.size()));
    for (int i = 0; i < tree.size(); ++i) {
        const auto& ch = tree.children(i);
        if (ch.empty()) {
            oldest[static_cast<std::size_t>(i)] = i;
            continue;
        }
        int best = oldest[static_cast<std::size_t>(ch[0])];
        for (int c : ch)
            best = std::min(best, oldest[static_cast<std::size_t>(c)]);
        oldest[static_cast<std::size_t>(i)] = best;
    }
    return oldest;
}

std::vector<PersistencePair> persistence_pairs(const MergeTree& tree)
{
    const auto oldest = owning_leaves(tree);
    std::vector<int> partner(static_cast<std::size_t>(tree.size()), -1);
    for (int i = 0; i < tree.size(); ++i) {
        for (int c : tree.children(i)) {
            const int leaf = oldest[static_cast<std::size_t>(c)];
            if (leaf != oldest[static_cast<std::size_t>(i)])
                partner[static_cast<std::size_t>(leaf)] = i;
        }
    }
    partner[static_cast<std::size_t>(oldest[static_cast<std::size_t>(tree.root())])] = tree.root();
    std::vector<PersistencePair> out;
    for (int l : tree.leaves()) {
        const int p = partner[static_cast<std::size_t>(l)];
        out.push_back({l, p, std::abs(tree.scalar(l) - tree.scalar(p))});
    }
    return out;
}

MergeTree simplify(const MergeTree& tree, double threshold_fraction, double data_range)
{
    if (!(data_range > 0.0))
        throw std::invalid_argument("simplify needs a positive data range");
    if (threshold_fraction < 0.0 || threshold_fraction > 1.0)
        throw std::invalid_argument("simplification threshold must lie in [0, 1]");
    const double threshold = threshold_fraction * data_range;
    const int global = owning_leaves(tree)[static_cast<std::size_t>(tree.root())];

    // Elder-rule pairs are unaffected by removing younger branches, so the
    // removed set does not depend on the removal order.
    std::vector<char> alive(static_cast<std::size_t>(tree.size()), 0);
    bool removed_any = false;
    for (const auto& p : persistence_pairs(tree)) {
        const bool remove = p.leaf != global && (p.persistence < threshold || threshold_fraction >= 1.0);
        if (remove) {
            removed_any = true;
            continue;
        }
        for (int x = p.leaf; x != -1 && !alive[static_cast<std::size_t>(x)]; x = tree.parent(x))
            alive[static_cast<std::size_t>(x)] = 1;
    }
    if (!removed_any)
        return tree;

    std::vector<int> live_children(static_cast<std::size_t>(tree.size()), 0);
    for (int i = 0; i + 1 < tree.size(); ++i) {
        if (alive[static_cast<std::size_t>(i)])
            ++live_children[static_cast<std::size_t>(tree.parent(i))];
    }
    std::vector<char> keep(static_cast<std::size_t>(tree.size()), 0);
    for (int i = 0; i < tree.size(); ++i) {
        keep[static_cast<std::size_t>(i)] = alive[static_cast<std::size_t>(i)] &&
            (i == tree.root() || live_children[static_cast<std::size_t>(i)] != 1);
    }
    std::vector<int> parent_of(static_cast<std::size_t>(tree.size()), -1);
    for (int i = 0; i < tree.size(); ++i) {
        if (!keep[static_cast<std::size_t>(i)] || i == tree.root())
            continue;
        int p = tree.parent(i);
        while (!keep[static_cast<std::size_t>(p)])
            p = tree.parent(p);
        parent_of[static_cast<std::size_t>(i)] = p;
    }
    return rebuild(tree, keep, parent_of);
}

MergeTree epsilon_process(const MergeTree& tree, double epsilon, double data_range)
{
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("epsilon must lie in [0, 1]");
    const double limit = epsilon * data_range;
    const bool root_merges = tree.children(tree.root()).size() >= 2;
    std::vector<int> parent_of = tree.parents();
    std::vector<char> keep(static_cast<std::size_t>(tree.size()), 1);
    std::vector<std::vector<int>> children(static_cast<std::size_t>(tree.size()));
    for (int i = 0; i < tree.size(); ++i)
        children[static_cast<std::size_t>(i)] = tree.children(i);

    for (int i = 0; i < tree.size(); ++i) {
        if (tree.node(i).type != NodeType::Saddle)
            continue;
        const int p = parent_of[static_cast<std::size_t>(i)];
        if ((p == tree.root() && !root_merges) || !(std::abs(tree.scalar(p) - tree.scalar(i)) < limit))
            continue;
        keep[static_cast<std::size_t>(i)] = 0;
        auto& pc = children[static_cast<std::size_t>(p)];
        pc.erase(std::find(pc.begin(), pc.end(), i));
        for (int c : children[static_cast<std::size_t>(i)]) {
            parent_of[static_cast<std::size_t>(c)] = p;
            pc.push_back(c);
        }
        children[static_cast<std::size_t>(i)].clear();
    }
    if (std::all_of(keep.begin(), keep.end(), [](char k) { return k != 0; }))
        return tree;
    return rebuild(tree, keep, parent_of);
}

CriticalTypeCounts critical_type_counts(const MergeTree& tree)
{
    CriticalTypeCounts c;
    for (const auto& node : tree.nodes()) {
        if (node.type == NodeType::Leaf)
            ++c.leaves;
        else if (node.type == NodeType::Saddle)
            ++c.saddles;
    }
    return c;
}

std::string tree_to_json(const MergeTree& tree)
{
    std::vector<int> order(static_cast<std::size_t>(tree.size()));
    std::iota(order.begin(), order.end(), 0);
    if (tree.direction() == SweepDirection::Split)
        std::reverse(order.begin(), order.end());
    std::vector<int> pos(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    nlohmann::ordered_json j;
    j["direction"] = to_string(tree.direction());
    auto nodes = nlohmann::ordered_json::array();
    auto parent = nlohmann::ordered_json::array();
    for (int i : order) {
        const auto& node = tree.node(i);
        nodes.push_back({{"vertex", node.vertex}, {"scalar", node.scalar}, {"type", to_string(node.type)}});
        const int p = tree.parent(i);
        parent.push_back(p < 0 ? -1 : pos[static_cast<std::size_t>(p)]);
    }
    j["nodes"] = std::move(nodes);
    j["parent"] = std::move(parent);
    return j.dump(2) + "\n";
}

MergeTree tree_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("tree JSON: ") + e.what());
    }
    try {
        const SweepDirection dir = parse_direction(j.at("direction").get<std::string>());
        std::vector<MergeTreeNode> nodes;
        for (const auto& n : j.at("nodes")) {
            MergeTreeNode node;
            node.vertex = n.at("vertex").get<std::int64_t>();
            node.scalar = n.at("scalar").get<double>();
            nodes.push_back(node);
        }
        auto parent = j.at("parent").get<std::vector<int>>();
        return MergeTree(std::move(nodes), std::move(parent), dir);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("tree JSON: ") + e.what());
    }
}

} // namespace mtb
