#include "fixtures.hpp"

namespace fixture {

mtb::MergeTree build_tree(const std::vector<NodeSpec>& spec, mtb::SweepDirection dir)
{
    std::vector<mtb::MergeTreeNode> nodes;
    std::vector<int> parent;
    for (const auto& s : spec) {
        nodes.push_back({s.vertex, s.scalar, mtb::NodeType::Leaf});
        parent.push_back(s.parent);
    }
    return mtb::MergeTree(std::move(nodes), std::move(parent), dir);
}

mtb::MergeTree vertical_first()
{
    return build_tree({{0, 0.0, -1}, {4, 0.3, 0}, {1, 1.0, 1}, {7, 0.7, 1}, {2, 0.98, 3}, {6, 0.8, 3}},
                      mtb::SweepDirection::Split);
}

mtb::MergeTree vertical_second()
{
    return build_tree({{0, 0.0, -1}, {4, 0.3, 0}, {1, 0.98, 1}, {7, 0.7, 1}, {2, 1.0, 3}, {6, 0.8, 3}},
                      mtb::SweepDirection::Split);
}

mtb::MergeTree horizontal_first()
{
    return build_tree({{0, 0.0, -1}, {4, 0.49, 0}, {5, 0.50, 1}, {1, 1.0, 1}, {2, 0.9, 2}, {3, 0.8, 2}},
                      mtb::SweepDirection::Split);
}

mtb::MergeTree horizontal_second()
{
    return build_tree({{0, 0.0, -1}, {5, 0.49, 0}, {4, 0.50, 1}, {3, 0.8, 1}, {2, 0.9, 2}, {1, 1.0, 2}},
                      mtb::SweepDirection::Split);
}

} // namespace fixture
