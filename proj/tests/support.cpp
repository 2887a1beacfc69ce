#include "support.hpp"

#include <algorithm>
#include <map>

namespace omt::testing {

OrderedMergeTree make_tree(const std::vector<Row>& rows) {
    std::map<std::string, VertexId> index;
    for (std::size_t i = 0; i < rows.size(); ++i) index[std::get<0>(rows[i])] = static_cast<VertexId>(i);
    TreeSpec spec;
    for (const auto& [name, parent, h] : rows)
        spec.push_back({name, parent.empty() ? kNoVertex : index.at(parent), h});
    return OrderedMergeTree(MergeTree(spec));
}

OrderedMergeTree tree_a() {
    return make_tree({{"root", "", kInfinity}, {"v", "root", 3}, {"u1", "v", 0}, {"u2", "v", 1}});
}

OrderedMergeTree tree_b() {
    return make_tree({{"root", "", kInfinity}, {"v", "root", 3}, {"w1", "v", 1}, {"w2", "v", 0}});
}

OrderedMergeTree caterpillar3() {
    return make_tree({{"root", "", kInfinity}, {"v2", "root", 4}, {"v1", "v2", 2}, {"a", "v1", 0}, {"b", "v1", 0},
                      {"c", "v2", 1}});
}

OrderedMergeTree single_leaf(double h) { return make_tree({{"root", "", kInfinity}, {"u", "root", h}}); }

OrderedMergeTree caterpillar(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> leaf(0, 32);
    // Spine vertex s_k (height k + 1) has children l_k and s_{k-1}; s_0 is the leaf l_0.
    TreeSpec spec{{"root", kNoVertex, kInfinity}};
    VertexId spine = 0;
    for (std::size_t k = n - 1; k >= 1; --k) {
        spec.push_back({"s" + std::to_string(k), spine, static_cast<double>(k + 1)});
        spine = static_cast<VertexId>(spec.size() - 1);
        spec.push_back({"l" + std::to_string(k), spine, leaf(rng) * kGrid});
    }
    spec.push_back({"l0", spine, leaf(rng) * kGrid});
    return OrderedMergeTree(MergeTree(spec));
}

OrderedMergeTree random_tree(std::mt19937_64& rng, std::size_t max_leaves, std::size_t min_leaves) {
    std::uniform_int_distribution<std::size_t> count(min_leaves, max_leaves);
    std::uniform_int_distribution<int> leaf_h(0, 64);
    std::uniform_int_distribution<int> step(1, 8);
    const std::size_t n = count(rng);

    struct Node {
        double h;
        std::vector<std::size_t> kids;
    };
    std::vector<Node> nodes;
    std::vector<std::size_t> comps;
    for (std::size_t i = 0; i < n; ++i) {
        nodes.push_back({leaf_h(rng) * kGrid, {}});
        comps.push_back(i);
    }
    while (comps.size() > 1) {
        std::shuffle(comps.begin(), comps.end(), rng);
        std::size_t k = comps.size() >= 3 && std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? 3 : 2;
        Node parent{0, {}};
        for (std::size_t i = 0; i < k; ++i) {
            parent.kids.push_back(comps.back());
            parent.h = std::max(parent.h, nodes[comps.back()].h);
            comps.pop_back();
        }
        parent.h += step(rng) * kGrid;
        comps.push_back(nodes.size());
        nodes.push_back(parent);
    }
    TreeSpec spec{{"root", kNoVertex, kInfinity}};
    std::vector<std::pair<std::size_t, VertexId>> stack{{comps.front(), 0}};
    std::size_t leaf_no = 0, inner_no = 0;
    while (!stack.empty()) {
        auto [i, parent] = stack.back();
        stack.pop_back();
        const Node& nd = nodes[i];
        std::string name = nd.kids.empty() ? "u" + std::to_string(++leaf_no) : "m" + std::to_string(++inner_no);
        auto id = static_cast<VertexId>(spec.size());
        spec.push_back({name, parent, nd.h});
        for (auto it = nd.kids.rbegin(); it != nd.kids.rend(); ++it) stack.emplace_back(*it, id);
    }
    return OrderedMergeTree(MergeTree(spec));
}

}  // namespace omt::testing
