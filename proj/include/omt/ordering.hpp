#pragma once

#include <compare>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "omt/tree.hpp"

namespace omt {

using LeafOrder = std::vector<VertexId>;

struct LeafTriple {
    VertexId u1, u, u2;
};

// Throws std::invalid_argument when `order` is not a permutation of the leaves.
std::optional<LeafTriple> check_leaf_order(const MergeTree& t, const LeafOrder& order);

// Merge tree whose children lists are permuted so that DFS order is the leaf
// order.
class OrderedMergeTree {
public:
    OrderedMergeTree(const MergeTree& tree, const LeafOrder& order);
    // Leaf order read off the existing children lists.
    explicit OrderedMergeTree(MergeTree tree);

    const MergeTree& tree() const noexcept { return tree_; }
    LeafOrder leaf_order() const { return {tree_.leaves().begin(), tree_.leaves().end()}; }

    std::strong_ordering compare(const TreePoint& x1, const TreePoint& x2) const;
    // x1 precedes-or-equals x2 in the point order: compare ancestors at the
    // higher of the two heights.
    std::strong_ordering compare_points(const TreePoint& x1, const TreePoint& x2) const;
    std::vector<TreePoint> level_set(double h) const { return tree_.level_set(h); }

private:
    MergeTree tree_;
};

using TreeRef = std::shared_ptr<const OrderedMergeTree>;

std::strong_ordering induced_layer_compare(const OrderedMergeTree& omt, const TreePoint& x1, const TreePoint& x2);

using LayerComparator = std::function<std::strong_ordering(const TreePoint&, const TreePoint&)>;

class InconsistentComparator : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

LeafOrder induced_leaf_order(const MergeTree& t, const LayerComparator& cmp);

struct LayerWitness {
    double h1 = 0, h2 = 0;
    TreePoint x1, x2;
    std::string what;
};

// Heights checked: sample_heights, all vertex heights, the midpoints between
// consecutive ones and one height above the top vertex.
std::optional<LayerWitness> check_layer_consistency(const MergeTree& t, const LayerComparator& cmp,
                                                    const std::vector<double>& sample_heights = {});
std::optional<LayerWitness> check_layer_consistency(const OrderedMergeTree& omt,
                                                    const std::vector<double>& sample_heights = {});

// Sorted distinct heights: inputs plus midpoints between consecutive values
// plus one value above the largest.
std::vector<double> with_midpoints(std::vector<double> hs);

}  // namespace omt
