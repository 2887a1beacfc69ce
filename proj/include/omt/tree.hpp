#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace omt {

using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Raw vertex record used to build trees. Children are ordered by their
// position in the record list.
struct VertexSpec {
    std::string name;
    VertexId parent = kNoVertex;
    double height = 0.0;
};
using TreeSpec = std::vector<VertexSpec>;

enum class TreeViolationKind {
    empty_tree,
    bad_parent,
    no_root,
    multiple_roots,
    root_height,
    nonfinite_height,
    non_strict_height,
    disconnected,
    root_degree,
    unary_vertex,
    duplicate_name,
};

std::string to_string(TreeViolationKind kind);

struct TreeViolation {
    TreeViolationKind kind;
    VertexId vertex = kNoVertex;
    std::string message;
};

class TreeError : public std::invalid_argument {
public:
    explicit TreeError(TreeViolation v);
    const TreeViolation& violation() const noexcept { return violation_; }

private:
    TreeViolation violation_;
};

std::optional<TreeViolation> validate_tree(const TreeSpec& spec);

// Contracts vertices with exactly one child (except the root) and drops
// nothing else. Ids are renumbered; names survive.
TreeSpec normalise(const TreeSpec& spec);

// A point of the topological realisation: the lowest vertex at or below it on
// its edge plus its height. Canonical whenever height(vertex) <= height <
// height(parent), or vertex is the root with height +inf.
struct TreePoint {
    VertexId vertex = kNoVertex;
    double height = 0.0;
    friend bool operator==(const TreePoint&, const TreePoint&) = default;
};

class MergeTree {
public:
    explicit MergeTree(const TreeSpec& spec);

    std::size_t size() const noexcept { return parent_.size(); }
    VertexId root() const noexcept { return root_; }
    VertexId parent(VertexId v) const { return parent_[check(v)]; }
    double height(VertexId v) const { return height_[check(v)]; }
    const std::string& name(VertexId v) const { return name_[check(v)]; }
    std::span<const VertexId> children(VertexId v) const { return children_[check(v)]; }
    bool is_leaf(VertexId v) const { return children_[check(v)].empty(); }
    std::optional<VertexId> find(const std::string& name) const;

    // Leaves in left-to-right DFS order.
    std::span<const VertexId> leaves() const noexcept { return leaves_; }
    // Vertices in pre-order.
    std::span<const VertexId> preorder() const noexcept { return preorder_; }
    // Position of the leftmost leaf below v in leaves(), and one past the rightmost.
    std::size_t leaf_begin(VertexId v) const { return leaf_begin_[check(v)]; }
    std::size_t leaf_end(VertexId v) const { return leaf_end_[check(v)]; }
    std::size_t leaf_rank(VertexId leaf) const;
    VertexId first_leaf(VertexId v) const { return leaves_[leaf_begin(v)]; }

    double min_leaf_height() const noexcept { return min_leaf_height_; }
    // Highest finite vertex height (the top of the trunk edge).
    double max_finite_height() const noexcept { return height_[children_[root_].front()]; }
    std::vector<double> vertex_heights() const;  // sorted, distinct, finite

    bool is_vertex_ancestor(VertexId a, VertexId d) const;  // a is d or above d
    VertexId vertex_lca(VertexId a, VertexId b) const;
    VertexId top_vertex() const { return children_[root_].front(); }

    TreePoint point(VertexId v) const { return TreePoint{check(v), height_[v]}; }
    double height(const TreePoint& x) const { return x.height; }
    bool is_canonical(const TreePoint& x) const;
    TreePoint canonical(const TreePoint& x) const;

    TreePoint ancestor_at(const TreePoint& x, double h) const;
    // x is below or equal to y.
    bool is_ancestor(const TreePoint& y, const TreePoint& x) const;
    TreePoint lca(const TreePoint& x, const TreePoint& y) const;
    std::vector<TreePoint> level_set(double h) const;

    // Same topology and heights, children permuted per vertex. `order[v]` must
    // be a permutation of children(v).
    MergeTree with_children_order(const std::vector<std::vector<VertexId>>& order) const;
    MergeTree shifted(double c) const;
    TreeSpec spec() const;

private:
    VertexId check(VertexId v) const;
    void index();

    std::vector<VertexId> parent_;
    std::vector<double> height_;
    std::vector<std::string> name_;
    std::vector<std::vector<VertexId>> children_;
    VertexId root_ = kNoVertex;

    std::vector<VertexId> leaves_;
    std::vector<VertexId> preorder_;
    std::vector<std::size_t> leaf_begin_, leaf_end_;
    std::vector<std::size_t> pre_in_, pre_out_;
    std::vector<std::int32_t> depth_;
    std::vector<std::vector<VertexId>> up_;  // binary lifting table
    double min_leaf_height_ = kInfinity;
};

MergeTree normalise_to_zero(const MergeTree& t);

}  // namespace omt
