#include "omt/tree.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace omt {

std::string to_string(TreeViolationKind kind) {
    switch (kind) {
        case TreeViolationKind::empty_tree: return "empty tree";
        case TreeViolationKind::bad_parent: return "bad parent";
        case TreeViolationKind::no_root: return "no root";
        case TreeViolationKind::multiple_roots: return "multiple roots";
        case TreeViolationKind::root_height: return "root height";
        case TreeViolationKind::nonfinite_height: return "non-finite height";
        case TreeViolationKind::non_strict_height: return "non-strict height";
        case TreeViolationKind::disconnected: return "disconnected";
        case TreeViolationKind::root_degree: return "root degree";
        case TreeViolationKind::unary_vertex: return "unary vertex";
        case TreeViolationKind::duplicate_name: return "duplicate name";
    }
    return "unknown";
}

TreeError::TreeError(TreeViolation v)
    : std::invalid_argument(to_string(v.kind) + ": " + v.message), violation_(std::move(v)) {}

namespace {

std::string label(const TreeSpec& spec, std::size_t i) {
    if (!spec[i].name.empty()) return spec[i].name;
    return "#" + std::to_string(i);
}

std::optional<TreeViolation> validate(const TreeSpec& spec, bool allow_unary) {
    auto fail = [&](TreeViolationKind k, std::size_t v, std::string msg) {
        return TreeViolation{k, static_cast<VertexId>(v), label(spec, v) + ": " + std::move(msg)};
    };
    if (spec.empty()) return TreeViolation{TreeViolationKind::empty_tree, kNoVertex, "no vertices"};
    const std::size_t n = spec.size();

    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
        if (spec[i].name.empty()) continue;
        if (!seen.insert(spec[i].name).second)
            return fail(TreeViolationKind::duplicate_name, i, "name used twice");
    }
    for (std::size_t i = 0; i < n; ++i) {
        VertexId p = spec[i].parent;
        if (p != kNoVertex && (p < 0 || static_cast<std::size_t>(p) >= n || static_cast<std::size_t>(p) == i))
            return fail(TreeViolationKind::bad_parent, i, "parent id out of range");
    }
    std::optional<std::size_t> root;
    for (std::size_t i = 0; i < n; ++i) {
        if (spec[i].parent != kNoVertex) continue;
        if (root) return fail(TreeViolationKind::multiple_roots, i, "second vertex without parent");
        root = i;
    }
    if (!root) return TreeViolation{TreeViolationKind::no_root, kNoVertex, "every vertex has a parent"};
    if (!(spec[*root].height == kInfinity))
        return fail(TreeViolationKind::root_height, *root, "root height must be inf");
    for (std::size_t i = 0; i < n; ++i) {
        if (i != *root && !std::isfinite(spec[i].height))
            return fail(TreeViolationKind::nonfinite_height, i, "non-root height must be finite");
    }
    // Every vertex must reach the root; a walk longer than n means a cycle.
    std::vector<char> ok(n, 0);
    ok[*root] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> path;
        std::size_t v = i;
        while (!ok[v] && path.size() <= n) {
            path.push_back(v);
            v = static_cast<std::size_t>(spec[v].parent);
        }
        if (!ok[v]) return fail(TreeViolationKind::disconnected, i, "not connected to the root");
        for (auto p : path) ok[p] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i == *root) continue;
        auto p = static_cast<std::size_t>(spec[i].parent);
        if (!(spec[i].height < spec[p].height))
            return fail(TreeViolationKind::non_strict_height, i, "height not below parent " + label(spec, p));
    }
    std::vector<std::size_t> degree(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (i != *root) ++degree[static_cast<std::size_t>(spec[i].parent)];
    if (degree[*root] != 1)
        return fail(TreeViolationKind::root_degree, *root, "root must have exactly one child");
    if (!allow_unary) {
        for (std::size_t i = 0; i < n; ++i)
            if (i != *root && degree[i] == 1)
                return fail(TreeViolationKind::unary_vertex, i, "interior vertex with one child");
    }
    return std::nullopt;
}

}  // namespace

std::optional<TreeViolation> validate_tree(const TreeSpec& spec) { return validate(spec, false); }

TreeSpec normalise(const TreeSpec& spec) {
    if (auto v = validate(spec, true)) throw TreeError(*v);
    const std::size_t n = spec.size();
    std::vector<std::vector<std::size_t>> children(n);
    std::size_t root = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (spec[i].parent == kNoVertex)
            root = i;
        else
            children[static_cast<std::size_t>(spec[i].parent)].push_back(i);
    }
    TreeSpec out;
    // (old id, new parent id)
    std::vector<std::pair<std::size_t, VertexId>> stack{{root, kNoVertex}};
    while (!stack.empty()) {
        auto [v, p] = stack.back();
        stack.pop_back();
        if (p != kNoVertex)
            while (children[v].size() == 1) v = children[v].front();
        auto id = static_cast<VertexId>(out.size());
        out.push_back({spec[v].name, p, spec[v].height});
        for (auto it = children[v].rbegin(); it != children[v].rend(); ++it) stack.emplace_back(*it, id);
    }
    return out;
}

MergeTree::MergeTree(const TreeSpec& spec) {
    if (auto v = validate_tree(spec)) throw TreeError(*v);
    const std::size_t n = spec.size();
    parent_.resize(n);
    height_.resize(n);
    name_.resize(n);
    children_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        parent_[i] = spec[i].parent;
        height_[i] = spec[i].height;
        name_[i] = spec[i].name.empty() ? "v" + std::to_string(i) : spec[i].name;
        if (spec[i].parent == kNoVertex)
            root_ = static_cast<VertexId>(i);
        else
            children_[static_cast<std::size_t>(spec[i].parent)].push_back(static_cast<VertexId>(i));
    }
    // Auto-generated names may collide with user names.
    std::set<std::string> names(name_.begin(), name_.end());
    if (names.size() != n) throw TreeError({TreeViolationKind::duplicate_name, kNoVertex, "generated name collides"});
    index();
}

VertexId MergeTree::check(VertexId v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= parent_.size()) throw std::out_of_range("vertex id out of range");
    return v;
}

void MergeTree::index() {
    const std::size_t n = parent_.size();
    leaves_.clear();
    preorder_.clear();
    leaf_begin_.assign(n, 0);
    leaf_end_.assign(n, 0);
    pre_in_.assign(n, 0);
    pre_out_.assign(n, 0);
    depth_.assign(n, 0);
    min_leaf_height_ = kInfinity;

    std::size_t clock = 0;
    // (vertex, next child index)
    std::vector<std::pair<VertexId, std::size_t>> stack{{root_, 0}};
    pre_in_[root_] = clock++;
    preorder_.push_back(root_);
    leaf_begin_[root_] = 0;
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        if (next == 0 && children_[v].empty()) {
            leaf_begin_[v] = leaves_.size();
            leaves_.push_back(v);
            min_leaf_height_ = std::min(min_leaf_height_, height_[v]);
        }
        if (next < children_[v].size()) {
            VertexId c = children_[v][next++];
            depth_[c] = depth_[v] + 1;
            pre_in_[c] = clock++;
            preorder_.push_back(c);
            leaf_begin_[c] = leaves_.size();
            stack.emplace_back(c, 0);
            continue;
        }
        leaf_end_[v] = leaves_.size();
        pre_out_[v] = clock;
        stack.pop_back();
    }

    std::size_t levels = 1;
    while ((std::size_t{1} << levels) < n) ++levels;
    up_.assign(levels, std::vector<VertexId>(n));
    for (std::size_t v = 0; v < n; ++v) up_[0][v] = parent_[v] == kNoVertex ? root_ : parent_[v];
    for (std::size_t k = 1; k < levels; ++k)
        for (std::size_t v = 0; v < n; ++v) up_[k][v] = up_[k - 1][static_cast<std::size_t>(up_[k - 1][v])];
}

std::optional<VertexId> MergeTree::find(const std::string& name) const {
    auto it = std::find(name_.begin(), name_.end(), name);
    if (it == name_.end()) return std::nullopt;
    return static_cast<VertexId>(it - name_.begin());
}

std::size_t MergeTree::leaf_rank(VertexId leaf) const {
    if (!is_leaf(leaf)) throw std::invalid_argument("leaf_rank: " + name_[leaf] + " is not a leaf");
    return leaf_begin_[leaf];
}

std::vector<double> MergeTree::vertex_heights() const {
    std::vector<double> hs;
    for (std::size_t v = 0; v < size(); ++v)
        if (static_cast<VertexId>(v) != root_) hs.push_back(height_[v]);
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    return hs;
}

bool MergeTree::is_vertex_ancestor(VertexId a, VertexId d) const {
    check(a);
    check(d);
    return pre_in_[a] <= pre_in_[d] && pre_out_[d] <= pre_out_[a];
}

VertexId MergeTree::vertex_lca(VertexId a, VertexId b) const {
    if (is_vertex_ancestor(a, b)) return a;
    if (is_vertex_ancestor(b, a)) return b;
    for (std::size_t k = up_.size(); k-- > 0;) {
        VertexId u = up_[k][a];
        if (!is_vertex_ancestor(u, b)) a = u;
    }
    return parent_[a];
}

bool MergeTree::is_canonical(const TreePoint& x) const {
    if (x.vertex < 0 || static_cast<std::size_t>(x.vertex) >= size()) return false;
    if (x.vertex == root_) return x.height == kInfinity;
    return height_[x.vertex] <= x.height && x.height < height_[parent_[x.vertex]];
}

TreePoint MergeTree::canonical(const TreePoint& x) const {
    check(x.vertex);
    if (std::isnan(x.height) || x.height < height_[x.vertex])
        throw std::domain_error("point below its anchor vertex " + name_[x.vertex]);
    return ancestor_at(point(x.vertex), x.height);
}

TreePoint MergeTree::ancestor_at(const TreePoint& x, double h) const {
    check(x.vertex);
    if (std::isnan(h) || h < x.height) throw std::domain_error("ancestor_at: target height below the point");
    if (h == kInfinity) return point(root_);
    VertexId v = x.vertex;
    for (std::size_t k = up_.size(); k-- > 0;) {
        VertexId u = up_[k][v];
        if (u != root_ && height_[u] <= h) v = u;
    }
    if (parent_[v] != root_ && parent_[v] != kNoVertex && height_[parent_[v]] <= h) v = parent_[v];
    return TreePoint{v, h};
}

bool MergeTree::is_ancestor(const TreePoint& y, const TreePoint& x) const {
    if (y.height < x.height) return false;
    return ancestor_at(x, y.height) == y;
}

TreePoint MergeTree::lca(const TreePoint& x, const TreePoint& y) const {
    VertexId w = vertex_lca(x.vertex, y.vertex);
    double h = std::max({x.height, y.height, height_[w]});
    return ancestor_at(x, h);
}

std::vector<TreePoint> MergeTree::level_set(double h) const {
    if (!std::isfinite(h)) throw std::domain_error("level_set: height must be finite");
    std::vector<TreePoint> out;
    for (VertexId v : preorder_) {
        if (v == root_) continue;
        if (height_[v] <= h && h < height_[parent_[v]]) out.push_back({v, h});
    }
    return out;
}

MergeTree MergeTree::with_children_order(const std::vector<std::vector<VertexId>>& order) const {
    if (order.size() != size()) throw std::invalid_argument("children order: wrong vertex count");
    MergeTree t = *this;
    for (std::size_t v = 0; v < size(); ++v) {
        auto a = order[v];
        auto b = children_[v];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) throw std::invalid_argument("children order for " + name_[v] + " is not a permutation");
        t.children_[v] = order[v];
    }
    t.index();
    return t;
}

MergeTree MergeTree::shifted(double c) const {
    MergeTree t = *this;
    for (std::size_t v = 0; v < size(); ++v)
        if (static_cast<VertexId>(v) != root_) t.height_[v] += c;
    t.min_leaf_height_ += c;
    return t;
}

TreeSpec MergeTree::spec() const {
    std::vector<VertexId> renum(size());
    for (std::size_t i = 0; i < preorder_.size(); ++i) renum[preorder_[i]] = static_cast<VertexId>(i);
    TreeSpec out;
    out.reserve(size());
    for (VertexId v : preorder_)
        out.push_back({name_[v], parent_[v] == kNoVertex ? kNoVertex : renum[parent_[v]], height_[v]});
    return out;
}

MergeTree normalise_to_zero(const MergeTree& t) { return t.shifted(-t.min_leaf_height()); }

}  // namespace omt
