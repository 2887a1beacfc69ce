#include "omt/ordering.hpp"

#include <algorithm>
#include <cmath>

namespace omt {

namespace {

std::vector<std::size_t> positions(const MergeTree& t, const LeafOrder& order) {
    if (order.size() != t.leaves().size()) throw std::invalid_argument("leaf order: wrong number of leaves");
    std::vector<std::size_t> pos(t.size(), order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        VertexId u = order[i];
        if (u < 0 || static_cast<std::size_t>(u) >= t.size() || !t.is_leaf(u))
            throw std::invalid_argument("leaf order: entry is not a leaf");
        if (pos[u] != order.size()) throw std::invalid_argument("leaf order: repeated leaf " + t.name(u));
        pos[u] = i;
    }
    return pos;
}

}  // namespace

std::optional<LeafTriple> check_leaf_order(const MergeTree& t, const LeafOrder& order) {
    auto pos = positions(t, order);
    auto pre = t.preorder();
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
        VertexId v = *it;
        if (t.is_leaf(v)) continue;
        std::size_t lo = order.size(), hi = 0;
        auto below = t.leaves().subspan(t.leaf_begin(v), t.leaf_end(v) - t.leaf_begin(v));
        for (VertexId u : below) {
            lo = std::min(lo, pos[u]);
            hi = std::max(hi, pos[u]);
        }
        if (hi - lo + 1 == below.size()) continue;
        for (std::size_t p = lo + 1; p < hi; ++p) {
            if (!t.is_vertex_ancestor(v, order[p])) return LeafTriple{order[lo], order[p], order[hi]};
        }
    }
    return std::nullopt;
}

OrderedMergeTree::OrderedMergeTree(const MergeTree& tree, const LeafOrder& order) : tree_(tree) {
    if (auto bad = check_leaf_order(tree, order))
        throw std::invalid_argument("leaf order does not separate subtrees: " + tree.name(bad->u) +
                                    " lies between " + tree.name(bad->u1) + " and " + tree.name(bad->u2));
    auto pos = positions(tree, order);
    std::vector<std::size_t> first(tree.size(), order.size());
    auto pre = tree.preorder();
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
        VertexId v = *it;
        if (tree.is_leaf(v))
            first[v] = pos[v];
        else
            for (VertexId c : tree.children(v)) first[v] = std::min(first[v], first[c]);
    }
    std::vector<std::vector<VertexId>> kids(tree.size());
    for (std::size_t v = 0; v < tree.size(); ++v) {
        auto ch = tree.children(static_cast<VertexId>(v));
        kids[v].assign(ch.begin(), ch.end());
        std::sort(kids[v].begin(), kids[v].end(), [&](VertexId a, VertexId b) { return first[a] < first[b]; });
    }
    tree_ = tree.with_children_order(kids);
}

OrderedMergeTree::OrderedMergeTree(MergeTree tree) : tree_(std::move(tree)) {}

std::strong_ordering OrderedMergeTree::compare(const TreePoint& x1, const TreePoint& x2) const {
    if (x1.height != x2.height) throw std::invalid_argument("layer compare: points at different heights");
    if (x1 == x2) return std::strong_ordering::equal;
    return tree_.leaf_begin(x1.vertex) <=> tree_.leaf_begin(x2.vertex);
}

std::strong_ordering OrderedMergeTree::compare_points(const TreePoint& x1, const TreePoint& x2) const {
    double h = std::max(x1.height, x2.height);
    return compare(tree_.ancestor_at(x1, h), tree_.ancestor_at(x2, h));
}

std::strong_ordering induced_layer_compare(const OrderedMergeTree& omt, const TreePoint& x1, const TreePoint& x2) {
    return omt.compare(x1, x2);
}

namespace {

template <class T, class Cmp>
std::optional<std::pair<T, T>> sort_checked(std::vector<T>& items, Cmp cmp) {
    // Binary insertion never reads outside the array, whatever cmp answers.
    std::vector<T> out;
    out.reserve(items.size());
    for (const T& x : items) {
        std::size_t lo = 0, hi = out.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cmp(out[mid], x) == std::strong_ordering::greater)
                hi = mid;
            else
                lo = mid + 1;
        }
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(lo), x);
    }
    items = std::move(out);
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (cmp(items[i], items[i]) != std::strong_ordering::equal) return std::pair{items[i], items[i]};
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            if (cmp(items[i], items[j]) != std::strong_ordering::less ||
                cmp(items[j], items[i]) != std::strong_ordering::greater)
                return std::pair{items[i], items[j]};
        }
    }
    return std::nullopt;
}

}  // namespace

LeafOrder induced_leaf_order(const MergeTree& t, const LayerComparator& cmp) {
    LeafOrder leaves(t.leaves().begin(), t.leaves().end());
    auto leaf_cmp = [&](VertexId a, VertexId b) {
        double h = std::max(t.height(a), t.height(b));
        return cmp(t.ancestor_at(t.point(a), h), t.ancestor_at(t.point(b), h));
    };
    if (auto bad = sort_checked(leaves, leaf_cmp))
        throw InconsistentComparator("inconsistent comparator on leaves " + t.name(bad->first) + ", " +
                                     t.name(bad->second));
    return leaves;
}

std::vector<double> with_midpoints(std::vector<double> hs) {
    std::erase_if(hs, [](double h) { return !std::isfinite(h); });
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    if (hs.empty()) return hs;
    std::vector<double> out;
    out.reserve(2 * hs.size() + 1);
    for (std::size_t i = 0; i < hs.size(); ++i) {
        out.push_back(hs[i]);
        if (i + 1 < hs.size()) {
            double mid = hs[i] + (hs[i + 1] - hs[i]) / 2;
            if (mid > hs[i] && mid < hs[i + 1]) out.push_back(mid);
        }
    }
    out.push_back(hs.back() + 1);
    return out;
}

std::optional<LayerWitness> check_layer_consistency(const MergeTree& t, const LayerComparator& cmp,
                                                    const std::vector<double>& sample_heights) {
    auto hs = t.vertex_heights();
    for (double h : sample_heights)
        if (std::isfinite(h) && h >= t.min_leaf_height()) hs.push_back(h);
    hs = with_midpoints(hs);

    std::vector<TreePoint> prev;
    double prev_h = 0;
    for (double h : hs) {
        auto level = t.level_set(h);
        auto sorted = level;
        if (auto bad = sort_checked(sorted, cmp))
            return LayerWitness{h, h, bad->first, bad->second, "not a total order"};
        for (const auto& a : prev) {
            for (const auto& b : prev) {
                auto below = cmp(a, b);
                auto above = cmp(t.ancestor_at(a, h), t.ancestor_at(b, h));
                if (below == std::strong_ordering::less && above == std::strong_ordering::greater)
                    return LayerWitness{prev_h, h, a, b, "order reversed going up"};
                if (above == std::strong_ordering::less && below != std::strong_ordering::less)
                    return LayerWitness{prev_h, h, a, b, "descendants not ordered"};
            }
        }
        prev = std::move(level);
        prev_h = h;
    }
    return std::nullopt;
}

std::optional<LayerWitness> check_layer_consistency(const OrderedMergeTree& omt,
                                                    const std::vector<double>& sample_heights) {
    return check_layer_consistency(
        omt.tree(), [&](const TreePoint& a, const TreePoint& b) { return omt.compare(a, b); }, sample_heights);
}

}  // namespace omt
