#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "detail.hpp"
#include "omt/interleaving.hpp"

namespace omt {

namespace {

// Per target vertex: lowest height of an image point in its branch, i.e. on
// its edge or in its subtree.
std::vector<double> image_low(const ShiftMap& a) {
    const MergeTree& s = a.source->tree();
    const MergeTree& t = a.target->tree();
    std::vector<double> low(t.size(), kInfinity);
    for (VertexId u : s.leaves()) {
        const TreePoint& y = a.leaf_images[u];
        if (y.vertex != t.root()) low[y.vertex] = std::min(low[y.vertex], y.height);
    }
    auto pre = t.preorder();
    for (auto it = pre.rbegin(); it != pre.rend(); ++it)
        if (*it != t.root() && t.parent(*it) != t.root())
            low[t.parent(*it)] = std::min(low[t.parent(*it)], low[*it]);
    return low;
}

std::vector<double> lowest_leaf(const MergeTree& t) {
    std::vector<double> low(t.size(), kInfinity);
    auto pre = t.preorder();
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
        VertexId v = *it;
        if (t.is_leaf(v)) low[v] = t.height(v);
        if (v != t.root()) low[t.parent(v)] = std::min(low[t.parent(v)], low[v]);
    }
    return low;
}

TreePoint lift_to_image(const MergeTree& t, const std::vector<double>& low, const TreePoint& y) {
    VertexId v = y.vertex;
    if (v == t.root() || low[v] <= y.height) return y;
    while (true) {
        if (low[v] < kInfinity) return TreePoint{v, low[v]};
        VertexId p = t.parent(v);
        if (p == t.root() || low[p] <= t.height(p)) return t.point(p);
        v = p;
    }
}

std::string where(const MergeTree& t, const TreePoint& x) {
    std::ostringstream os;
    os << t.name(x.vertex) << "@" << x.height;
    return os.str();
}

std::vector<TreePoint> target_witnesses(const ShiftMap& a) {
    const MergeTree& s = a.source->tree();
    const MergeTree& t = a.target->tree();
    std::vector<double> hs = t.vertex_heights();
    for (double h : s.vertex_heights()) hs.push_back(h + a.delta);
    std::erase_if(hs, [&](double h) { return h < t.min_leaf_height(); });
    std::vector<TreePoint> out;
    for (double h : with_midpoints(hs)) {
        auto level = t.level_set(h);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

}  // namespace

bool in_image(const ShiftMap& a, const TreePoint& y) {
    const MergeTree& t = a.target->tree();
    return y.vertex == t.root() || image_low(a)[y.vertex] <= y.height;
}

TreePoint lowest_image_ancestor(const ShiftMap& a, const TreePoint& y) {
    return lift_to_image(a.target->tree(), image_low(a), y);
}

std::optional<Violation> check_good_map(const ShiftMap& a, GoodMapVariant variant) {
    if (auto v = check_determination(a)) {
        v->condition = variant == GoodMapVariant::tw ? "T1" : "G1";
        return v;
    }
    const MergeTree& s = a.source->tree();
    const MergeTree& t = a.target->tree();
    const double d = a.delta;
    const double eps = 4 * detail::slack(s, t, d);
    auto low = image_low(a);

    if (variant == GoodMapVariant::tw) {
        auto xs = detail::witness_points(s, t, d);
        std::vector<TreePoint> img, lifted;
        for (const auto& x : xs) {
            img.push_back(a(x));
            lifted.push_back(s.ancestor_at(x, x.height + 2 * d));
        }
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < xs.size(); ++j) {
                if (i == j || xs[j].height > xs[i].height) continue;
                if (t.is_ancestor(img[i], img[j]) && !s.is_ancestor(lifted[i], lifted[j]))
                    return Violation{"T2", "images of " + where(s, xs[j]) + " and " + where(s, xs[i]) +
                                               " are nested but their 2 delta lifts are not"};
            }
        for (const auto& y : target_witnesses(a)) {
            if (y.vertex == t.root() || low[y.vertex] <= y.height) continue;
            TreePoint f = lift_to_image(t, low, y);
            if (f.height - y.height > 2 * d + eps)
                return Violation{"T3", "point " + where(t, y) + " is more than 2 delta below the image"};
        }
        return std::nullopt;
    }

    for (double h : detail::witness_heights(s, t, d)) {
        std::vector<std::pair<TreePoint, TreePoint>> groups;
        for (const auto& x : s.level_set(h)) {
            TreePoint y = a(x);
            auto it = std::find_if(groups.begin(), groups.end(),
                                   [&](const auto& g) { return detail::near(t, g.first, y, eps); });
            if (it == groups.end())
                groups.emplace_back(y, x);
            else
                it->second = s.lca(it->second, x);
        }
        for (const auto& [y, l] : groups)
            if (l.height - h > 2 * d + eps)
                return Violation{"G2", "preimage of " + where(t, y) + " spans more than 2 delta"};
    }
    auto lowest = lowest_leaf(t);
    for (VertexId c : t.preorder()) {
        if (c == t.root()) continue;
        VertexId p = t.parent(c);
        bool parent_in = p == t.root() || low[p] <= t.height(p);
        double depth = -kInfinity;
        if (low[c] == kInfinity && parent_in)
            depth = t.height(p) - lowest[c];
        else if (low[c] < kInfinity && low[c] > t.height(c))
            depth = low[c] - lowest[c];
        if (depth > 2 * d + eps) return Violation{"G3", "unmapped part below " + t.name(c) + " is deeper than 2 delta"};
    }
    return std::nullopt;
}

Labelling good_to_labelling(const ShiftMap& a, std::vector<LabellingConstructionState>* states) {
    if (auto v = check_good_map(a, GoodMapVariant::tw))
        throw std::invalid_argument("not a good map: " + v->condition + ": " + v->detail);
    if (check_monotone(a)) throw std::invalid_argument("good map is not monotone");
    const MergeTree& s = a.source->tree();
    const MergeTree& t = a.target->tree();
    const double d = a.delta;
    const double eps = 4 * detail::slack(s, t, d);
    auto low = image_low(a);

    Labelling lab{a.source, a.target, {}, {}};
    for (VertexId u : s.leaves()) {
        lab.pi.push_back(s.point(u));
        lab.pi_prime.push_back(a.leaf_images[u]);
    }
    std::vector<TreePoint> first_images = lab.pi_prime;

    // Source points delta below y that map to y, in layer order.
    auto preimage = [&](const TreePoint& y) {
        std::vector<TreePoint> out;
        const double h = y.height - d;
        for (VertexId u : s.leaves()) {
            if (s.height(u) > h + eps) continue;
            TreePoint z = detail::lift(t, a.leaf_images[u], y.height);
            if (std::abs(z.height - y.height) > eps) continue;
            if (t.ancestor_at(z.height <= y.height ? z : y, std::max(z.height, y.height)) !=
                (z.height <= y.height ? y : z))
                continue;
            TreePoint x = detail::lift(s, s.point(u), h);
            if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
        }
        std::sort(out.begin(), out.end(), [&](const TreePoint& p, const TreePoint& q) {
            return a.source->compare_points(p, q) == std::strong_ordering::less;
        });
        return out;
    };
    auto layer_max = [&](const std::vector<TreePoint>& xs) {
        return *std::max_element(xs.begin(), xs.end(), [&](const TreePoint& p, const TreePoint& q) {
            return a.source->compare_points(p, q) == std::strong_ordering::less;
        });
    };

    for (VertexId w : t.leaves()) {
        LabellingConstructionState st;
        st.w = w;
        st.w_f = lift_to_image(t, low, t.point(w));
        for (std::size_t r = t.leaf_begin(st.w_f.vertex); r < t.leaf_end(st.w_f.vertex); ++r)
            st.leaves.push_back(t.leaves()[r]);
        st.index = static_cast<std::size_t>(std::find(st.leaves.begin(), st.leaves.end(), w) - st.leaves.begin());

        for (std::size_t k = 0; k < st.leaves.size(); ++k) {
            TreePoint f = lift_to_image(t, low, t.point(st.leaves[k]));
            if (f != st.w_f) {
                st.s.push_back(k);
                st.h1 = std::max(st.h1, f.height);
                if (k < st.index) st.s_i.push_back(k);
            }
        }
        auto xs = preimage(st.w_f);
        if (xs.empty()) throw std::logic_error("good_to_labelling: image point without preimage");

        if (st.s_i.empty()) {
            st.chosen = xs.front();
        } else {
            for (const auto& y : first_images)
                if (y != st.w_f && t.is_ancestor(st.w_f, y)) st.h2 = std::max(st.h2, y.height);
            st.h = std::max(st.h1, st.h2);
            if (!(st.h < st.w_f.height)) throw std::logic_error("good_to_labelling: lifted height reaches w^F");
            const double h_src = st.w_f.height - d;
            for (std::size_t k : st.s) {
                TreePoint lifted = t.ancestor_at(t.point(st.leaves[k]), st.h);
                std::vector<TreePoint> xk;
                for (const auto& z : preimage(lifted)) {
                    TreePoint x = detail::lift(s, z, h_src);
                    if (std::find(xk.begin(), xk.end(), x) == xk.end()) xk.push_back(x);
                }
                if (xk.empty()) throw std::logic_error("good_to_labelling: lifted point without preimage");
                st.lifted.push_back(lifted);
                st.x_sets.push_back(std::move(xk));
            }
            for (std::size_t i = 0; i < st.s.size(); ++i)
                for (std::size_t j = i + 1; j < st.s.size(); ++j) {
                    if (st.lifted[i] == st.lifted[j]) continue;
                    for (const auto& p : st.x_sets[i])
                        for (const auto& q : st.x_sets[j])
                            if (a.source->compare_points(p, q) == std::strong_ordering::greater)
                                throw std::logic_error("good_to_labelling: preimage sets out of order");
                }
            std::size_t pos = static_cast<std::size_t>(
                std::find(st.s.begin(), st.s.end(), st.s_i.back()) - st.s.begin());
            st.chosen = layer_max(st.x_sets[pos]);
        }
        lab.pi.push_back(st.chosen);
        lab.pi_prime.push_back(t.point(w));
        if (states) states->push_back(std::move(st));
    }
    return lab;
}

}  // namespace omt
