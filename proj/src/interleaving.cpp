#include "omt/interleaving.hpp"

#include "detail.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace omt {

TreeRef share(OrderedMergeTree t) { return std::make_shared<const OrderedMergeTree>(std::move(t)); }

namespace {

std::string describe(const MergeTree& t, const TreePoint& x) {
    std::ostringstream os;
    if (x.height == t.height(x.vertex))
        os << t.name(x.vertex);
    else
        os << t.name(x.vertex) << "@" << x.height;
    return os.str();
}

}  // namespace

namespace detail {

std::vector<double> witness_heights(const MergeTree& s, const MergeTree& t, double delta) {
    std::vector<double> hs = s.vertex_heights();
    for (double h : t.vertex_heights()) hs.push_back(h - delta);
    for (double h : s.vertex_heights()) hs.push_back(h - 2 * delta);
    std::erase_if(hs, [&](double h) { return h < s.min_leaf_height(); });
    return with_midpoints(hs);
}

std::vector<TreePoint> witness_points(const MergeTree& s, const MergeTree& t, double delta) {
    std::vector<TreePoint> out;
    for (double h : witness_heights(s, t, delta)) {
        auto level = s.level_set(h);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

double slack(const MergeTree& s, const MergeTree& t, double delta) {
    double m = std::max(1.0, std::isfinite(delta) ? std::abs(delta) : 0.0);
    for (const MergeTree* x : {&s, &t})
        for (double h : x->vertex_heights()) m = std::max(m, std::abs(h));
    return 1e-12 * m;
}

TreePoint lift(const MergeTree& t, const TreePoint& x, double h) {
    return h <= x.height ? x : t.ancestor_at(x, h);
}

bool near(const MergeTree& t, const TreePoint& x, const TreePoint& y, double eps) {
    if (x == y) return true;
    if (!std::isfinite(x.height) || !std::isfinite(y.height)) return false;
    const double top = t.lca(x, y).height;
    return top - x.height <= eps && top - y.height <= eps;
}

}  // namespace detail

TreePoint ShiftMap::operator()(const TreePoint& x) const {
    const MergeTree& s = source->tree();
    const MergeTree& t = target->tree();
    if (x.vertex == s.root()) return t.point(t.root());
    VertexId u = s.first_leaf(x.vertex);
    return detail::lift(t, leaf_images.at(u), x.height + delta);
}

const TreePoint& ShiftMap::image_of_leaf(VertexId u) const { return leaf_images.at(u); }

ShiftMap make_shift_map(TreeRef source, TreeRef target, double delta,
                        const std::map<VertexId, TreePoint>& leaf_images) {
    if (!source || !target) throw std::invalid_argument("shift map needs both trees");
    if (std::isnan(delta) || delta < 0) throw std::invalid_argument("shift map delta must be non-negative");
    ShiftMap a{source, target, delta, std::vector<TreePoint>(source->tree().size())};
    for (VertexId u : source->tree().leaves()) {
        auto it = leaf_images.find(u);
        if (it == leaf_images.end())
            throw std::invalid_argument("shift map: no image for leaf " + source->tree().name(u));
        a.leaf_images[u] = it->second;
    }
    return a;
}

ShiftMap identity_map(TreeRef t) {
    ShiftMap a{t, t, 0.0, std::vector<TreePoint>(t->tree().size())};
    for (VertexId u : t->tree().leaves()) a.leaf_images[u] = t->tree().point(u);
    return a;
}

std::optional<Violation> check_determination(const ShiftMap& a) {
    const MergeTree& s = a.source->tree();
    const MergeTree& t = a.target->tree();
    const double eps = detail::slack(s, t, a.delta);
    for (VertexId u : s.leaves()) {
        const TreePoint& y = a.leaf_images.at(u);
        if (!t.is_canonical(y)) return Violation{"C1", "image of " + s.name(u) + " is not a point of the target"};
        if (std::abs(y.height - (s.height(u) + a.delta)) > eps)
            return Violation{"C1", "image of " + s.name(u) + " is not delta higher"};
    }
    for (VertexId v : s.preorder()) {
        if (v == s.root() || s.is_leaf(v)) continue;
        double h = s.height(v) + a.delta;
        std::optional<TreePoint> img;
        for (VertexId c : s.children(v)) {
            TreePoint y = detail::lift(t, a.leaf_images[s.first_leaf(c)], h);
            if (img && !detail::near(t, *img, y, eps))
                return Violation{"C1", "leaves below " + s.name(v) + " disagree on its image"};
            img = y;
        }
    }
    return std::nullopt;
}

std::optional<Violation> check_interleaving(const ShiftMap& a, const ShiftMap& b) {
    if (a.delta != b.delta) throw std::invalid_argument("check_interleaving: maps have different delta");
    if (a.source != b.target || a.target != b.source)
        throw std::invalid_argument("check_interleaving: maps do not run between the same trees");
    if (auto v = check_determination(a)) return v;
    if (auto v = check_determination(b)) {
        v->condition = "C3";
        return v;
    }
    const MergeTree& s = a.source->tree();
    const MergeTree& t = a.target->tree();
    const double d = a.delta;
    const double eps = 4 * detail::slack(s, t, d);
    for (const auto& x : detail::witness_points(s, t, d)) {
        TreePoint back = b(a(x));
        if (!detail::near(s, back, s.ancestor_at(x, x.height + d + d), eps))
            return Violation{"C2", "beta(alpha(x)) is not x lifted by 2 delta at x = " + describe(s, x)};
    }
    for (const auto& y : detail::witness_points(t, s, d)) {
        TreePoint back = a(b(y));
        if (!detail::near(t, back, t.ancestor_at(y, y.height + d + d), eps))
            return Violation{"C4", "alpha(beta(y)) is not y lifted by 2 delta at y = " + describe(t, y)};
    }
    return std::nullopt;
}

std::optional<OrderWitness> check_monotone(const ShiftMap& a) {
    const MergeTree& s = a.source->tree();
    std::vector<double> hs = s.vertex_heights();
    for (double h : a.target->tree().vertex_heights()) hs.push_back(h - a.delta);
    std::erase_if(hs, [&](double h) { return h < s.min_leaf_height(); });
    for (double h : with_midpoints(hs)) {
        auto level = s.level_set(h);
        for (std::size_t i = 0; i + 1 < level.size(); ++i) {
            if (a.target->compare_points(a(level[i]), a(level[i + 1])) == std::strong_ordering::greater)
                return OrderWitness{level[i], level[i + 1]};
        }
    }
    return std::nullopt;
}

namespace {

struct Aligned {
    std::vector<double> params;
    std::vector<TreePoint> p, q;
};

Aligned align(const MergeTree& t, const MergeTree& t_prime, const CurveTrace& a, const CurveTrace& b) {
    Aligned out;
    bool same = a.steps.size() == b.steps.size();
    for (std::size_t k = 0; same && k < a.steps.size(); ++k) same = a.steps[k].param == b.steps[k].param;
    if (same) {
        for (std::size_t k = 0; k < a.steps.size(); ++k) {
            out.params.push_back(a.steps[k].param);
            out.p.push_back(a.steps[k].point);
            out.q.push_back(b.steps[k].point);
        }
        return out;
    }
    for (const auto& s : a.steps) out.params.push_back(s.param);
    for (const auto& s : b.steps) out.params.push_back(s.param);
    std::sort(out.params.begin(), out.params.end());
    out.params.erase(std::unique(out.params.begin(), out.params.end()), out.params.end());
    for (double s : out.params) {
        out.p.push_back(point_at(t, a, s));
        out.q.push_back(point_at(t_prime, b, s));
    }
    return out;
}

double gap(const TreePoint& x, const TreePoint& y) {
    if (x.height == kInfinity && y.height == kInfinity) return 0;
    return std::abs(x.height - y.height);
}

bool within(const TreePoint& x, const TreePoint& y, double delta) {
    if (x.height == kInfinity || y.height == kInfinity) return x.height == y.height;
    return x.height <= y.height + delta && y.height <= x.height + delta;
}

std::vector<TreePoint> leaf_table(const MergeTree& s, const MergeTree& t, const std::vector<TreePoint>& from,
                                  const std::vector<TreePoint>& to, double delta, double eps) {
    std::vector<TreePoint> img(s.size());
    for (VertexId u : s.leaves()) {
        auto it = std::find(from.begin(), from.end(), s.point(u));
        if (it == from.end()) throw std::invalid_argument("trace never visits leaf " + s.name(u));
        const TreePoint& partner = to[static_cast<std::size_t>(it - from.begin())];
        double h = s.height(u) + delta;
        if (partner.height > h + eps)
            throw std::invalid_argument("trace partner of leaf " + s.name(u) + " is too high");
        img[u] = detail::lift(t, partner, h);
    }
    return img;
}

}  // namespace

double matched_cost(const MergeTree& t, const MergeTree& t_prime, const CurveTrace& trace,
                    const CurveTrace& trace_prime) {
    auto al = align(t, t_prime, trace, trace_prime);
    double worst = 0;
    for (std::size_t k = 0; k < al.p.size(); ++k) worst = std::max(worst, gap(al.p[k], al.q[k]));
    return worst;
}

std::pair<ShiftMap, ShiftMap> matching_to_interleaving(TreeRef t, TreeRef t_prime, const CurveTrace& trace,
                                                       const CurveTrace& trace_prime, double delta) {
    if (std::isnan(delta) || delta < 0) throw std::invalid_argument("delta must be non-negative");
    const MergeTree& s = t->tree();
    const MergeTree& r = t_prime->tree();
    check_trace(s, trace);
    check_trace(r, trace_prime);
    auto al = align(s, r, trace, trace_prime);
    const double eps = detail::slack(s, r, delta);
    std::size_t worst = 0;
    bool bad = false;
    for (std::size_t k = 0; k < al.p.size(); ++k) {
        if (!within(al.p[k], al.q[k], delta + eps)) bad = true;
        if (gap(al.p[k], al.q[k]) > gap(al.p[worst], al.q[worst])) worst = k;
    }
    if (bad) {
        std::ostringstream os;
        os << "traces not delta-matched: gap " << gap(al.p[worst], al.q[worst]) << " at param " << al.params[worst];
        throw std::invalid_argument(os.str());
    }
    ShiftMap a{t, t_prime, delta, leaf_table(s, r, al.p, al.q, delta, eps)};
    ShiftMap b{t_prime, t, delta, leaf_table(r, s, al.q, al.p, delta, eps)};
    return {std::move(a), std::move(b)};
}

std::vector<TreePoint> images_at_visits(const MergeTree& t, const MergeTree& t_prime, const CurveTrace& trace,
                                        const CurveTrace& trace_prime, const TreePoint& x, double delta) {
    auto al = align(t, t_prime, trace, trace_prime);
    const double h = x.height + delta;
    std::vector<TreePoint> out;
    for (std::size_t k = 0; k < al.p.size(); ++k) {
        if (al.p[k] == x) out.push_back(detail::lift(t_prime, al.q[k], h));
        if (k + 1 == al.p.size()) break;
        const auto &a = al.p[k], &b = al.p[k + 1];
        if (a == b || !std::isfinite(a.height) || !std::isfinite(b.height)) continue;
        if (!std::isfinite(al.q[k].height) || !std::isfinite(al.q[k + 1].height)) continue;
        double lo = std::min(a.height, b.height), hi = std::max(a.height, b.height);
        if (!(lo < x.height && x.height < hi)) continue;
        if (t.ancestor_at(a.height < b.height ? a : b, x.height) != x) continue;
        double f = (x.height - a.height) / (b.height - a.height);
        const auto &qa = al.q[k], &qb = al.q[k + 1];
        const TreePoint& qlow = qa.height <= qb.height ? qa : qb;
        double g = qa.height + f * (qb.height - qa.height);
        g = std::clamp(g, qlow.height, std::max(qlow.height, h));
        out.push_back(detail::lift(t_prime, t_prime.ancestor_at(qlow, g), h));
    }
    return out;
}

std::pair<CurveTrace, CurveTrace> traces_from_matching(const MergeTree& t, const MergeTree& t_prime,
                                                       const InducedCurve& c, const InducedCurve& c_prime,
                                                       const Matching& m) {
    const double eps = detail::slack(t, t_prime, 0);
    auto locate = [eps](const MergeTree& tree, const std::vector<TreePoint>& ext, const CurvePos& pos) {
        const TreePoint& a = ext[pos.segment];
        const TreePoint& b = ext[pos.segment + 1];
        const TreePoint& lower = a.height <= b.height ? a : b;
        const TreePoint& upper = a.height <= b.height ? b : a;
        if (pos.height <= lower.height + eps) return lower;
        if (std::isfinite(upper.height) && pos.height >= upper.height - eps) return upper;
        return tree.ancestor_at(lower, pos.height);
    };
    std::vector<TreePoint> p, q;
    for (std::size_t k = 0; k < m.points.size(); ++k) {
        TreePoint x, y;
        if (k == 0 || k + 1 == m.points.size()) {
            x = t.point(t.root());
            y = t_prime.point(t_prime.root());
        } else {
            x = locate(t, c.extrema, m.points[k].p);
            y = locate(t_prime, c_prime.extrema, m.points[k].q);
        }
        if (!p.empty() && p.back() == x && q.back() == y) continue;
        p.push_back(x);
        q.push_back(y);
    }
    return {CurveTrace::uniform(p), CurveTrace::uniform(q)};
}

namespace {

void append_walk(const MergeTree& t, VertexId c, std::vector<TreePoint>& out) {
    std::vector<std::pair<VertexId, std::size_t>> stack{{c, 0}};
    out.push_back(t.point(c));
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        auto kids = t.children(v);
        if (next < kids.size()) {
            VertexId k = kids[next++];
            out.push_back(t.point(k));
            stack.emplace_back(k, 0);
            continue;
        }
        stack.pop_back();
        if (!stack.empty()) out.push_back(t.point(stack.back().first));
    }
}

struct Planted {
    TreePoint root;  // y
    VertexId child;  // v
};

}  // namespace

std::pair<CurveTrace, CurveTrace> interleaving_to_matching(const ShiftMap& a, const ShiftMap& b) {
    if (auto v = check_interleaving(a, b))
        throw std::invalid_argument("not an interleaving: " + v->condition + ": " + v->detail);
    if (check_monotone(a) || check_monotone(b)) throw std::invalid_argument("interleaving is not monotone");
    const MergeTree& s = a.source->tree();
    const MergeTree& t = a.target->tree();
    const double d = a.delta;

    // tau and tau'_0 = alpha o tau, refined where tau'_0 crosses a critical height.
    auto walk = in_order_walk(*a.source).trace.points();
    std::vector<TreePoint> q0;
    for (const auto& x : walk) q0.push_back(a(x));
    auto hs = refinement_heights(t, q0);
    std::vector<TreePoint> jp, jq;
    for (std::size_t k = 0; k < walk.size(); ++k) {
        jp.push_back(walk[k]);
        jq.push_back(q0[k]);
        if (k + 1 == walk.size()) break;
        const auto &pa = walk[k], &pb = walk[k + 1];
        const auto &qa = q0[k], &qb = q0[k + 1];
        if (qa == qb) continue;
        bool up = qa.height < qb.height;
        const TreePoint& plow = up ? pa : pb;
        const TreePoint& phigh = up ? pb : pa;
        const TreePoint& qlow = up ? qa : qb;
        double lo = std::min(qa.height, qb.height), hi = std::max(qa.height, qb.height);
        auto first = std::upper_bound(hs.begin(), hs.end(), lo);
        auto last = std::lower_bound(hs.begin(), hs.end(), hi);
        std::vector<double> between(first, last);
        if (!up) std::reverse(between.begin(), between.end());
        for (double y : between) {
            double x = std::clamp(y - d, plow.height, phigh.height);
            jp.push_back(s.ancestor_at(plow, x));
            jq.push_back(t.ancestor_at(qlow, y));
        }
    }

    // tau'_1: violating subcurves flattened to their left endpoint.
    for (auto [l, r] : violating_index_intervals(jq))
        for (std::size_t k = l + 1; k <= r; ++k) jq[k] = jq[l];

    // Lowest visited height per branch of the target.
    std::vector<double> low(t.size(), kInfinity);
    for (const auto& y : jq)
        if (y.vertex != t.root()) low[y.vertex] = std::min(low[y.vertex], y.height);
    {
        auto pre = t.preorder();
        for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
            VertexId v = *it;
            if (v != t.root() && t.parent(v) != t.root()) low[t.parent(v)] = std::min(low[t.parent(v)], low[v]);
        }
    }

    // Maximal unvisited planted subtrees.
    std::vector<Planted> planted;
    {
        std::vector<VertexId> stack{t.top_vertex()};
        while (!stack.empty()) {
            VertexId c = stack.back();
            stack.pop_back();
            if (low[c] == kInfinity)
                planted.push_back({t.point(t.parent(c)), c});
            else if (low[c] > t.height(c))
                planted.push_back({TreePoint{c, low[c]}, c});
            else
                for (VertexId k : t.children(c)) stack.push_back(k);
        }
    }

    auto run_start = [&](std::size_t k) {
        while (k > 0 && jq[k - 1] == jq[k]) --k;
        return k;
    };
    auto in_branch = [&](VertexId c, const TreePoint& y) { return t.is_vertex_ancestor(c, y.vertex); };

    std::vector<std::vector<VertexId>> anchored(jq.size());
    for (const auto& u : planted) {
        std::optional<std::size_t> at;
        if (u.root.height != t.height(u.root.vertex)) {
            auto it = std::find(jq.begin(), jq.end(), u.root);
            if (it != jq.end()) at = static_cast<std::size_t>(it - jq.begin());
        } else {
            VertexId p = u.root.vertex;
            auto kids = t.children(p);
            auto pos = std::find(kids.begin(), kids.end(), u.child);
            std::optional<std::size_t> entry;
            for (auto it = pos + 1; it != kids.end() && !entry; ++it) {
                if (low[*it] == kInfinity) continue;
                for (std::size_t k = 0; k < jq.size(); ++k)
                    if (in_branch(*it, jq[k])) {
                        entry = k;
                        break;
                    }
            }
            std::size_t limit = entry ? *entry : jq.size();
            for (std::size_t k = limit; k-- > 0;)
                if (jq[k] == u.root) {
                    at = run_start(k);
                    break;
                }
        }
        if (!at) throw std::logic_error("interleaving_to_matching: no paused interval for a planted subtree");
        anchored[*at].push_back(u.child);
    }

    std::vector<TreePoint> out_p, out_q;
    for (std::size_t k = 0; k < jq.size(); ++k) {
        out_p.push_back(jp[k]);
        out_q.push_back(jq[k]);
        auto& here = anchored[k];
        std::sort(here.begin(), here.end(), [&](VertexId x, VertexId y) { return t.leaf_begin(x) < t.leaf_begin(y); });
        for (VertexId c : here) {
            std::vector<TreePoint> sub;
            append_walk(t, c, sub);
            sub.push_back(jq[k]);
            for (const auto& y : sub) {
                out_p.push_back(jp[k]);
                out_q.push_back(y);
            }
        }
    }
    return {CurveTrace::uniform(out_p), CurveTrace::uniform(out_q)};
}

DistanceCertificate monotone_interleaving_distance(TreeRef t, TreeRef t_prime) {
    auto c = in_order_walk(*t);
    auto c_prime = in_order_walk(*t_prime);
    auto fr = compute_frechet(c.curve, c_prime.curve);
    auto [tr, tr_prime] = traces_from_matching(t->tree(), t_prime->tree(), c, c_prime, fr.matching);
    auto [alpha, beta] = matching_to_interleaving(t, t_prime, tr, tr_prime, fr.delta);
    return DistanceCertificate{fr.delta, std::move(alpha), std::move(beta), std::move(fr.matching), std::move(tr),
                               std::move(tr_prime)};
}

double monotone_distance(const OrderedMergeTree& t, const OrderedMergeTree& t_prime) {
    auto p = in_order_walk(t).curve;
    auto q = in_order_walk(t_prime).curve;
    return frechet_distance(p, q, frechet_cap(p, q));
}

}  // namespace omt
