#include "omt/curves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace omt {

Curve1D::Curve1D(const std::vector<double>& samples) {
    if (samples.size() < 3) throw std::invalid_argument("curve needs two sentinels and one interior sample");
    if (samples.front() != kInfinity || samples.back() != kInfinity)
        throw std::invalid_argument("curve must start and end at +inf");
    for (std::size_t i = 1; i + 1 < samples.size(); ++i)
        if (!std::isfinite(samples[i])) throw std::invalid_argument("interior curve samples must be finite");
    for (double v : samples) {
        if (!heights_.empty() && heights_.back() == v) continue;
        auto n = heights_.size();
        if (n >= 2) {
            double a = heights_[n - 2], b = heights_[n - 1];
            if ((a < b && b < v) || (a > b && b > v)) {
                heights_.back() = v;
                continue;
            }
        }
        heights_.push_back(v);
    }
}

double Curve1D::param(std::size_t i) const {
    return static_cast<double>(i) / static_cast<double>(heights_.size() - 1);
}

Curve1D Curve1D::reversed() const {
    Curve1D c = *this;
    std::reverse(c.heights_.begin(), c.heights_.end());
    return c;
}

Curve1D Curve1D::shifted(double c) const {
    Curve1D out = *this;
    for (std::size_t i = 1; i + 1 < out.heights_.size(); ++i) out.heights_[i] += c;
    return out;
}

double Curve1D::min_height() const { return *std::min_element(heights_.begin(), heights_.end()); }

double Curve1D::max_finite_height() const {
    return *std::max_element(heights_.begin() + 1, heights_.end() - 1);
}

std::vector<TreePoint> CurveTrace::points() const {
    std::vector<TreePoint> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.point);
    return out;
}

CurveTrace CurveTrace::uniform(const std::vector<TreePoint>& points) {
    CurveTrace tr;
    tr.steps.reserve(points.size());
    const double n = points.size() > 1 ? static_cast<double>(points.size() - 1) : 1.0;
    for (std::size_t i = 0; i < points.size(); ++i) tr.steps.push_back({static_cast<double>(i) / n, points[i]});
    return tr;
}

InducedCurve in_order_walk(const OrderedMergeTree& omt) {
    const MergeTree& t = omt.tree();
    std::vector<TreePoint> pts{t.point(t.root())};
    std::vector<std::pair<VertexId, std::size_t>> stack{{t.top_vertex(), 0}};
    pts.push_back(t.point(t.top_vertex()));
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        auto kids = t.children(v);
        if (next < kids.size()) {
            VertexId c = kids[next++];
            pts.push_back(t.point(c));
            stack.emplace_back(c, 0);
            continue;
        }
        stack.pop_back();
        if (!stack.empty()) pts.push_back(t.point(stack.back().first));
    }
    pts.push_back(t.point(t.root()));

    InducedCurve out;
    out.trace = CurveTrace::uniform(pts);
    std::vector<double> hs;
    for (const auto& p : pts) {
        if (!out.extrema.empty() && out.extrema.back().height == p.height) continue;
        auto n = out.extrema.size();
        if (n >= 2) {
            double a = out.extrema[n - 2].height, b = out.extrema[n - 1].height;
            if ((a < b && b < p.height) || (a > b && b > p.height)) {
                out.extrema.back() = p;
                continue;
            }
        }
        out.extrema.push_back(p);
    }
    for (const auto& p : out.extrema) hs.push_back(p.height);
    out.curve = Curve1D(hs);
    return out;
}

void check_trace(const MergeTree& t, const CurveTrace& trace) {
    if (trace.steps.size() < 2) throw std::invalid_argument("trace needs at least two steps");
    if (trace.steps.front().point != t.point(t.root()) || trace.steps.back().point != t.point(t.root()))
        throw std::invalid_argument("trace must start and end at the root");
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const auto& p = trace.steps[k].point;
        if (!t.is_canonical(p)) throw std::invalid_argument("trace step " + std::to_string(k) + " is not canonical");
        if (k == 0) continue;
        const auto& q = trace.steps[k - 1].point;
        if (!(trace.steps[k - 1].param < trace.steps[k].param))
            throw std::invalid_argument("trace params must increase at step " + std::to_string(k));
        if (!t.is_ancestor(p, q) && !t.is_ancestor(q, p))
            throw std::invalid_argument("trace is discontinuous at step " + std::to_string(k));
    }
}

Curve1D curve_of(const CurveTrace& trace) {
    std::vector<double> hs;
    for (const auto& s : trace.steps) hs.push_back(s.point.height);
    return Curve1D(hs);
}

namespace {

// Finite stand-in for the root height when interpolating along trunk segments.
double trace_cap(const CurveTrace& trace) {
    double m = 0;
    bool any = false;
    for (const auto& s : trace.steps)
        if (std::isfinite(s.point.height)) {
            m = any ? std::max(m, s.point.height) : s.point.height;
            any = true;
        }
    return m + 1;
}

double finite_or(double h, double cap) { return std::isfinite(h) ? h : cap; }

std::size_t segment_of(const CurveTrace& trace, double param) {
    if (trace.steps.empty()) throw std::invalid_argument("empty trace");
    if (param < trace.steps.front().param || param > trace.steps.back().param)
        throw std::out_of_range("param outside the trace");
    auto it = std::upper_bound(trace.steps.begin(), trace.steps.end(), param,
                               [](double p, const TraceStep& s) { return p < s.param; });
    auto k = static_cast<std::size_t>(it - trace.steps.begin());
    return k == 0 ? 0 : k - 1;
}

}  // namespace

double trace_height_at(const CurveTrace& trace, double param) {
    std::size_t k = segment_of(trace, param);
    const auto& a = trace.steps[k];
    if (a.param == param || k + 1 == trace.steps.size()) return a.point.height;
    const auto& b = trace.steps[k + 1];
    double cap = trace_cap(trace);
    double ha = finite_or(a.point.height, cap), hb = finite_or(b.point.height, cap);
    return ha + (hb - ha) * (param - a.param) / (b.param - a.param);
}

TreePoint point_at(const MergeTree& t, const CurveTrace& trace, double param) {
    std::size_t k = segment_of(trace, param);
    const auto& a = trace.steps[k];
    if (a.param == param || k + 1 == trace.steps.size()) return a.point;
    const auto& b = trace.steps[k + 1];
    if (b.param == param) return b.point;
    const TreePoint& lower = a.point.height <= b.point.height ? a.point : b.point;
    double h = trace_height_at(trace, param);
    return t.ancestor_at(lower, std::max(h, lower.height));
}

CurveTrace refine(const MergeTree& t, const CurveTrace& trace, const std::vector<double>& heights) {
    std::vector<double> hs = heights;
    std::erase_if(hs, [](double h) { return !std::isfinite(h); });
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    double cap = trace_cap(trace);
    if (!hs.empty()) cap = std::max(cap, hs.back() + 1);

    CurveTrace out;
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        out.steps.push_back(trace.steps[k]);
        if (k + 1 == trace.steps.size()) break;
        const auto& a = trace.steps[k];
        const auto& b = trace.steps[k + 1];
        if (a.point == b.point) continue;
        double ha = a.point.height, hb = b.point.height;
        const TreePoint& lower = ha < hb ? a.point : b.point;
        double lo = std::min(ha, hb), hi = std::max(ha, hb);
        auto first = std::upper_bound(hs.begin(), hs.end(), lo);
        auto last = std::lower_bound(hs.begin(), hs.end(), hi);
        std::vector<double> between(first, last);
        if (ha > hb) std::reverse(between.begin(), between.end());
        double fa = finite_or(ha, cap), fb = finite_or(hb, cap);
        for (double y : between) {
            double param = a.param + (b.param - a.param) * (y - fa) / (fb - fa);
            param = std::clamp(param, a.param, b.param);
            if (!(param > out.steps.back().param) || !(param < b.param)) {
                // Parameters too close to split; fall back to an even spread.
                param = out.steps.back().param + (b.param - out.steps.back().param) / 2;
            }
            out.steps.push_back({param, t.ancestor_at(lower, y)});
        }
    }
    return out;
}

std::size_t degree(const MergeTree& t, const TreePoint& x) {
    if (x.height == t.height(x.vertex)) return x.vertex == t.root() ? 1 : t.children(x.vertex).size();
    return 1;
}

namespace {

bool strictly_between(const MergeTree& t, const TreePoint& a, const TreePoint& b, const TreePoint& x) {
    const TreePoint& lower = a.height < b.height ? a : b;
    double lo = std::min(a.height, b.height), hi = std::max(a.height, b.height);
    if (!(lo < x.height && x.height < hi)) return false;
    return t.ancestor_at(lower, x.height) == x;
}

// Lowest visited height in the branch of each vertex (its subtree plus the
// open edge up to its parent).
std::vector<double> lowest_visited(const MergeTree& t, const std::vector<TreePoint>& pts) {
    std::vector<double> low(t.size(), kInfinity);
    for (const auto& p : pts)
        if (p.vertex != t.root()) low[p.vertex] = std::min(low[p.vertex], p.height);
    auto pre = t.preorder();
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
        VertexId v = *it;
        if (v == t.root()) continue;
        VertexId p = t.parent(v);
        if (p != t.root()) low[p] = std::min(low[p], low[v]);
    }
    return low;
}

std::size_t kappa(const MergeTree& t, const std::vector<double>& low, const TreePoint& x) {
    if (x.height == t.height(x.vertex)) {
        std::size_t k = 0;
        for (VertexId c : t.children(x.vertex))
            if (low[c] == kInfinity) ++k;
        return k;
    }
    return low[x.vertex] >= x.height ? 1 : 0;
}

std::size_t visits(const MergeTree& t, const std::vector<TreePoint>& pts, const TreePoint& x) {
    // Intervals in doubled index space: step k -> 2k, segment interior -> 2k+1.
    std::vector<std::pair<std::size_t, std::size_t>> iv;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (pts[k] == x) iv.emplace_back(2 * k, 2 * k);
        if (k + 1 < pts.size()) {
            if (pts[k] == x && pts[k + 1] == x)
                iv.emplace_back(2 * k, 2 * k + 2);
            else if (pts[k] != pts[k + 1] && strictly_between(t, pts[k], pts[k + 1], x))
                iv.emplace_back(2 * k + 1, 2 * k + 1);
        }
    }
    std::sort(iv.begin(), iv.end());
    std::size_t count = 0;
    std::size_t end = 0;
    for (std::size_t i = 0; i < iv.size(); ++i) {
        if (i == 0 || iv[i].first > end) {
            ++count;
            end = iv[i].second;
        } else {
            end = std::max(end, iv[i].second);
        }
    }
    return count;
}

std::vector<TreePoint> witness_points(const MergeTree& t, const std::vector<TreePoint>& pts) {
    std::vector<std::vector<double>> on_edge(t.size());
    for (const auto& p : pts)
        if (p.vertex != t.root() && p.height > t.height(p.vertex)) on_edge[p.vertex].push_back(p.height);
    std::vector<TreePoint> out;
    for (VertexId v : t.preorder()) {
        if (v == t.root()) continue;
        out.push_back(t.point(v));
        auto& hs = on_edge[v];
        std::sort(hs.begin(), hs.end());
        hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
        std::vector<double> marks{t.height(v)};
        marks.insert(marks.end(), hs.begin(), hs.end());
        double top = t.height(t.parent(v));
        marks.push_back(std::isfinite(top) ? top : marks.back() + 2);
        for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
            double mid = marks[i] + (marks[i + 1] - marks[i]) / 2;
            if (mid > marks[i] && mid < marks[i + 1]) out.push_back({v, mid});
            if (i > 0) out.push_back({v, marks[i]});
        }
    }
    return out;
}

bool respects_order(const OrderedMergeTree& omt, const std::vector<TreePoint>& pts) {
    const MergeTree& t = omt.tree();
    std::vector<double> hs = t.vertex_heights();
    for (const auto& p : pts)
        if (std::isfinite(p.height)) hs.push_back(p.height);
    hs = with_midpoints(hs);
    for (double h : hs) {
        std::optional<TreePoint> last;
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            const auto& a = pts[k];
            const auto& b = pts[k + 1];
            std::optional<TreePoint> hit;
            if (a.height == h) hit = a;
            if (a != b && std::min(a.height, b.height) < h && h < std::max(a.height, b.height))
                hit = t.ancestor_at(a.height < b.height ? a : b, h);
            if (!hit) continue;
            if (last && omt.compare(*last, *hit) == std::strong_ordering::greater) return false;
            last = hit;
        }
    }
    return true;
}

}  // namespace

std::size_t visit_count(const MergeTree& t, const CurveTrace& trace, const TreePoint& x) {
    return visits(t, trace.points(), x);
}

std::size_t unvisited_degree(const MergeTree& t, const CurveTrace& trace, const TreePoint& x) {
    return kappa(t, lowest_visited(t, trace.points()), x);
}

const char* to_string(CurveClass c) {
    switch (c) {
        case CurveClass::none: return "none";
        case CurveClass::weak: return "weak";
        case CurveClass::partial: return "partial";
        case CurveClass::in_order: return "in_order";
    }
    return "unknown";
}

CurveClass classify_curve(const OrderedMergeTree& omt, const CurveTrace& trace) {
    const MergeTree& t = omt.tree();
    check_trace(t, trace);
    auto pts = trace.points();
    if (!respects_order(omt, pts)) return CurveClass::none;
    auto low = lowest_visited(t, pts);
    bool complete = true;
    for (const auto& x : witness_points(t, pts)) {
        std::size_t n = visits(t, pts, x);
        std::size_t d = degree(t, x);
        if (n == 0) {
            complete = false;
            continue;
        }
        if (n != d + 1 - kappa(t, low, x)) return CurveClass::weak;
        if (n != d + 1) complete = false;
    }
    return complete ? CurveClass::in_order : CurveClass::partial;
}

std::vector<double> refinement_heights(const MergeTree& t, const std::vector<TreePoint>& pts) {
    auto hs = t.vertex_heights();
    for (const auto& p : pts)
        if (std::isfinite(p.height)) hs.push_back(p.height);
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    return hs;
}

std::vector<std::pair<std::size_t, std::size_t>> violating_index_intervals(const std::vector<TreePoint>& pts) {
    std::vector<std::pair<std::size_t, std::size_t>> cand;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double h = pts[i].height;
        if (!(pts[i + 1].height > h)) continue;
        std::size_t j = i + 1;
        while (j < n && pts[j].height > h) ++j;
        if (j < n && pts[j] == pts[i]) cand.emplace_back(i, j);
    }
    std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second > b.second;
    });
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t reach = 0;
    for (const auto& c : cand) {
        if (!out.empty() && c.first < reach) continue;
        out.push_back(c);
        reach = c.second;
    }
    return out;
}

std::vector<ParamInterval> find_violating_subcurves(const MergeTree& t, const CurveTrace& trace) {
    auto fine = refine(t, trace, refinement_heights(t, trace.points()));
    std::vector<ParamInterval> out;
    for (auto [l, r] : violating_index_intervals(fine.points()))
        out.push_back({fine.steps[l].param, fine.steps[r].param});
    return out;
}

ContractedTrace contract_violating(const MergeTree& t, const CurveTrace& trace) {
    auto fine = refine(t, trace, refinement_heights(t, trace.points()));
    auto iv = violating_index_intervals(fine.points());
    ContractedTrace out;
    if (iv.empty()) {
        out.trace = trace;
        return out;
    }
    for (auto [l, r] : iv) {
        for (std::size_t k = l + 1; k <= r; ++k) fine.steps[k].point = fine.steps[l].point;
        out.paused.push_back({fine.steps[l].param, fine.steps[r].param});
    }
    out.trace = std::move(fine);
    return out;
}

}  // namespace omt
