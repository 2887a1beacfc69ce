#include "omt/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace omt {

namespace {

// The value base + k * delta, compared without ever forming the sum.
struct Sym {
    double base = 0;
    int k = 0;
};

struct Interval {
    bool empty = true;
    Sym s, e;  // first and last reachable position, in travel direction
};

std::vector<double> capped(const Curve1D& c, double cap) {
    std::vector<double> v = c.heights();
    v.front() = cap;
    v.back() = cap;
    return v;
}

class FreeSpace {
public:
    FreeSpace(std::vector<double> p, std::vector<double> q, double delta)
        : p_(std::move(p)), q_(std::move(q)), d_(delta), n_(p_.size() - 1), m_(q_.size() - 1) {}

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    double delta() const { return d_; }
    const std::vector<double>& p() const { return p_; }
    const std::vector<double>& q() const { return q_; }

    bool le(const Sym& x, const Sym& y) const {
        int diff = y.k - x.k;
        if (diff == 0) return x.base <= y.base;
        return x.base - y.base <= diff * d_;
    }
    bool eq(const Sym& x, const Sym& y) const { return le(x, y) && le(y, x); }

    // Travel order along segment i of curve c.
    bool ple(const std::vector<double>& c, std::size_t i, const Sym& x, const Sym& y) const {
        return c[i] < c[i + 1] ? le(x, y) : le(y, x);
    }
    Sym pmax(const std::vector<double>& c, std::size_t i, const Sym& x, const Sym& y) const {
        return ple(c, i, x, y) ? y : x;
    }

    // Points of segment i of c within delta of value v.
    Interval free_on(const std::vector<double>& c, std::size_t i, double v) const {
        double a = c[i], b = c[i + 1];
        Sym lo{std::min(a, b), 0}, hi{std::max(a, b), 0};
        Sym vl{v, -1}, vh{v, 1};
        Sym lower = le(lo, vl) ? vl : lo;
        Sym upper = le(vh, hi) ? vh : hi;
        if (!le(lower, upper)) return {};
        if (a < b) return {false, lower, upper};
        return {false, upper, lower};
    }

    Interval left_free(std::size_t i, std::size_t j) const { return free_on(q_, j, p_[i]); }
    Interval bottom_free(std::size_t i, std::size_t j) const { return free_on(p_, i, q_[j]); }

    Interval right_of(std::size_t i, std::size_t j, const Interval& l, const Interval& b) const {
        Interval f = left_free(i + 1, j);
        if (f.empty) return f;
        if (!b.empty) return f;
        if (l.empty) return {};
        Sym s = pmax(q_, j, f.s, l.s);
        if (!ple(q_, j, s, f.e)) return {};
        return {false, s, f.e};
    }

    Interval top_of(std::size_t i, std::size_t j, const Interval& l, const Interval& b) const {
        Interval f = bottom_free(i, j + 1);
        if (f.empty) return f;
        if (!l.empty) return f;
        if (b.empty) return {};
        Sym s = pmax(p_, i, f.s, b.s);
        if (!ple(p_, i, s, f.e)) return {};
        return {false, s, f.e};
    }

    // Reachable part of the left edge of the diagram, segment j, given the
    // reachable part of segment j-1 (moving along it from the start corner).
    Interval left_edge(std::size_t j, const Interval& prev) const {
        Interval f = left_free(0, j);
        if (f.empty) return f;
        if (j > 0 && (prev.empty || !eq(prev.e, Sym{q_[j], 0}))) return {};
        if (!eq(f.s, Sym{q_[j], 0})) return {};
        return f;
    }
    Interval bottom_edge(std::size_t i, const Interval& prev) const {
        Interval f = bottom_free(i, 0);
        if (f.empty) return f;
        if (i > 0 && (prev.empty || !eq(prev.e, Sym{p_[i], 0}))) return {};
        if (!eq(f.s, Sym{p_[i], 0})) return {};
        return f;
    }

private:
    std::vector<double> p_, q_;
    double d_;
    std::size_t n_, m_;
};

void check_delta(double delta) {
    if (std::isnan(delta) || delta < 0) throw std::invalid_argument("delta must be non-negative");
}

bool decide(const FreeSpace& fs) {
    const std::size_t n = fs.n(), m = fs.m();
    std::vector<Interval> col(m), next(m);
    Interval prev;
    for (std::size_t j = 0; j < m; ++j) prev = col[j] = fs.left_edge(j, prev);
    Interval bottom_prev;
    for (std::size_t i = 0; i < n; ++i) {
        Interval b = fs.bottom_edge(i, bottom_prev);
        bottom_prev = b;
        for (std::size_t j = 0; j < m; ++j) {
            const Interval& l = col[j];
            if (i + 1 == n && j + 1 == m) return !l.empty || !b.empty;
            next[j] = fs.right_of(i, j, l, b);
            b = fs.top_of(i, j, l, b);
        }
        std::swap(col, next);
    }
    return false;
}

}  // namespace

double frechet_cap(const Curve1D& p, const Curve1D& q) {
    double hi = std::max(p.max_finite_height(), q.max_finite_height());
    double lo = std::min(p.min_height(), q.min_height());
    return hi + (hi - lo) + 1;
}

bool decide_frechet(const Curve1D& p, const Curve1D& q, double delta, double cap) {
    check_delta(delta);
    return decide(FreeSpace(capped(p, cap), capped(q, cap), delta));
}

bool decide_frechet(const Curve1D& p, const Curve1D& q, double delta) {
    return decide_frechet(p, q, delta, frechet_cap(p, q));
}

std::vector<double> frechet_candidates(const Curve1D& p, const Curve1D& q, double cap) {
    auto a = capped(p, cap), b = capped(q, cap);
    std::vector<double> c;
    c.reserve(a.size() * b.size() + (a.size() * a.size() + b.size() * b.size()) / 2 + 1);
    c.push_back(0);
    for (double x : a)
        for (double y : b) c.push_back(std::abs(x - y));
    for (const auto* v : {&a, &b})
        for (std::size_t i = 0; i < v->size(); ++i)
            for (std::size_t k = i + 1; k < v->size(); ++k) c.push_back(std::abs((*v)[i] - (*v)[k]) / 2);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

double frechet_distance(const Curve1D& p, const Curve1D& q, double cap) {
    auto c = frechet_candidates(p, q, cap);
    auto a = capped(p, cap), b = capped(q, cap);
    std::size_t lo = 0, hi = c.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (decide(FreeSpace(a, b, c[mid])))
            hi = mid;
        else
            lo = mid + 1;
    }
    return c[lo];
}

FrechetResult compute_frechet(const Curve1D& p, const Curve1D& q) {
    FrechetResult r;
    r.delta = frechet_distance(p, q, frechet_cap(p, q));
    r.matching = extract_matching(p, q, r.delta);
    return r;
}

double curve_param(const Curve1D& c, const CurvePos& pos, double cap) {
    const std::size_t n = c.size() - 1;
    if (pos.segment >= n) throw std::out_of_range("curve position segment out of range");
    auto v = [&](std::size_t i) { return std::isfinite(c[i]) ? c[i] : cap; };
    double a = v(pos.segment), b = v(pos.segment + 1);
    double frac = (pos.height - a) / (b - a);
    frac = std::clamp(frac, 0.0, 1.0);
    return (static_cast<double>(pos.segment) + frac) / static_cast<double>(n);
}

Matching extract_matching(const Curve1D& p, const Curve1D& q, double delta) {
    check_delta(delta);
    const double cap = frechet_cap(p, q);
    FreeSpace fs(capped(p, cap), capped(q, cap), delta);
    const std::size_t n = fs.n(), m = fs.m();

    std::vector<Interval> left(n * m), bottom(n * m);
    auto at = [m](std::size_t i, std::size_t j) { return i * m + j; };
    {
        Interval prev;
        for (std::size_t j = 0; j < m; ++j) prev = left[at(0, j)] = fs.left_edge(j, prev);
        Interval bottom_prev;
        for (std::size_t i = 0; i < n; ++i) {
            Interval b = fs.bottom_edge(i, bottom_prev);
            bottom_prev = b;
            for (std::size_t j = 0; j < m; ++j) {
                bottom[at(i, j)] = b;
                const Interval& l = left[at(i, j)];
                Interval r = fs.right_of(i, j, l, b);
                if (i + 1 < n) left[at(i + 1, j)] = r;
                b = fs.top_of(i, j, l, b);
            }
        }
    }
    if (left[at(n - 1, m - 1)].empty && bottom[at(n - 1, m - 1)].empty)
        throw std::invalid_argument("extract_matching: delta is infeasible");

    // Symbolic breakpoint: a vertex index or a (segment, symbolic height) on each curve.
    struct SPos {
        std::size_t seg;
        Sym h;
    };
    struct SPoint {
        SPos p, q;
    };
    const auto& pv = fs.p();
    const auto& qv = fs.q();
    auto pvert = [&](std::size_t i) { return SPos{std::min(i, n - 1), Sym{pv[i], 0}}; };
    auto qvert = [&](std::size_t j) { return SPos{std::min(j, m - 1), Sym{qv[j], 0}}; };

    std::vector<SPoint> path{{pvert(n), qvert(m)}};
    enum class Exit { corner, right, top };
    Exit exit = Exit::corner;
    Sym exit_at;
    std::size_t i = n - 1, j = m - 1;
    while (true) {
        const Interval& l = left[at(i, j)];
        const Interval& b = bottom[at(i, j)];
        bool use_left = !l.empty && (exit != Exit::right || fs.ple(qv, j, l.s, exit_at));
        if (!use_left && (b.empty || (exit == Exit::top && !fs.ple(pv, i, b.s, exit_at))))
            throw std::logic_error("extract_matching: broken reachability");
        if (use_left) {
            path.push_back({pvert(i), SPos{j, l.s}});
            if (i == 0) {
                for (std::size_t k = j + 1; k-- > 0;) path.push_back({pvert(0), qvert(k)});
                break;
            }
            --i;
            exit = Exit::right;
            exit_at = l.s;
        } else {
            path.push_back({SPos{i, b.s}, qvert(j)});
            if (j == 0) {
                for (std::size_t k = i + 1; k-- > 0;) path.push_back({pvert(k), qvert(0)});
                break;
            }
            --j;
            exit = Exit::top;
            exit_at = b.s;
        }
    }
    std::reverse(path.begin(), path.end());

    auto eval = [&](const std::vector<double>& c, const SPos& pos, const SPos& other) {
        double h = pos.h.base + pos.h.k * delta;
        double lo = std::min(c[pos.seg], c[pos.seg + 1]), hi = std::max(c[pos.seg], c[pos.seg + 1]);
        if (pos.h.k != 0 && other.h.k == 0) {
            lo = std::max(lo, other.h.base - delta);
            hi = std::min(hi, other.h.base + delta);
        }
        return CurvePos{pos.seg, std::clamp(h, lo, hi)};
    };

    Matching out;
    out.delta = delta;
    out.cap = cap;
    double last_p = -1, last_q = -1;
    for (const auto& sp : path) {
        MatchPoint mp{eval(pv, sp.p, sp.q), eval(qv, sp.q, sp.p)};
        double tp = curve_param(p, mp.p, cap), tq = curve_param(q, mp.q, cap);
        if (tp == last_p && tq == last_q) continue;
        mp.p_paused = tp == last_p;
        mp.q_paused = tq == last_q;
        out.points.push_back(mp);
        last_p = tp;
        last_q = tq;
    }
    return out;
}

double matching_cost(const Curve1D& p, const Curve1D& q, const Matching& m) {
    (void)p;
    (void)q;
    double worst = 0;
    for (const auto& mp : m.points) worst = std::max(worst, std::abs(mp.p.height - mp.q.height));
    return worst;
}

bool is_monotone_matching(const Curve1D& p, const Curve1D& q, const Matching& m) {
    if (m.points.empty()) return false;
    double lp = -1, lq = -1;
    for (const auto& mp : m.points) {
        double tp = curve_param(p, mp.p, m.cap), tq = curve_param(q, mp.q, m.cap);
        if (tp < lp || tq < lq || (tp == lp && tq == lq)) return false;
        lp = tp;
        lq = tq;
    }
    auto first = m.points.front(), last = m.points.back();
    return curve_param(p, first.p, m.cap) == 0 && curve_param(q, first.q, m.cap) == 0 &&
           curve_param(p, last.p, m.cap) == 1 && curve_param(q, last.q, m.cap) == 1;
}

}  // namespace omt
