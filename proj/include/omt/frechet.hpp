#pragma once

#include <cstddef>
#include <vector>

#include "omt/curves.hpp"

namespace omt {

// A location on a curve: segment index (segment i joins extrema i and i+1)
// and the height reached on it. Heights use the finite cap in place of +inf.
struct CurvePos {
    std::size_t segment = 0;
    double height = 0;
    friend bool operator==(const CurvePos&, const CurvePos&) = default;
};

struct MatchPoint {
    CurvePos p, q;
    // The curve does not move between the previous breakpoint and this one.
    bool p_paused = false, q_paused = false;
};

struct Matching {
    double delta = 0;
    double cap = 0;  // finite height standing in for +inf on both curves
    std::vector<MatchPoint> points;
};

// Cap shared by both curves: max finite height + finite height range + 1.
double frechet_cap(const Curve1D& p, const Curve1D& q);

bool decide_frechet(const Curve1D& p, const Curve1D& q, double delta);
// Same decision with an explicit cap.
bool decide_frechet(const Curve1D& p, const Curve1D& q, double delta, double cap);

// Sorted distinct critical values: |p_i - q_j|, |p_i - p_k| / 2 and |q_j - q_l| / 2.
std::vector<double> frechet_candidates(const Curve1D& p, const Curve1D& q, double cap);

struct FrechetResult {
    double delta = 0;
    Matching matching;
};

FrechetResult compute_frechet(const Curve1D& p, const Curve1D& q);
// Distance only, with an explicit cap.
double frechet_distance(const Curve1D& p, const Curve1D& q, double cap);

// Throws std::invalid_argument when delta is infeasible.
Matching extract_matching(const Curve1D& p, const Curve1D& q, double delta);

double curve_param(const Curve1D& c, const CurvePos& pos, double cap);
double matching_cost(const Curve1D& p, const Curve1D& q, const Matching& m);
// Breakpoint params strictly increase on both curves once pauses are spread
// over an infinitesimal slope; checks the weak form (non-decreasing, and
// never both paused).
bool is_monotone_matching(const Curve1D& p, const Curve1D& q, const Matching& m);

}  // namespace omt
