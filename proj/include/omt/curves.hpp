#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "omt/ordering.hpp"
#include "omt/tree.hpp"

namespace omt {

// Extrema sequence of a 1D curve; first and last entries are +inf, interior
// entries finite and strictly alternating. Parameters are implicit and uniform.
class Curve1D {
public:
    Curve1D() = default;
    // Canonicalises: drops repeated values and samples that are not strict
    // local extrema.
    explicit Curve1D(const std::vector<double>& samples);

    const std::vector<double>& heights() const noexcept { return heights_; }
    std::size_t size() const noexcept { return heights_.size(); }
    double operator[](std::size_t i) const { return heights_[i]; }
    double param(std::size_t i) const;
    Curve1D reversed() const;
    Curve1D shifted(double c) const;
    double min_height() const;
    double max_finite_height() const;
    friend bool operator==(const Curve1D&, const Curve1D&) = default;

private:
    std::vector<double> heights_;
};

struct TraceStep {
    double param = 0;
    TreePoint point;
    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

// Piecewise curve in a tree: between consecutive steps the curve moves
// monotonically (and linearly in height) along the tree path joining them.
struct CurveTrace {
    std::vector<TraceStep> steps;

    std::size_t size() const noexcept { return steps.size(); }
    std::vector<TreePoint> points() const;
    static CurveTrace uniform(const std::vector<TreePoint>& points);
};

struct InducedCurve {
    CurveTrace trace;
    Curve1D curve;
    // Tree point realising each entry of curve; the first and last are the root.
    std::vector<TreePoint> extrema;
};

InducedCurve in_order_walk(const OrderedMergeTree& omt);

// Throws std::invalid_argument if steps are not comparable, params do not
// increase or the trace does not start and end at the root.
void check_trace(const MergeTree& t, const CurveTrace& trace);

Curve1D curve_of(const CurveTrace& trace);
TreePoint point_at(const MergeTree& t, const CurveTrace& trace, double param);
double trace_height_at(const CurveTrace& trace, double param);

// Inserts a step wherever a segment crosses one of `heights` strictly inside.
CurveTrace refine(const MergeTree& t, const CurveTrace& trace, const std::vector<double>& heights);

// Number of connected components of trace^{-1}(x).
std::size_t visit_count(const MergeTree& t, const CurveTrace& trace, const TreePoint& x);
// Number of planted subtrees rooted at x none of whose points other than x are visited.
std::size_t unvisited_degree(const MergeTree& t, const CurveTrace& trace, const TreePoint& x);
std::size_t degree(const MergeTree& t, const TreePoint& x);

enum class CurveClass { none, weak, partial, in_order };
const char* to_string(CurveClass c);

CurveClass classify_curve(const OrderedMergeTree& omt, const CurveTrace& trace);

struct ParamInterval {
    double left = 0, right = 0;
    friend bool operator==(const ParamInterval&, const ParamInterval&) = default;
};

std::vector<ParamInterval> find_violating_subcurves(const MergeTree& t, const CurveTrace& trace);

struct ContractedTrace {
    CurveTrace trace;
    std::vector<ParamInterval> paused;
};

ContractedTrace contract_violating(const MergeTree& t, const CurveTrace& trace);

// Index form used on point sequences already refined at every vertex height
// and every step height: maximal [l, r] with pts[l] == pts[r] and all points
// strictly between higher than pts[l].
std::vector<std::pair<std::size_t, std::size_t>> violating_index_intervals(const std::vector<TreePoint>& pts);

// Heights at which a point sequence must be refined before
// violating_index_intervals is exact.
std::vector<double> refinement_heights(const MergeTree& t, const std::vector<TreePoint>& pts);

}  // namespace omt
