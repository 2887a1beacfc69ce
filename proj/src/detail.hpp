#pragma once

#include <vector>

#include "omt/tree.hpp"

namespace omt::detail {

// Heights where the level sets of `s` can change under delta-shift maps to
// and from `t`, with midpoints.
std::vector<double> witness_heights(const MergeTree& s, const MergeTree& t, double delta);
std::vector<TreePoint> witness_points(const MergeTree& s, const MergeTree& t, double delta);

// Rounding allowance for heights of the form h + delta.
double slack(const MergeTree& s, const MergeTree& t, double delta);

// x lifted to height h, or x itself when it already sits above h.
TreePoint lift(const MergeTree& t, const TreePoint& x, double h);

// Both points lie within eps below their lowest common ancestor.
bool near(const MergeTree& t, const TreePoint& x, const TreePoint& y, double eps);

}  // namespace omt::detail
