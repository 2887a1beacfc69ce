#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omt/curves.hpp"
#include "omt/frechet.hpp"
#include "omt/ordering.hpp"

namespace omt {

TreeRef share(OrderedMergeTree t);

// Continuous map sending every point of `source` exactly delta higher into
// `target`, stored as the images of the source leaves.
struct ShiftMap {
    TreeRef source, target;
    double delta = 0;
    std::vector<TreePoint> leaf_images;  // indexed by source vertex id; only leaves are used

    TreePoint operator()(const TreePoint& x) const;
    const TreePoint& image_of_leaf(VertexId u) const;
};

ShiftMap make_shift_map(TreeRef source, TreeRef target, double delta,
                        const std::map<VertexId, TreePoint>& leaf_images);
ShiftMap identity_map(TreeRef t);

struct Violation {
    std::string condition;
    std::string detail;
};

// Leaf image heights and agreement of all leaves at every merge vertex.
std::optional<Violation> check_determination(const ShiftMap& a);

// Throws std::invalid_argument on mismatched trees or delta.
std::optional<Violation> check_interleaving(const ShiftMap& a, const ShiftMap& b);

struct OrderWitness {
    TreePoint x1, x2;
};
std::optional<OrderWitness> check_monotone(const ShiftMap& a);

std::pair<ShiftMap, ShiftMap> matching_to_interleaving(TreeRef t, TreeRef t_prime, const CurveTrace& trace,
                                                       const CurveTrace& trace_prime, double delta);

// Images an{trace'(s)}{f(x)+delta} over every visit s of x; all equal when
// the traces are delta-matched in-order curves.
std::vector<TreePoint> images_at_visits(const MergeTree& t, const MergeTree& t_prime, const CurveTrace& trace,
                                        const CurveTrace& trace_prime, const TreePoint& x, double delta);

std::pair<CurveTrace, CurveTrace> interleaving_to_matching(const ShiftMap& a, const ShiftMap& b);

// Largest |f(trace(s)) - f'(trace'(s))| over the union of breakpoints.
double matched_cost(const MergeTree& t, const MergeTree& t_prime, const CurveTrace& trace,
                    const CurveTrace& trace_prime);

// Tree traces realising a Fréchet matching of two induced curves.
std::pair<CurveTrace, CurveTrace> traces_from_matching(const MergeTree& t, const MergeTree& t_prime,
                                                       const InducedCurve& c, const InducedCurve& c_prime,
                                                       const Matching& m);

struct DistanceCertificate {
    double delta = 0;
    ShiftMap alpha, beta;
    Matching matching;
    CurveTrace trace, trace_prime;
};

DistanceCertificate monotone_interleaving_distance(TreeRef t, TreeRef t_prime);
double monotone_distance(const OrderedMergeTree& t, const OrderedMergeTree& t_prime);

// Good maps: TW checks the pairwise ancestry form, G the preimage-lca and
// depth form.
enum class GoodMapVariant { tw, g };
std::optional<Violation> check_good_map(const ShiftMap& a, GoodMapVariant variant);

// Lowest ancestor of y in the image of a (y itself when it is in the image).
TreePoint lowest_image_ancestor(const ShiftMap& a, const TreePoint& y);
bool in_image(const ShiftMap& a, const TreePoint& y);

class Matrix {
public:
    explicit Matrix(std::size_t n = 0) : n_(n), data_(n * n, 0.0) {}
    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t n_;
    std::vector<double> data_;
};

Matrix induced_matrix(const MergeTree& t, const std::vector<TreePoint>& pi);
double label_distance(const Matrix& m, const Matrix& m_prime);

struct Labelling {
    TreeRef tree, tree_prime;
    std::vector<TreePoint> pi, pi_prime;

    std::size_t size() const noexcept { return pi.size(); }
};

// Sizes agree and every leaf on each side carries a label.
void check_labelling(const Labelling& lab);
double label_distance(const Labelling& lab);

std::optional<std::pair<std::size_t, std::size_t>> check_monotone_labelling(const Labelling& lab);

struct LabellingConstructionState {
    VertexId w = kNoVertex;
    TreePoint w_f;
    std::vector<VertexId> leaves;  // W, in leaf order
    std::size_t index = 0;         // position of w in W
    std::vector<std::size_t> s, s_i;
    double h1 = -kInfinity, h2 = -kInfinity, h = -kInfinity;
    std::vector<TreePoint> lifted;               // ŵ_k for k in S
    std::vector<std::vector<TreePoint>> x_sets;  // X_k for k in S
    TreePoint chosen;
};

Labelling good_to_labelling(const ShiftMap& a, std::vector<LabellingConstructionState>* states = nullptr);

std::pair<ShiftMap, ShiftMap> labelling_to_interleaving(const Labelling& lab, double delta);

}  // namespace omt
