#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "detail.hpp"
#include "omt/interleaving.hpp"

namespace omt {

Matrix induced_matrix(const MergeTree& t, const std::vector<TreePoint>& pi) {
    Matrix m(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i)
        for (std::size_t j = i; j < pi.size(); ++j) m(i, j) = m(j, i) = t.lca(pi[i], pi[j]).height;
    return m;
}

double label_distance(const Matrix& m, const Matrix& m_prime) {
    if (m.size() != m_prime.size()) throw std::invalid_argument("label_distance: matrices differ in size");
    double worst = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) worst = std::max(worst, std::abs(m(i, j) - m_prime(i, j)));
    return worst;
}

void check_labelling(const Labelling& lab) {
    if (!lab.tree || !lab.tree_prime) throw std::invalid_argument("labelling needs both trees");
    if (lab.pi.size() != lab.pi_prime.size()) throw std::invalid_argument("labelling sides differ in size");
    auto covers = [](const MergeTree& t, const std::vector<TreePoint>& pi, const char* side) {
        for (const auto& x : pi)
            if (!t.is_canonical(x) || x.vertex == t.root())
                throw std::invalid_argument(std::string("labelling: bad point on the ") + side + " side");
        for (VertexId u : t.leaves())
            if (std::find(pi.begin(), pi.end(), t.point(u)) == pi.end())
                throw std::invalid_argument(std::string("labelling: leaf ") + t.name(u) + " on the " + side +
                                            " side has no label");
    };
    covers(lab.tree->tree(), lab.pi, "first");
    covers(lab.tree_prime->tree(), lab.pi_prime, "second");
}

double label_distance(const Labelling& lab) {
    check_labelling(lab);
    return label_distance(induced_matrix(lab.tree->tree(), lab.pi), induced_matrix(lab.tree_prime->tree(), lab.pi_prime));
}

std::optional<std::pair<std::size_t, std::size_t>> check_monotone_labelling(const Labelling& lab) {
    for (std::size_t i = 0; i < lab.size(); ++i)
        for (std::size_t j = 0; j < lab.size(); ++j) {
            if (i == j) continue;
            if (lab.tree->compare_points(lab.pi[i], lab.pi[j]) == std::strong_ordering::less &&
                lab.tree_prime->compare_points(lab.pi_prime[i], lab.pi_prime[j]) == std::strong_ordering::greater)
                return std::make_pair(i, j);
        }
    return std::nullopt;
}

std::pair<ShiftMap, ShiftMap> labelling_to_interleaving(const Labelling& lab, double delta) {
    if (std::isnan(delta) || delta < 0) throw std::invalid_argument("delta must be non-negative");
    double ld = label_distance(lab);
    const MergeTree& s0 = lab.tree->tree();
    const MergeTree& t0 = lab.tree_prime->tree();
    if (ld > delta + detail::slack(s0, t0, delta)) throw std::invalid_argument("labelling distance exceeds delta");
    auto table = [delta](const MergeTree& s, const MergeTree& t, const std::vector<TreePoint>& from,
                         const std::vector<TreePoint>& to) {
        std::vector<TreePoint> img(s.size());
        for (VertexId u : s.leaves()) {
            auto k = static_cast<std::size_t>(std::find(from.begin(), from.end(), s.point(u)) - from.begin());
            img[u] = detail::lift(t, to[k], s.height(u) + delta);
        }
        return img;
    };
    const MergeTree& s = lab.tree->tree();
    const MergeTree& t = lab.tree_prime->tree();
    ShiftMap a{lab.tree, lab.tree_prime, delta, table(s, t, lab.pi, lab.pi_prime)};
    ShiftMap b{lab.tree_prime, lab.tree, delta, table(t, s, lab.pi_prime, lab.pi)};
    return {std::move(a), std::move(b)};
}

}  // namespace omt
