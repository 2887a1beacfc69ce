#include "omt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "omt/interleaving.hpp"

namespace omt::oracle {

namespace {

std::vector<double> resample(const Curve1D& c, double top, double r) {
    std::vector<double> v;
    for (std::size_t i = 0; i < c.size(); ++i) v.push_back(std::isfinite(c[i]) ? c[i] : top);
    std::vector<double> out{v.front()};
    for (std::size_t i = 1; i < v.size(); ++i) {
        double a = v[i - 1], b = v[i];
        auto steps = static_cast<long>(std::ceil(std::abs(b - a) / r));
        for (long k = 1; k < steps; ++k) out.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(steps));
        out.push_back(b);
    }
    return out;
}

}  // namespace

double discrete_frechet_refined(const Curve1D& p, const Curve1D& q, double resolution) {
    if (!(resolution > 0)) throw std::invalid_argument("resolution must be positive");
    double top = std::max(p.max_finite_height(), q.max_finite_height()) + 1;
    auto a = resample(p, top, resolution);
    auto b = resample(q, top, resolution);
    std::vector<double> row(b.size()), next(b.size());
    row[0] = std::abs(a[0] - b[0]);
    for (std::size_t j = 1; j < b.size(); ++j) row[j] = std::max(row[j - 1], std::abs(a[0] - b[j]));
    for (std::size_t i = 1; i < a.size(); ++i) {
        next[0] = std::max(row[0], std::abs(a[i] - b[0]));
        for (std::size_t j = 1; j < b.size(); ++j)
            next[j] = std::max(std::min({row[j], row[j - 1], next[j - 1]}), std::abs(a[i] - b[j]));
        std::swap(row, next);
    }
    return row.back();
}

std::vector<MergeTree> all_orders(const MergeTree& t) {
    std::vector<std::vector<VertexId>> kids(t.size());
    std::vector<VertexId> internal;
    for (VertexId v = 0; v < static_cast<VertexId>(t.size()); ++v) {
        auto c = t.children(v);
        kids[v].assign(c.begin(), c.end());
        std::sort(kids[v].begin(), kids[v].end());
        if (kids[v].size() > 1) internal.push_back(v);
    }
    std::vector<MergeTree> out;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == internal.size()) {
            out.push_back(t.with_children_order(kids));
            return;
        }
        auto& c = kids[internal[k]];
        std::sort(c.begin(), c.end());
        do rec(k + 1);
        while (std::next_permutation(c.begin(), c.end()));
    };
    rec(0);
    return out;
}

OrderSearch brute_force_min_over_orders(const MergeTree& t, const MergeTree& t_prime, std::size_t max_leaves) {
    if (t.leaves().size() > max_leaves || t_prime.leaves().size() > max_leaves)
        throw std::invalid_argument("brute_force_min_over_orders: more than " + std::to_string(max_leaves) +
                                    " leaves");
    auto as = all_orders(t);
    auto bs = all_orders(t_prime);
    std::vector<OrderedMergeTree> oa(as.begin(), as.end()), ob(bs.begin(), bs.end());
    OrderSearch best{std::numeric_limits<double>::infinity(), oa.front(), ob.front(), 0};
    for (const auto& x : oa)
        for (const auto& y : ob) {
            ++best.pairs;
            double d = monotone_distance(x, y);
            if (d < best.value) {
                best.value = d;
                best.best = x;
                best.best_prime = y;
            }
        }
    return best;
}

long long PartitionInstance::sum() const { return std::accumulate(x.begin(), x.end(), 0LL); }

bool PartitionInstance::has_balanced_partition() const {
    if (!mu_integral()) return false;
    const long long target = mu();
    std::vector<int> items(x.begin(), x.end());
    std::sort(items.rbegin(), items.rend());
    std::vector<long long> bins(static_cast<std::size_t>(m), 0);
    std::function<bool(std::size_t)> rec = [&](std::size_t k) {
        if (k == items.size()) return true;
        for (std::size_t b = 0; b < bins.size(); ++b) {
            if (bins[b] + items[k] > target) continue;
            bins[b] += items[k];
            if (rec(k + 1)) return true;
            bins[b] -= items[k];
            if (bins[b] == 0) break;
        }
        return false;
    };
    return rec(0);
}

void validate(const PartitionInstance& inst) {
    if (inst.x.empty()) throw std::invalid_argument("partition instance: empty multiset");
    for (int a : inst.x)
        if (a <= 0) throw std::invalid_argument("partition instance: values must be positive");
    if (inst.m < 2) throw std::invalid_argument("partition instance: m must be at least 2");
    if (!(inst.lambda > 8) || !std::isfinite(inst.lambda))
        throw std::invalid_argument("partition instance: lambda must exceed 8");
    if (!inst.mu_integral()) throw std::invalid_argument("partition instance: sum is not divisible by m");
}

ReductionTrees build_partition_reduction(const PartitionInstance& inst) {
    validate(inst);
    const double l = inst.lambda;
    TreeSpec a{{"root", kNoVertex, kInfinity}, {"r", 0, l + 2}};
    for (std::size_t i = 0; i < inst.x.size(); ++i) {
        auto id = std::to_string(i + 1);
        auto p = static_cast<VertexId>(a.size());
        a.push_back({"p" + id, 1, l + 1});
        auto ph = static_cast<VertexId>(a.size());
        a.push_back({"ph" + id, p, l});
        for (int k = 1; k <= inst.x[i]; ++k) a.push_back({"u" + id + "_" + std::to_string(k), ph, 0});
    }
    TreeSpec b{{"root", kNoVertex, kInfinity}, {"r'", 0, l + 3}};
    for (int j = 1; j <= inst.m; ++j) {
        auto q = static_cast<VertexId>(b.size());
        b.push_back({"q" + std::to_string(j), 1, l + 1});
        for (long long k = 1; k <= inst.mu(); ++k)
            b.push_back({"w" + std::to_string(j) + "_" + std::to_string(k), q, 1});
    }
    return {MergeTree(normalise(a)), MergeTree(normalise(b))};
}

}  // namespace omt::oracle
