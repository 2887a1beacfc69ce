#pragma once

#include <cstddef>
#include <vector>

#include "omt/curves.hpp"
#include "omt/ordering.hpp"

namespace omt::oracle {

// Discrete Fréchet distance after resampling both curves so consecutive
// samples differ by at most `resolution`. Root sentinels become max + 1.
double discrete_frechet_refined(const Curve1D& p, const Curve1D& q, double resolution);

struct OrderSearch {
    double value = 0;
    OrderedMergeTree best, best_prime;
    std::size_t pairs = 0;
};

// Exhausts children permutations of both trees. Throws std::invalid_argument
// when either tree has more than max_leaves leaves.
OrderSearch brute_force_min_over_orders(const MergeTree& t, const MergeTree& t_prime, std::size_t max_leaves = 8);
// Every ordered version of t (children permuted at every vertex).
std::vector<MergeTree> all_orders(const MergeTree& t);

struct PartitionInstance {
    std::vector<int> x;
    int m = 2;
    double lambda = 9;

    long long sum() const;
    bool mu_integral() const { return sum() % m == 0; }
    long long mu() const { return sum() / m; }
    bool has_balanced_partition() const;
};

void validate(const PartitionInstance& inst);

struct ReductionTrees {
    MergeTree t, t_prime;
};
// Unary vertices of the construction (single-leaf groups) are contracted.
ReductionTrees build_partition_reduction(const PartitionInstance& inst);

}  // namespace omt::oracle
