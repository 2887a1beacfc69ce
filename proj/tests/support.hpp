#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "omt/interleaving.hpp"

namespace omt::testing {

// (name, parent name or "" for the root, height); children in listed order.
using Row = std::tuple<std::string, std::string, double>;
OrderedMergeTree make_tree(const std::vector<Row>& rows);

// Leaves u1 (0) and u2 (1) merging at v (3), order u1, u2.
OrderedMergeTree tree_a();
// Mirror: leaves w1 (1) and w2 (0) merging at 3, order w1, w2.
OrderedMergeTree tree_b();
// Leaves a, b under v1 (2), c joining at v2 (4).
OrderedMergeTree caterpillar3();
OrderedMergeTree single_leaf(double h);
// n leaves hanging off a spine; leaf and spine heights vary with the index.
OrderedMergeTree caterpillar(std::size_t n, std::uint64_t seed);

// Random ordered tree with 1..max_leaves leaves. Heights lie on a 1/64 grid
// so all height arithmetic in the tests is exact.
OrderedMergeTree random_tree(std::mt19937_64& rng, std::size_t max_leaves, std::size_t min_leaves = 1);

constexpr double kGrid = 1.0 / 64;

}  // namespace omt::testing
