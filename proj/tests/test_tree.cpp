#include <algorithm>
#include <set>

#include "doctest.h"
#include "support.hpp"

using namespace omt;
using omt::testing::tree_a;

namespace {

VertexId id(const MergeTree& t, const char* name) { return *t.find(name); }

// Reference lca: walk parent chains by hand.
TreePoint naive_lca(const MergeTree& t, const TreePoint& x, const TreePoint& y) {
    const double h = std::max(x.height, y.height);
    auto edge_at = [&](VertexId v) {
        while (t.parent(v) != kNoVertex && t.height(t.parent(v)) <= h) v = t.parent(v);
        return v;
    };
    VertexId ex = edge_at(x.vertex), ey = edge_at(y.vertex);
    if (ex == ey) return TreePoint{ex, h};
    std::set<VertexId> chain;
    for (VertexId v = ex; v != kNoVertex; v = t.parent(v)) chain.insert(v);
    VertexId c = ey;
    while (!chain.count(c)) c = t.parent(c);
    return t.point(c);
}

std::vector<TreePoint> sample_points(const MergeTree& t) {
    std::vector<TreePoint> pts;
    auto hs = t.vertex_heights();
    for (std::size_t i = 0; i < hs.size(); ++i) {
        auto a = t.level_set(hs[i]);
        pts.insert(pts.end(), a.begin(), a.end());
        if (i + 1 < hs.size()) {
            auto b = t.level_set((hs[i] + hs[i + 1]) / 2);
            pts.insert(pts.end(), b.begin(), b.end());
        }
    }
    return pts;
}

}  // namespace

TEST_CASE("validate_tree reports the first broken invariant") {
    CHECK_FALSE(validate_tree({{"root", kNoVertex, kInfinity}, {"u", 0, 0}}));

    auto v = validate_tree({{"root", kNoVertex, kInfinity}, {"v", 0, 3}, {"a", 1, 3}, {"b", 1, 0}});
    REQUIRE(v);
    CHECK(v->kind == TreeViolationKind::non_strict_height);
    CHECK(to_string(v->kind) == "non-strict height");
    CHECK(v->vertex == 2);

    v = validate_tree({{"r1", kNoVertex, kInfinity}, {"r2", kNoVertex, kInfinity}, {"u", 0, 0}});
    REQUIRE(v);
    CHECK(to_string(v->kind) == "multiple roots");

    v = validate_tree({{"root", kNoVertex, kInfinity}, {"u", 0, kInfinity}});
    REQUIRE(v);
    CHECK(v->kind == TreeViolationKind::nonfinite_height);

    v = validate_tree({{"root", kNoVertex, kInfinity}, {"a", 0, 0}, {"b", 0, 1}});
    REQUIRE(v);
    CHECK(v->kind == TreeViolationKind::root_degree);

    v = validate_tree({{"root", kNoVertex, kInfinity}, {"p", 0, 2}, {"u", 1, 0}});
    REQUIRE(v);
    CHECK(v->kind == TreeViolationKind::unary_vertex);

    CHECK_THROWS_AS(MergeTree({{"root", kNoVertex, 5}, {"u", 0, 0}}), TreeError);
}

TEST_CASE("normalise contracts unary chains") {
    TreeSpec s{{"root", kNoVertex, kInfinity}, {"p", 0, 5}, {"q", 1, 4}, {"a", 2, 0}, {"b", 2, 1}, {"c", 0, 9}};
    // root has two children here, so the root edge is fixed first
    s[5].parent = 1;
    s[1].height = 5;
    TreeSpec chain{{"root", kNoVertex, kInfinity}, {"p", 0, 6}, {"q", 1, 4}, {"a", 2, 0}, {"b", 2, 1}};
    auto n = normalise(chain);
    CHECK_FALSE(validate_tree(n));
    MergeTree t(n);
    CHECK(t.size() == 4);
    CHECK(t.height(t.top_vertex()) == 4);
    CHECK(t.leaves().size() == 2);
}

TEST_CASE("ancestor_at on Tree A") {
    auto t = tree_a().tree();
    VertexId u1 = id(t, "u1"), u2 = id(t, "u2"), v = id(t, "v");
    CHECK(t.ancestor_at(t.point(u1), 0) == t.point(u1));
    CHECK(t.ancestor_at(t.point(u1), 2) == TreePoint{u1, 2});
    CHECK(t.ancestor_at(t.point(u2), 3) == t.point(v));
    CHECK(t.ancestor_at(t.point(u2), kInfinity) == t.point(t.root()));
    CHECK_THROWS(t.ancestor_at(t.point(u2), 0.5));
}

TEST_CASE("lca on Tree A") {
    auto t = tree_a().tree();
    VertexId u1 = id(t, "u1"), u2 = id(t, "u2"), v = id(t, "v");
    CHECK(t.lca(t.point(u1), t.point(u2)) == t.point(v));
    TreePoint mid{u1, 2};
    CHECK(t.lca(t.point(u1), mid) == mid);
    CHECK(t.is_ancestor(mid, t.point(u1)));
    CHECK_FALSE(t.is_ancestor(t.point(u1), mid));
}

TEST_CASE("level_set on Tree A") {
    auto t = tree_a().tree();
    CHECK(t.level_set(2).size() == 2);
    CHECK(t.level_set(3).size() == 1);
    CHECK(t.level_set(3).front() == t.point(id(t, "v")));
    auto low = t.level_set(0.5);
    REQUIRE(low.size() == 1);
    CHECK(low.front().vertex == id(t, "u1"));
    CHECK(t.level_set(100).size() == 1);
}

TEST_CASE("random trees: lca matches a parent-chain walk") {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 40; ++iter) {
        auto t = omt::testing::random_tree(rng, 10, 10).tree();
        auto pts = sample_points(t);
        for (std::size_t i = 0; i < pts.size(); i += 3)
            for (std::size_t j = 0; j < pts.size(); j += 2) {
                auto l = t.lca(pts[i], pts[j]);
                CHECK(l == naive_lca(t, pts[i], pts[j]));
                CHECK(l == t.lca(pts[j], pts[i]));
                CHECK(l.height >= std::max(pts[i].height, pts[j].height));
                CHECK((l == pts[i]) == t.is_ancestor(pts[i], pts[j]));
            }
    }
}

TEST_CASE("ancestor transitivity and level set sizes") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 30; ++iter) {
        auto t = omt::testing::random_tree(rng, 12).tree();
        auto hs = t.vertex_heights();
        for (VertexId u : t.leaves())
            for (double h1 : hs)
                for (double h2 : hs) {
                    if (h1 < t.height(u) || h2 < h1) continue;
                    auto x = t.point(u);
                    CHECK(t.ancestor_at(t.ancestor_at(x, h1), h2) == t.ancestor_at(x, h2));
                }
        for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
            double a = hs[i] + (hs[i + 1] - hs[i]) / 4, b = hs[i] + 3 * (hs[i + 1] - hs[i]) / 4;
            CHECK(t.level_set(a).size() == t.level_set(b).size());
            CHECK(t.level_set(hs[i]).size() >= t.level_set(b).size());
        }
        CHECK(t.level_set(hs.back() + 1).size() == 1);
    }
}

TEST_CASE("normalise_to_zero and shifted") {
    auto t = tree_a().tree().shifted(2.5);
    CHECK(t.min_leaf_height() == 2.5);
    auto z = normalise_to_zero(t);
    CHECK(z.min_leaf_height() == 0);
    CHECK(z.height(z.top_vertex()) == 3);
}
