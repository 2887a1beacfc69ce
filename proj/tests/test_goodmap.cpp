#include "doctest.h"
#include "support.hpp"

using namespace omt;
using namespace omt::testing;

namespace {

VertexId id(const MergeTree& t, const char* name) { return *t.find(name); }

void check_pipeline(const TreeRef& t, const TreeRef& u) {
    auto cert = monotone_interleaving_distance(t, u);
    const double d = cert.delta;
    REQUIRE_FALSE(check_good_map(cert.alpha, GoodMapVariant::tw));
    REQUIRE_FALSE(check_good_map(cert.alpha, GoodMapVariant::g));
    std::vector<LabellingConstructionState> states;
    auto lab = good_to_labelling(cert.alpha, &states);
    CHECK(lab.size() == t->tree().leaves().size() + u->tree().leaves().size());
    CHECK_NOTHROW(check_labelling(lab));
    CHECK_FALSE(check_monotone_labelling(lab));
    CHECK(label_distance(lab) <= d);
    for (const auto& st : states) {
        if (st.s_i.empty()) continue;
        CHECK(st.h < st.w_f.height);
        CHECK(st.h == std::max(st.h1, st.h2));
    }
    auto [a, b] = labelling_to_interleaving(lab, d);
    CHECK_FALSE(check_interleaving(a, b));
    CHECK_FALSE(check_monotone(a));
    CHECK_FALSE(check_monotone(b));
}

}  // namespace

TEST_CASE("induced matrices and label distance") {
    auto a = tree_a().tree(), b = tree_b().tree();
    auto ma = induced_matrix(a, {a.point(id(a, "u1")), a.point(id(a, "u2"))});
    auto mb = induced_matrix(b, {b.point(id(b, "w1")), b.point(id(b, "w2"))});
    CHECK(ma(0, 0) == 0);
    CHECK(ma(0, 1) == 3);
    CHECK(ma(1, 0) == 3);
    CHECK(ma(1, 1) == 1);
    CHECK(mb(0, 0) == 1);
    CHECK(mb(1, 1) == 0);
    CHECK(mb(0, 1) == 3);
    CHECK(label_distance(ma, mb) == 1);
    CHECK(label_distance(ma, ma) == 0);
    auto single = induced_matrix(a, {a.point(id(a, "v"))});
    CHECK(single.size() == 1);
    CHECK(single(0, 0) == 3);
    Matrix up = ma;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) up(i, j) += 0.75;
    CHECK(label_distance(ma, up) == 0.75);
    CHECK_THROWS(label_distance(ma, single));
}

TEST_CASE("monotone labellings") {
    auto a = share(tree_a()), b = share(tree_b());
    const auto& ta = a->tree();
    const auto& tb = b->tree();
    Labelling crossed{a, b, {ta.point(id(ta, "u1")), ta.point(id(ta, "u2"))},
                      {tb.point(id(tb, "w2")), tb.point(id(tb, "w1"))}};
    auto w = check_monotone_labelling(crossed);
    REQUIRE(w);
    CHECK(w->first == 0);
    CHECK(w->second == 1);

    auto s = share(single_leaf(0));
    Labelling one{s, s, {s->tree().point(id(s->tree(), "u"))}, {s->tree().point(id(s->tree(), "u"))}};
    CHECK_FALSE(check_monotone_labelling(one));
}

TEST_CASE("identity map gives the leaf labelling") {
    auto t = share(caterpillar3());
    auto lab = good_to_labelling(identity_map(t));
    CHECK(lab.size() == 6);
    CHECK(label_distance(lab) == 0);
    for (const auto& x : lab.pi) CHECK(t->tree().is_leaf(x.vertex));
    auto [a, b] = labelling_to_interleaving(lab, 0);
    CHECK_FALSE(check_interleaving(a, b));
}

TEST_CASE("Tree A/B pipeline") { check_pipeline(share(tree_a()), share(tree_b())); }

TEST_CASE("deep unvisited subtree breaks both variants") {
    auto s = share(single_leaf(0));
    auto t = share(make_tree({{"root", "", kInfinity}, {"m", "root", 10}, {"a", "m", 0}, {"b", "m", 0}}));
    auto m = make_shift_map(s, t, 1, {{id(s->tree(), "u"), TreePoint{id(t->tree(), "a"), 1}}});
    auto tw = check_good_map(m, GoodMapVariant::tw);
    auto g = check_good_map(m, GoodMapVariant::g);
    REQUIRE(tw);
    REQUIRE(g);
    CHECK(tw->condition == "T3");
    CHECK(g->condition == "G3");
    CHECK_FALSE(in_image(m, t->tree().point(id(t->tree(), "b"))));
    CHECK(lowest_image_ancestor(m, t->tree().point(id(t->tree(), "b"))) == t->tree().point(id(t->tree(), "m")));
    CHECK_THROWS(good_to_labelling(m));

    auto wide = make_shift_map(s, t, 5, {{id(s->tree(), "u"), TreePoint{id(t->tree(), "a"), 5}}});
    CHECK_FALSE(check_good_map(wide, GoodMapVariant::tw));
    CHECK_FALSE(check_good_map(wide, GoodMapVariant::g));
}

TEST_CASE("random pairs: the three certificate forms agree") {
    std::mt19937_64 rng(53);
    for (int iter = 0; iter < 50; ++iter) {
        INFO("iteration " << iter);
        check_pipeline(share(random_tree(rng, 6)), share(random_tree(rng, 6)));
    }
}

TEST_CASE("random candidate maps: both good-map variants agree") {
    std::mt19937_64 rng(59);
    int determined = 0;
    for (int iter = 0; iter < 400; ++iter) {
        auto s = share(random_tree(rng, 5)), t = share(random_tree(rng, 5));
        double delta = std::uniform_int_distribution<int>(0, 96)(rng) * kGrid;
        std::map<VertexId, TreePoint> images;
        bool ok = true;
        for (VertexId u : s->tree().leaves()) {
            double h = s->tree().height(u) + delta;
            std::vector<VertexId> fits;
            for (VertexId w : t->tree().leaves())
                if (t->tree().height(w) <= h) fits.push_back(w);
            if (fits.empty()) {
                ok = false;
                break;
            }
            VertexId w = fits[std::uniform_int_distribution<std::size_t>(0, fits.size() - 1)(rng)];
            images[u] = t->tree().ancestor_at(t->tree().point(w), h);
        }
        if (!ok) continue;
        auto m = make_shift_map(s, t, delta, images);
        if (check_determination(m)) continue;
        ++determined;
        auto tw = check_good_map(m, GoodMapVariant::tw);
        auto g = check_good_map(m, GoodMapVariant::g);
        CHECK(tw.has_value() == g.has_value());
    }
    CHECK(determined > 50);
}

TEST_CASE("decimal heights: the pipeline survives rounding") {
    std::mt19937_64 rng(61);
    for (int iter = 0; iter < 80; ++iter) {
        INFO("iteration " << iter);
        auto t = random_tree(rng, 8), u = random_tree(rng, 8);
        auto a = share(OrderedMergeTree(t.tree().shifted(0.1)));
        auto b = share(OrderedMergeTree(u.tree().shifted(1.0 / 3)));
        auto cert = monotone_interleaving_distance(a, b);
        REQUIRE_FALSE(check_interleaving(cert.alpha, cert.beta));
        REQUIRE_FALSE(check_monotone(cert.alpha));
        auto [p, q] = interleaving_to_matching(cert.alpha, cert.beta);
        CHECK(classify_curve(*a, p) == CurveClass::in_order);
        auto lab = good_to_labelling(cert.alpha);
        CHECK(label_distance(lab) <= cert.delta + 1e-9);
        auto [x, y] = labelling_to_interleaving(lab, cert.delta);
        CHECK_FALSE(check_interleaving(x, y));
    }
}
