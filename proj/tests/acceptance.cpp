// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "omt/oracle.hpp"
#include "support.hpp"

using namespace omt;
using namespace omt::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool ok = true;
    std::string note;
    void fail(const std::string& why) {
        if (ok) note = why;
        ok = false;
    }
};

int failures = 0;

void criterion(int n, const char* title, double budget, const std::function<void(Outcome&)>& body) {
    Outcome o;
    auto t0 = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    double s = seconds_since(t0);
    if (s > budget) o.fail("over time budget");
    if (!o.ok) ++failures;
    std::printf("[%s] %d. %s (%.2f s / %.0f s)%s%s\n", o.ok ? "PASS" : "FAIL", n, title, s, budget,
                o.note.empty() ? "" : ": ", o.note.c_str());
    std::fflush(stdout);
}

bool same_layer_orders(const OrderedMergeTree& x, const OrderedMergeTree& y) {
    const auto& t = x.tree();
    for (double h : with_midpoints(t.vertex_heights())) {
        auto level = t.level_set(h);
        for (const auto& a : level)
            for (const auto& b : level)
                if (x.compare(a, b) != y.compare(a, b)) return false;
    }
    return true;
}

}  // namespace

int main() {
    criterion(1, "order bijection round trip on 500 random trees", 5, [](Outcome& o) {
        std::mt19937_64 rng(1001);
        for (int i = 0; i < 500; ++i) {
            auto omt = random_tree(rng, 20);
            const auto& t = omt.tree();
            auto order = induced_leaf_order(t, [&](const TreePoint& a, const TreePoint& b) { return omt.compare(a, b); });
            if (order != omt.leaf_order()) o.fail("leaf order changed after a round trip");
            if (!same_layer_orders(omt, OrderedMergeTree(t, order))) o.fail("layer order changed after a round trip");
        }
    });

    criterion(2, "Frechet engine against the discrete oracle on 200 pairs", 30, [](Outcome& o) {
        std::mt19937_64 rng(1002);
        for (int i = 0; i < 200; ++i) {
            auto p = in_order_walk(random_tree(rng, 12)).curve;
            auto q = in_order_walk(random_tree(rng, 12)).curve;
            double d = compute_frechet(p, q).delta;
            double disc = oracle::discrete_frechet_refined(p, q, 0.01);
            if (!(d >= disc - 0.02 && d <= disc)) o.fail("distance outside the oracle window");
            if (!decide_frechet(p, q, d)) o.fail("decision false at the distance");
            if (d > 0 && decide_frechet(p, q, d - 1e-9)) o.fail("decision true below the distance");
        }
    });

    criterion(3, "matching and interleaving certificates on 200 pairs", 60, [](Outcome& o) {
        std::mt19937_64 rng(1003);
        for (int i = 0; i < 200; ++i) {
            auto t = share(random_tree(rng, 10)), u = share(random_tree(rng, 10));
            auto cert = monotone_interleaving_distance(t, u);
            if (check_interleaving(cert.alpha, cert.beta)) o.fail("interleaving check failed");
            if (check_monotone(cert.alpha) || check_monotone(cert.beta)) o.fail("monotonicity check failed");
            auto [p, q] = interleaving_to_matching(cert.alpha, cert.beta);
            if (classify_curve(*t, p) != CurveClass::in_order || classify_curve(*u, q) != CurveClass::in_order)
                o.fail("reconstructed curves are not in-order");
            if (matched_cost(t->tree(), u->tree(), p, q) > cert.delta + 1e-9) o.fail("reconstructed matching too costly");
        }
    });

    criterion(4, "interleaving, good map and labelling agree on 100 pairs", 60, [](Outcome& o) {
        std::mt19937_64 rng(1004);
        for (int i = 0; i < 100; ++i) {
            auto t = share(random_tree(rng, 8)), u = share(random_tree(rng, 8));
            auto cert = monotone_interleaving_distance(t, u);
            auto tw = check_good_map(cert.alpha, GoodMapVariant::tw);
            auto g = check_good_map(cert.alpha, GoodMapVariant::g);
            if (tw || g) o.fail("optimal alpha is not a good map");
            auto lab = good_to_labelling(cert.alpha);
            if (check_monotone_labelling(lab)) o.fail("labelling not monotone");
            if (label_distance(lab) > cert.delta) o.fail("labelling distance above the optimum");
            auto [a, b] = labelling_to_interleaving(lab, cert.delta);
            if (check_interleaving(a, b) || check_monotone(a) || check_monotone(b))
                o.fail("labelling does not give back an interleaving");
        }
    });

    criterion(5, "mirrored two-leaf trees: distance 1, order-minimised 0", 1, [](Outcome& o) {
        double d = monotone_distance(tree_a(), tree_b());
        if (std::abs(d - 1.0) > 1e-9) o.fail("monotone distance is not 1");
        if (oracle::brute_force_min_over_orders(tree_a().tree(), tree_b().tree()).value != 0)
            o.fail("some leaf order should align the trees");
    });

    criterion(6, "balanced partition reduction gap", 120, [](Outcome& o) {
        auto [t, u] = oracle::build_partition_reduction({{1, 1, 2}, 2, 9});
        if (oracle::brute_force_min_over_orders(t, u).value > 1 + 1e-9) o.fail("YES instance above 1");
        auto [t2, u2] = oracle::build_partition_reduction({{1, 1, 4}, 2, 9});
        if (oracle::brute_force_min_over_orders(t2, u2).value < 3 - 1e-9) o.fail("NO instance below 3");
    });

    criterion(7, "metric sanity and shift law", 30, [](Outcome& o) {
        std::mt19937_64 rng(1007);
        for (int i = 0; i < 100; ++i) {
            auto a = random_tree(rng, 10), b = random_tree(rng, 10), c = random_tree(rng, 10);
            double ab = monotone_distance(a, b), ba = monotone_distance(b, a);
            double bc = monotone_distance(b, c), ac = monotone_distance(a, c);
            if (monotone_distance(a, a) != 0) o.fail("d(T, T) is not 0");
            if (std::abs(ab - ba) > 1e-9) o.fail("not symmetric");
            if (ac > ab + bc + 1e-9) o.fail("triangle inequality fails");
        }
        for (double c : {0.5, 2.0, 10.0}) {
            auto t = random_tree(rng, 10);
            if (std::abs(monotone_distance(t, OrderedMergeTree(t.tree().shifted(c))) - c) > 1e-9)
                o.fail("shift law fails");
        }
    });

    criterion(8, "caterpillar scaling n = 100, 200, 400", 60, [](Outcome& o) {
        double first = 0;
        for (std::size_t n : {100, 200, 400}) {
            auto t = caterpillar(n, n), u = caterpillar(n, n + 1);
            double best = 1e9;
            for (int rep = 0; rep < 5; ++rep) {
                auto t0 = Clock::now();
                volatile double d = monotone_distance(t, u);
                (void)d;
                best = std::min(best, seconds_since(t0));
            }
            std::printf("    n = %zu: %.4f s\n", n, best);
            if (n == 400 && best > 10) o.fail("n = 400 over 10 s");
            if (n == 100) first = best;
            if (n == 400 && first > 0.002 && best / first > 32) o.fail("growth above 32x from n = 100 to 400");
        }
    });

    return failures == 0 ? 0 : 1;
}
