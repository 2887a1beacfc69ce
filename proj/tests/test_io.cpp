#include "doctest.h"
#include "omt/io.hpp"
#include "support.hpp"

using namespace omt;
using namespace omt::testing;

namespace {

const char* kTreeA = R"({
  "format": "omtree",
  "version": 1,
  "vertices": [
    {"id": "root", "parent": null, "height": "inf", "children": ["v"]},
    {"id": "v", "parent": "root", "height": 3, "children": ["u1", "u2"]},
    {"id": "u1", "parent": "v", "height": 0},
    {"id": "u2", "parent": "v", "height": 1}
  ]
})";

}  // namespace

TEST_CASE("parse the Tree A document") {
    auto t = io::parse_tree(kTreeA);
    auto a = tree_a();
    CHECK(t.tree().size() == 4);
    CHECK(in_order_walk(t).curve == in_order_walk(a).curve);
    CHECK(t.tree().name(t.leaf_order()[0]) == "u1");
}

TEST_CASE("children arrays define the leaf order") {
    std::string doc = kTreeA;
    doc.replace(doc.find("[\"u1\", \"u2\"]"), 12, "[\"u2\", \"u1\"]");
    auto t = io::parse_tree(doc);
    CHECK(in_order_walk(t).curve.heights() == std::vector<double>{kInfinity, 1, 3, 0, kInfinity});
}

TEST_CASE("semantic and syntax errors") {
    std::string bad = kTreeA;
    bad.replace(bad.find("\"height\": 1}"), 12, "\"height\": \"inf\"}");
    try {
        io::parse_tree(bad);
        FAIL("expected an error");
    } catch (const io::SemanticError& e) {
        CHECK(e.invariant() == "non-finite height");
        CHECK(e.vertex() == "u2");
    }

    std::string cut = std::string(kTreeA).substr(0, 120);
    try {
        io::parse_tree(cut);
        FAIL("expected an error");
    } catch (const io::ParseError& e) {
        CHECK(e.line() >= 5);
        CHECK(e.column() >= 1);
    }

    std::string mismatch = kTreeA;
    mismatch.replace(mismatch.find("[\"u1\", \"u2\"]"), 12, "[\"u1\"]");
    CHECK_THROWS_AS(io::parse_tree(mismatch), io::SemanticError);
}

TEST_CASE("serialisation round trips exactly") {
    std::mt19937_64 rng(71);
    for (int iter = 0; iter < 30; ++iter) {
        auto t = random_tree(rng, 10);
        auto shifted = OrderedMergeTree(t.tree().shifted(0.1));
        for (const auto& x : {t, shifted}) {
            auto text = io::serialise_tree(x, {{"note", "n"}});
            auto doc = io::parse_tree_document(text);
            CHECK(io::serialise_tree(doc.tree, doc.metadata) == text);
            CHECK(doc.tree.tree().spec().size() == x.tree().spec().size());
            CHECK(in_order_walk(doc.tree).curve == in_order_walk(x).curve);
        }
    }
    CHECK(io::format_number(0.1) == "0.1");
    CHECK(io::format_number(kInfinity) == "inf");
    CHECK(io::format_fixed(1.0) == "1.000000000");
}

TEST_CASE("certificates round trip") {
    auto a = share(tree_a()), b = share(tree_b());
    auto cert = monotone_interleaving_distance(a, b);
    io::Certificate c{a, b, cert.delta, std::make_pair(cert.alpha, cert.beta), cert.alpha,
                      good_to_labelling(cert.alpha)};
    auto text = io::serialise_certificate(c);
    auto back = io::parse_certificate(text);
    CHECK(back.delta == 1.0);
    REQUIRE(back.interleaving);
    CHECK_FALSE(check_interleaving(back.interleaving->first, back.interleaving->second));
    REQUIRE(back.labelling);
    CHECK(label_distance(*back.labelling) <= 1.0);
    CHECK(io::serialise_certificate(back) == text);
}

TEST_CASE("curve exports") {
    auto c = in_order_walk(tree_a()).curve;
    CHECK(io::curve_csv(c) == "param,height\n0,inf\n0.25,0\n0.5,3\n0.75,1\n1,inf\n");
    auto svg = io::curve_svg(c);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("viewBox=\"0 0 800 400\"") != std::string::npos);
}

TEST_CASE("verify_certificate on each form") {
    auto a = share(tree_a()), b = share(tree_b());
    auto c = io::build_certificate(a, b);
    for (auto k : {io::CertificateKind::interleaving, io::CertificateKind::good_map, io::CertificateKind::labelling})
        CHECK_FALSE(io::verify_certificate(c, k, c.delta));
    auto why = io::verify_certificate(c, io::CertificateKind::labelling, 0.5);
    REQUIRE(why);
    CHECK(why->find("exceeds") != std::string::npos);
    CHECK(io::verify_certificate(c, io::CertificateKind::interleaving, 0.5));
    c.good_map.reset();
    CHECK_THROWS_AS(io::verify_certificate(c, io::CertificateKind::good_map, 1), std::invalid_argument);
}
