#include "omt/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>

#include "detail.hpp"
#include "json.hpp"

namespace omt::io {

using nlohmann::json;

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error("syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

SemanticError::SemanticError(std::string invariant, std::string vertex, const std::string& detail)
    : std::runtime_error(invariant + (vertex.empty() ? "" : " at vertex '" + vertex + "'") +
                         (detail.empty() ? "" : ": " + detail)),
      invariant_(std::move(invariant)),
      vertex_(std::move(vertex)) {}

std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double x, int decimals) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << x;
    return os.str();
}

namespace {

const char* kTreeFormat = "omtree";
const char* kCertificateFormat = "omtree-certificate";

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        std::size_t end = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string msg = e.what();
        if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
        throw ParseError(msg, line, column);
    }
}

std::string id_of(const json& j, const std::string& where) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw SemanticError("bad id", "", where + " must be a string or integer");
}

double height_of(const json& j, const std::string& vertex) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "infinity") return kInfinity;
    }
    throw SemanticError("bad height", vertex, "height must be a number or \"inf\"");
}

json height_json(double h) {
    if (std::isinf(h)) return "inf";
    return h;
}

json tree_json(const OrderedMergeTree& omt, const Metadata& metadata) {
    const MergeTree& t = omt.tree();
    json vertices = json::array();
    for (VertexId v : t.preorder()) {
        json rec;
        rec["id"] = t.name(v);
        rec["parent"] = t.parent(v) == kNoVertex ? json(nullptr) : json(t.name(t.parent(v)));
        rec["height"] = height_json(t.height(v));
        if (!t.is_leaf(v)) {
            json kids = json::array();
            for (VertexId c : t.children(v)) kids.push_back(t.name(c));
            rec["children"] = kids;
        }
        vertices.push_back(rec);
    }
    json meta = json::object();
    for (const auto& [k, v] : metadata) meta[k] = v;
    return json{{"format", kTreeFormat}, {"version", 1}, {"vertices", vertices}, {"metadata", meta}};
}

TreeDocument tree_from_json(const json& doc) {
    if (!doc.is_object()) throw SemanticError("bad document", "", "tree document must be an object");
    if (doc.contains("format") && doc["format"] != kTreeFormat)
        throw SemanticError("bad document", "", "unknown format");
    if (doc.contains("version") && doc["version"] != 1) throw SemanticError("bad document", "", "unsupported version");
    if (!doc.contains("vertices") || !doc["vertices"].is_array())
        throw SemanticError("bad document", "", "missing vertices array");

    const json& vs = doc["vertices"];
    std::unordered_map<std::string, VertexId> index;
    std::vector<std::string> names;
    for (const auto& rec : vs) {
        if (!rec.is_object() || !rec.contains("id")) throw SemanticError("bad vertex", "", "vertex record needs an id");
        auto name = id_of(rec["id"], "vertex id");
        if (!index.emplace(name, static_cast<VertexId>(names.size())).second)
            throw SemanticError(to_string(TreeViolationKind::duplicate_name), name, "");
        names.push_back(name);
    }
    TreeSpec spec;
    std::vector<std::vector<VertexId>> order(names.size());
    std::vector<bool> has_order(names.size(), false);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const auto& rec = vs[i];
        VertexSpec s;
        s.name = names[i];
        if (!rec.contains("height")) throw SemanticError("bad height", s.name, "missing height");
        s.height = height_of(rec["height"], s.name);
        if (!rec.contains("parent") || rec["parent"].is_null()) {
            s.parent = kNoVertex;
        } else {
            auto p = id_of(rec["parent"], "parent");
            auto it = index.find(p);
            if (it == index.end()) throw SemanticError(to_string(TreeViolationKind::bad_parent), s.name, "unknown parent '" + p + "'");
            s.parent = it->second;
        }
        if (rec.contains("children")) {
            if (!rec["children"].is_array()) throw SemanticError("bad children", s.name, "children must be an array");
            has_order[i] = true;
            for (const auto& c : rec["children"]) {
                auto cn = id_of(c, "child");
                auto it = index.find(cn);
                if (it == index.end()) throw SemanticError("bad children", s.name, "unknown child '" + cn + "'");
                order[i].push_back(it->second);
            }
        }
        spec.push_back(std::move(s));
    }
    if (auto v = validate_tree(spec)) {
        std::string who = v->vertex == kNoVertex ? "" : names[static_cast<std::size_t>(v->vertex)];
        throw SemanticError(to_string(v->kind), who, v->message);
    }
    MergeTree tree(spec);
    std::vector<std::vector<VertexId>> kids(tree.size());
    for (VertexId v = 0; v < static_cast<VertexId>(tree.size()); ++v) {
        auto c = tree.children(v);
        std::vector<VertexId> actual(c.begin(), c.end());
        if (!has_order[v]) {
            if (!actual.empty()) throw SemanticError("bad children", names[v], "internal vertex without children order");
            continue;
        }
        auto a = actual, b = order[v];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) throw SemanticError("bad children", names[v], "children list does not match parent references");
        kids[v] = order[v];
    }
    Metadata meta;
    if (doc.contains("metadata")) {
        if (!doc["metadata"].is_object()) throw SemanticError("bad document", "", "metadata must be an object");
        for (const auto& [k, v] : doc["metadata"].items()) meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    return TreeDocument{OrderedMergeTree(tree.with_children_order(kids)), std::move(meta)};
}

json point_json(const MergeTree& t, const TreePoint& x) {
    return json{{"edge", t.name(x.vertex)}, {"height", height_json(x.height)}};
}

TreePoint point_from_json(const MergeTree& t, const json& j) {
    if (!j.is_object() || !j.contains("edge") || !j.contains("height"))
        throw SemanticError("bad point", "", "point needs edge and height");
    auto name = id_of(j["edge"], "edge");
    auto v = t.find(name);
    if (!v) throw SemanticError("bad point", name, "unknown vertex");
    return TreePoint{*v, height_of(j["height"], name)};
}

json map_json(const ShiftMap& a) {
    const MergeTree& s = a.source->tree();
    json images = json::object();
    for (VertexId u : s.leaves()) images[s.name(u)] = point_json(a.target->tree(), a.leaf_images[u]);
    return json{{"delta", a.delta}, {"leaf_images", images}};
}

ShiftMap map_from_json(const json& j, TreeRef source, TreeRef target, double delta) {
    if (!j.is_object() || !j.contains("leaf_images") || !j["leaf_images"].is_object())
        throw SemanticError("bad certificate", "", "map needs a leaf_images object");
    std::map<VertexId, TreePoint> images;
    for (const auto& [name, pj] : j["leaf_images"].items()) {
        auto u = source->tree().find(name);
        if (!u || !source->tree().is_leaf(*u)) throw SemanticError("bad certificate", name, "not a leaf of the source tree");
        images[*u] = point_from_json(target->tree(), pj);
    }
    return make_shift_map(source, target, delta, images);
}

}  // namespace

TreeDocument parse_tree_document(std::string_view text) { return tree_from_json(parse_json(text)); }

OrderedMergeTree parse_tree(std::string_view text) { return parse_tree_document(text).tree; }

std::string serialise_tree(const OrderedMergeTree& t, const Metadata& metadata) {
    return tree_json(t, metadata).dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

OrderedMergeTree read_tree(const std::filesystem::path& path) { return parse_tree(read_file(path)); }

std::string serialise_certificate(const Certificate& c) {
    json doc{{"format", kCertificateFormat},
             {"version", 1},
             {"delta", c.delta},
             {"tree", tree_json(*c.tree, {})},
             {"tree_prime", tree_json(*c.tree_prime, {})}};
    if (c.interleaving) doc["interleaving"] = json{{"alpha", map_json(c.interleaving->first)}, {"beta", map_json(c.interleaving->second)}};
    if (c.good_map) doc["good_map"] = map_json(*c.good_map);
    if (c.labelling) {
        json pi = json::array(), pi_prime = json::array();
        for (const auto& x : c.labelling->pi) pi.push_back(point_json(c.tree->tree(), x));
        for (const auto& y : c.labelling->pi_prime) pi_prime.push_back(point_json(c.tree_prime->tree(), y));
        doc["labelling"] = json{{"pi", pi}, {"pi_prime", pi_prime}};
    }
    return doc.dump(2) + "\n";
}

Certificate parse_certificate(std::string_view text, TreeRef tree, TreeRef tree_prime) {
    json doc = parse_json(text);
    if (!doc.is_object() || doc.value("format", "") != kCertificateFormat)
        throw SemanticError("bad certificate", "", "not an omtree certificate");
    Certificate c;
    c.tree = tree ? tree : (doc.contains("tree") ? share(tree_from_json(doc["tree"]).tree) : nullptr);
    c.tree_prime = tree_prime ? tree_prime
                              : (doc.contains("tree_prime") ? share(tree_from_json(doc["tree_prime"]).tree) : nullptr);
    if (!c.tree || !c.tree_prime) throw SemanticError("bad certificate", "", "certificate has no trees");
    if (doc.contains("delta")) c.delta = doc["delta"].get<double>();
    if (doc.contains("interleaving")) {
        const auto& il = doc["interleaving"];
        if (!il.contains("alpha") || !il.contains("beta"))
            throw SemanticError("bad certificate", "", "interleaving needs alpha and beta");
        c.interleaving = std::make_pair(map_from_json(il["alpha"], c.tree, c.tree_prime, il["alpha"].value("delta", c.delta)),
                                        map_from_json(il["beta"], c.tree_prime, c.tree, il["beta"].value("delta", c.delta)));
    }
    if (doc.contains("good_map"))
        c.good_map = map_from_json(doc["good_map"], c.tree, c.tree_prime, doc["good_map"].value("delta", c.delta));
    if (doc.contains("labelling")) {
        const auto& lj = doc["labelling"];
        Labelling lab{c.tree, c.tree_prime, {}, {}};
        for (const auto& p : lj.at("pi")) lab.pi.push_back(point_from_json(c.tree->tree(), p));
        for (const auto& p : lj.at("pi_prime")) lab.pi_prime.push_back(point_from_json(c.tree_prime->tree(), p));
        c.labelling = std::move(lab);
    }
    return c;
}

std::string curve_csv(const Curve1D& c) {
    std::string out = "param,height\n";
    for (std::size_t i = 0; i < c.size(); ++i) out += format_number(c.param(i)) + "," + format_number(c[i]) + "\n";
    return out;
}

std::string curve_svg(const Curve1D& c) {
    const double lo = c.min_height(), hi = c.max_finite_height();
    const double range = hi > lo ? hi - lo : 1.0;
    const double top = hi + 0.25 * range;
    const double w = 800, h = 400, pad = 20;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    os << "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < c.size(); ++i) {
        double y = std::isfinite(c[i]) ? c[i] : top;
        double px = pad + c.param(i) * (w - 2 * pad);
        double py = h - pad - (y - lo) / (top - lo) * (h - 2 * pad);
        os << (i ? " " : "") << format_number(px) << "," << format_number(py);
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

namespace {

std::string describe(const MergeTree& t, const TreePoint& x) {
    if (x.height == t.height(x.vertex)) return t.name(x.vertex);
    return t.name(x.vertex) + "@" + format_number(x.height);
}

std::string crossing(const char* what, const ShiftMap& a, const OrderWitness& w) {
    const MergeTree& s = a.source->tree();
    return std::string(what) + " is not monotone at " + describe(s, w.x1) + ", " + describe(s, w.x2);
}

}  // namespace

Certificate build_certificate(const TreeRef& tree, const TreeRef& tree_prime) {
    auto cert = monotone_interleaving_distance(tree, tree_prime);
    Certificate c{tree, tree_prime, cert.delta, std::make_pair(cert.alpha, cert.beta), cert.alpha, std::nullopt};
    c.labelling = good_to_labelling(cert.alpha);
    return c;
}

std::optional<std::string> verify_certificate(const Certificate& c, CertificateKind kind, double delta) {
    switch (kind) {
    case CertificateKind::interleaving: {
        if (!c.interleaving) throw std::invalid_argument("certificate has no interleaving");
        auto [a, b] = *c.interleaving;
        a.delta = b.delta = delta;
        if (auto v = check_interleaving(a, b)) return v->condition + ": " + v->detail;
        if (auto w = check_monotone(a)) return crossing("alpha", a, *w);
        if (auto w = check_monotone(b)) return crossing("beta", b, *w);
        return std::nullopt;
    }
    case CertificateKind::good_map: {
        if (!c.good_map) throw std::invalid_argument("certificate has no good map");
        auto a = *c.good_map;
        a.delta = delta;
        if (auto v = check_good_map(a, GoodMapVariant::tw)) return v->condition + ": " + v->detail;
        if (auto v = check_good_map(a, GoodMapVariant::g)) return v->condition + ": " + v->detail;
        if (auto w = check_monotone(a)) return crossing("map", a, *w);
        return std::nullopt;
    }
    case CertificateKind::labelling: {
        if (!c.labelling) throw std::invalid_argument("certificate has no labelling");
        check_labelling(*c.labelling);
        const Labelling& lab = *c.labelling;
        double ld = label_distance(lab);
        if (ld > delta + detail::slack(lab.tree->tree(), lab.tree_prime->tree(), delta))
            return "label distance " + format_number(ld) + " exceeds " + format_number(delta);
        if (auto w = check_monotone_labelling(lab))
            return "labels " + std::to_string(w->first) + " and " + std::to_string(w->second) + " cross";
        return std::nullopt;
    }
    }
    return std::nullopt;
}

}  // namespace omt::io
