#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "omt/frechet.hpp"
#include "omt/io.hpp"
#include "omt/oracle.hpp"

namespace py = pybind11;
using namespace omt;

namespace {

// Python-side handle; trees are immutable and shared with certificates.
struct Tree {
    TreeRef ref;

    const MergeTree& tree() const { return ref->tree(); }
};

Tree wrap(OrderedMergeTree t) { return Tree{share(std::move(t))}; }

Tree from_rows(const std::vector<std::tuple<std::string, std::optional<std::string>, double>>& rows) {
    std::map<std::string, VertexId> ids;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!ids.emplace(std::get<0>(rows[i]), static_cast<VertexId>(i)).second)
            throw std::invalid_argument("duplicate vertex name " + std::get<0>(rows[i]));
    TreeSpec spec;
    for (const auto& [name, parent, height] : rows) {
        VertexId p = kNoVertex;
        if (parent) {
            auto it = ids.find(*parent);
            if (it == ids.end()) throw std::invalid_argument("unknown parent " + *parent);
            p = it->second;
        }
        spec.push_back(VertexSpec{name, p, height});
    }
    return wrap(OrderedMergeTree(MergeTree(spec)));
}

std::vector<std::tuple<std::string, std::optional<std::string>, double>> rows(const Tree& t) {
    const MergeTree& m = t.tree();
    std::vector<std::tuple<std::string, std::optional<std::string>, double>> out;
    for (VertexId v : m.preorder()) {
        std::optional<std::string> p;
        if (v != m.root()) p = m.name(m.parent(v));
        out.emplace_back(m.name(v), p, m.height(v));
    }
    return out;
}

io::CertificateKind kind_of(const std::string& kind) {
    if (kind == "interleaving") return io::CertificateKind::interleaving;
    if (kind == "goodmap") return io::CertificateKind::good_map;
    if (kind == "labelling") return io::CertificateKind::labelling;
    throw std::invalid_argument("unknown certificate kind " + kind);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Monotone interleaving distance for ordered merge trees";

    py::register_exception<io::ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<io::SemanticError>(m, "SemanticError", PyExc_ValueError);

    py::class_<Tree>(m, "Tree")
        .def_static("from_json", [](const std::string& text) { return wrap(io::parse_tree(text)); })
        .def_static("load", [](const std::string& path) { return wrap(io::read_tree(path)); })
        .def_static("from_rows", &from_rows, py::arg("rows"),
                    "Rows of (name, parent name or None, height); children keep row order.")
        .def("to_json", [](const Tree& t) { return io::serialise_tree(*t.ref); })
        .def("rows", &rows)
        .def("shifted", [](const Tree& t, double c) { return wrap(OrderedMergeTree(t.tree().shifted(c))); })
        .def_property_readonly("leaves",
                               [](const Tree& t) {
                                   std::vector<std::string> out;
                                   for (VertexId u : t.tree().leaves()) out.push_back(t.tree().name(u));
                                   return out;
                               })
        .def("curve", [](const Tree& t) { return in_order_walk(*t.ref).curve.heights(); })
        .def("__len__", [](const Tree& t) { return t.tree().size(); })
        .def("__repr__", [](const Tree& t) {
            return "<Tree with " + std::to_string(t.tree().leaves().size()) + " leaves>";
        });

    py::class_<io::Certificate>(m, "Certificate")
        .def_readonly("delta", &io::Certificate::delta)
        .def_property_readonly("tree", [](const io::Certificate& c) { return Tree{c.tree}; })
        .def_property_readonly("tree_prime", [](const io::Certificate& c) { return Tree{c.tree_prime}; })
        .def_static("from_json", [](const std::string& text) { return io::parse_certificate(text); })
        .def("to_json", &io::serialise_certificate)
        .def(
            "verify",
            [](const io::Certificate& c, const std::string& kind, std::optional<double> delta) {
                return io::verify_certificate(c, kind_of(kind), delta.value_or(c.delta));
            },
            py::arg("kind"), py::arg("delta") = py::none(),
            "None when the certificate holds, otherwise the reason it fails. kind is "
            "'interleaving', 'goodmap' or 'labelling'.");

    m.def(
        "distance", [](const Tree& a, const Tree& b) { return monotone_distance(*a.ref, *b.ref); }, py::arg("a"),
        py::arg("b"));
    m.def(
        "certificate", [](const Tree& a, const Tree& b) { return io::build_certificate(a.ref, b.ref); },
        py::arg("a"), py::arg("b"));
    m.def(
        "frechet",
        [](const std::vector<double>& p, const std::vector<double>& q) {
            return compute_frechet(Curve1D(p), Curve1D(q)).delta;
        },
        py::arg("p"), py::arg("q"), "Frechet distance of two curves given by samples with inf at both ends.");
    m.def(
        "discrete_frechet",
        [](const std::vector<double>& p, const std::vector<double>& q, double resolution) {
            return oracle::discrete_frechet_refined(Curve1D(p), Curve1D(q), resolution);
        },
        py::arg("p"), py::arg("q"), py::arg("resolution"));
    m.def(
        "min_over_orders",
        [](const Tree& a, const Tree& b, std::size_t max_leaves) {
            auto r = oracle::brute_force_min_over_orders(a.tree(), b.tree(), max_leaves);
            return py::make_tuple(r.value, wrap(r.best), wrap(r.best_prime));
        },
        py::arg("a"), py::arg("b"), py::arg("max_leaves") = 8);
    m.def(
        "partition_reduction",
        [](const std::vector<int>& x, int parts, double lambda) {
            oracle::PartitionInstance inst{x, parts, lambda};
            auto r = oracle::build_partition_reduction(inst);
            return py::make_tuple(wrap(OrderedMergeTree(r.t)), wrap(OrderedMergeTree(r.t_prime)));
        },
        py::arg("x"), py::arg("m"), py::arg("lam") = 9.0);
}
