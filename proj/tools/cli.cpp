#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "omt/io.hpp"
#include "omt/oracle.hpp"

namespace omt::cli {

namespace {

namespace fs = std::filesystem;

std::string describe(const MergeTree& t, const TreePoint& x) {
    if (x.height == t.height(x.vertex)) return t.name(x.vertex);
    return t.name(x.vertex) + "@" + io::format_number(x.height);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = std::stod(item, &used);
        if (used != item.size()) throw CLI::ValidationError("list", "bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

int cmd_validate(const std::string& path, std::ostream& out) {
    auto t = io::read_tree(path);
    out << "ok " << t.tree().leaves().size() << " leaves\n";
    return 0;
}

int cmd_distance(const std::vector<std::string>& files, const std::string& emit, const std::string& all_pairs,
                 std::ostream& out) {
    if (!all_pairs.empty()) {
        std::vector<fs::path> paths;
        for (const auto& e : fs::directory_iterator(all_pairs))
            if (e.is_regular_file() && e.path().extension() == ".json") paths.push_back(e.path());
        std::sort(paths.begin(), paths.end());
        std::vector<OrderedMergeTree> trees;
        for (const auto& p : paths) trees.push_back(io::read_tree(p));
        for (std::size_t i = 0; i < trees.size(); ++i)
            for (std::size_t j = i + 1; j < trees.size(); ++j)
                out << paths[i].filename().string() << "\t" << paths[j].filename().string() << "\t"
                    << io::format_fixed(monotone_distance(trees[i], trees[j])) << "\n";
        return 0;
    }
    if (files.size() != 2) throw CLI::ValidationError("distance", "expected two tree files");
    auto a = share(io::read_tree(files[0]));
    auto b = share(io::read_tree(files[1]));
    if (emit.empty()) {
        out << io::format_fixed(monotone_distance(*a, *b)) << "\n";
        return 0;
    }
    auto c = io::build_certificate(a, b);
    io::write_file(emit, io::serialise_certificate(c));
    out << io::format_fixed(c.delta) << "\n";
    return 0;
}

int cmd_curve(const std::string& path, const std::string& svg, std::ostream& out) {
    auto t = io::read_tree(path);
    auto c = in_order_walk(t).curve;
    out << io::curve_csv(c);
    if (!svg.empty()) io::write_file(svg, io::curve_svg(c));
    return 0;
}

int cmd_verify(const std::string& kind, const std::vector<std::string>& files, std::optional<double> delta,
               std::ostream& out, std::ostream& err) {
    io::Certificate c;
    if (files.size() == 1) {
        c = io::parse_certificate(io::read_file(files[0]));
    } else if (files.size() == 3) {
        c = io::parse_certificate(io::read_file(files[2]), share(io::read_tree(files[0])),
                                  share(io::read_tree(files[1])));
    } else {
        throw CLI::ValidationError("verify", "expected a certificate, or two trees and a certificate");
    }
    auto which = kind == "interleaving" ? io::CertificateKind::interleaving
                 : kind == "goodmap"    ? io::CertificateKind::good_map
                                        : io::CertificateKind::labelling;
    if (auto why = io::verify_certificate(c, which, delta.value_or(c.delta))) {
        err << "verification failed: " << *why << "\n";
        return 1;
    }
    out << "ok\n";
    return 0;
}

int cmd_convert(const std::string& path, const std::string& heights, std::ostream& out) {
    auto omt = io::read_tree(path);
    const MergeTree& t = omt.tree();
    out << "leaf order:";
    for (VertexId u : omt.leaf_order()) out << " " << t.name(u);
    out << "\n";
    for (double h : parse_list(heights)) {
        if (h < t.min_leaf_height()) {
            out << io::format_number(h) << ": (empty)\n";
            continue;
        }
        auto level = omt.level_set(h);
        out << io::format_number(h) << ":";
        for (std::size_t i = 0; i < level.size(); ++i) out << (i ? " < " : " ") << describe(t, level[i]);
        out << "\n";
    }
    return 0;
}

int cmd_reduce(const std::string& set, int m, double lambda, const std::string& prefix, std::ostream& out) {
    oracle::PartitionInstance inst;
    for (double v : parse_list(set)) {
        if (v != static_cast<int>(v)) throw CLI::ValidationError("--set", "values must be integers");
        inst.x.push_back(static_cast<int>(v));
    }
    inst.m = m;
    inst.lambda = lambda;
    auto [a, b] = oracle::build_partition_reduction(inst);
    io::Metadata meta{{"m", std::to_string(m)}, {"set", set}, {"lambda", io::format_number(lambda)}};
    auto ta = io::serialise_tree(OrderedMergeTree(a), meta);
    auto tb = io::serialise_tree(OrderedMergeTree(b), meta);
    if (prefix.empty()) {
        out << ta << tb;
    } else {
        io::write_file(prefix + "T.json", ta);
        io::write_file(prefix + "T_prime.json", tb);
        out << prefix << "T.json\n" << prefix << "T_prime.json\n";
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monotone interleaving distance for ordered merge trees", "omtree"};
    app.require_subcommand(1);

    std::string tree_path;
    auto* validate = app.add_subcommand("validate", "Check a tree document");
    validate->add_option("tree", tree_path)->required();

    std::vector<std::string> files;
    std::string emit, all_pairs;
    auto* distance = app.add_subcommand("distance", "Monotone interleaving distance of two trees");
    distance->add_option("trees", files);
    distance->add_option("--emit-certificate", emit, "Write a certificate bundle");
    distance->add_option("--all-pairs", all_pairs, "Distances between all .json trees in a directory");

    std::string svg;
    auto* curve = app.add_subcommand("curve", "Induced 1D curve as CSV");
    curve->add_option("tree", tree_path)->required();
    curve->add_option("--svg", svg, "Also write an SVG polyline");

    std::string kind;
    std::vector<std::string> cert_files;
    std::optional<double> delta;
    auto* verify = app.add_subcommand("verify", "Verify a certificate");
    verify->add_option("kind", kind)->required()->check(CLI::IsMember({"interleaving", "labelling", "goodmap"}));
    verify->add_option("files", cert_files)->required();
    verify->add_option("--delta", delta);

    std::string heights;
    auto* convert = app.add_subcommand("convert", "Leaf order and layer orders of a tree");
    convert->add_option("tree", tree_path)->required();
    convert->add_option("--heights", heights, "Comma separated heights");

    std::string set, prefix;
    int m = 0;
    double lambda = 9;
    auto* reduce = app.add_subcommand("reduce", "Trees of the balanced partition reduction");
    reduce->add_option("--set", set)->required();
    reduce->add_option("--m", m)->required();
    reduce->add_option("--lambda", lambda);
    reduce->add_option("--out-prefix", prefix, "Write <prefix>T.json and <prefix>T_prime.json");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate) return cmd_validate(tree_path, out);
        if (*distance) return cmd_distance(files, emit, all_pairs, out);
        if (*curve) return cmd_curve(tree_path, svg, out);
        if (*verify) return cmd_verify(kind, cert_files, delta, out, err);
        if (*convert) return cmd_convert(tree_path, heights, out);
        if (*reduce) return cmd_reduce(set, m, lambda, prefix, out);
    } catch (const CLI::ValidationError& e) {
        err << "usage: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace omt::cli
