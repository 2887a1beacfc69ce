#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "omt/interleaving.hpp"

namespace omt::io {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_, column_;
};

class SemanticError : public std::runtime_error {
public:
    SemanticError(std::string invariant, std::string vertex, const std::string& detail);
    const std::string& invariant() const noexcept { return invariant_; }
    const std::string& vertex() const noexcept { return vertex_; }

private:
    std::string invariant_, vertex_;
};

using Metadata = std::map<std::string, std::string>;

struct TreeDocument {
    OrderedMergeTree tree;
    Metadata metadata;
};

TreeDocument parse_tree_document(std::string_view text);
OrderedMergeTree parse_tree(std::string_view text);
std::string serialise_tree(const OrderedMergeTree& t, const Metadata& metadata = {});

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);
OrderedMergeTree read_tree(const std::filesystem::path& path);

// Shortest decimal that reads back to the same double; "inf" for +inf.
std::string format_number(double x);
std::string format_fixed(double x, int decimals = 9);

// Certificate bundle: both trees, delta, and any of the three certificate
// forms.
struct Certificate {
    TreeRef tree, tree_prime;
    double delta = 0;
    std::optional<std::pair<ShiftMap, ShiftMap>> interleaving;
    std::optional<ShiftMap> good_map;
    std::optional<Labelling> labelling;
};

std::string serialise_certificate(const Certificate& c);

// Distance-realising interleaving, the same map as a good map, and the
// labelling built from it.
Certificate build_certificate(const TreeRef& tree, const TreeRef& tree_prime);

enum class CertificateKind { interleaving, good_map, labelling };

// Why the chosen form fails at delta, or nothing when it holds. Throws
// std::invalid_argument when the bundle does not carry that form.
std::optional<std::string> verify_certificate(const Certificate& c, CertificateKind kind, double delta);
// Trees embedded in the document are used unless overrides are given.
Certificate parse_certificate(std::string_view text, TreeRef tree = nullptr, TreeRef tree_prime = nullptr);

std::string curve_csv(const Curve1D& c);
std::string curve_svg(const Curve1D& c);

}  // namespace omt::io
