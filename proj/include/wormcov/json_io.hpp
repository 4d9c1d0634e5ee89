#pragma once

#include <string>

#include <json.hpp>

#include "wormcov/graph.hpp"

namespace wormcov {

using Json = nlohmann::ordered_json;

/// Graph file schema: {"n": int, "mode": "ferromagnetic"|"antiferromagnetic",
/// "edges": [{"u": int, "v": int, "p": int, "q": int}, ...]} with
/// beta = 1 + p/q (ferromagnetic) or beta = p/q, p < q (antiferromagnetic).
/// Integers only; no floats appear in the file.
IsingInstance graph_from_json(const Json& doc, const std::string& origin);
IsingInstance read_graph_file(const std::string& path);

Json graph_to_json(const IsingInstance& g);
void write_graph_file(const std::string& path, const IsingInstance& g);

/// {"num": "...", "den": "..."} with decimal strings.
Json rational_to_json(const Rational& value);

/// Accepts "p/q" or "p".
Rational rational_from_arg(const std::string& text);

}  // namespace wormcov
