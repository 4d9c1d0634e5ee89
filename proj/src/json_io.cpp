#include "wormcov/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace wormcov {

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw std::invalid_argument(origin + ": " + what);
}

long get_integer(const Json& obj, const char* field, const std::string& origin) {
    if (!obj.contains(field)) fail(origin, std::string("missing field '") + field + "'");
    const Json& v = obj.at(field);
    if (!v.is_number_integer()) fail(origin, std::string("field '") + field + "' must be an integer");
    return v.get<long>();
}

}  // namespace

IsingInstance graph_from_json(const Json& doc, const std::string& origin) {
    if (!doc.is_object()) fail(origin, "top level must be an object");
    const long n = get_integer(doc, "n", origin);
    if (n < 0) fail(origin, "'n' must be non-negative");
    if (!doc.contains("mode") || !doc.at("mode").is_string())
        fail(origin, "missing string field 'mode'");
    const std::string mode_name = doc.at("mode").get<std::string>();
    Mode mode;
    if (mode_name == "ferromagnetic")
        mode = Mode::ferromagnetic;
    else if (mode_name == "antiferromagnetic")
        mode = Mode::antiferromagnetic;
    else
        fail(origin, "'mode' must be 'ferromagnetic' or 'antiferromagnetic'");
    if (!doc.contains("edges") || !doc.at("edges").is_array())
        fail(origin, "missing array field 'edges'");

    std::vector<Edge> edges;
    std::vector<Rational> beta;
    size_t index = 0;
    for (const Json& e : doc.at("edges")) {
        const std::string where = origin + ", edges[" + std::to_string(index) + "]";
        if (!e.is_object()) fail(where, "edge entries must be objects");
        const long u = get_integer(e, "u", where);
        const long v = get_integer(e, "v", where);
        const long p = get_integer(e, "p", where);
        const long q = get_integer(e, "q", where);
        if (p <= 0 || q <= 0) fail(where, "'p' and 'q' must be positive");
        edges.push_back(Edge{static_cast<Vertex>(u), static_cast<Vertex>(v)});
        if (mode == Mode::ferromagnetic)
            beta.push_back(Rational(1) + Rational(p, q));
        else
            beta.push_back(Rational(p, q));
        ++index;
    }
    try {
        return IsingInstance(static_cast<int>(n), mode, std::move(edges), std::move(beta));
    } catch (const std::invalid_argument& err) {
        fail(origin, err.what());
    }
}

IsingInstance read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("graph file " + path + ": cannot open");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw std::invalid_argument("graph file " + path + ": " + err.what());
    }
    return graph_from_json(doc, "graph file " + path);
}

Json graph_to_json(const IsingInstance& g) {
    Json edges = Json::array();
    for (int i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edge(i);
        const Rational& b = g.beta(i);
        const Rational frac = g.mode() == Mode::ferromagnetic ? b - Rational(1) : b;
        Json entry;
        entry["u"] = e.u;
        entry["v"] = e.v;
        entry["p"] = std::stol(frac.num().get_str());
        entry["q"] = std::stol(frac.den().get_str());
        edges.push_back(std::move(entry));
    }
    Json doc;
    doc["n"] = g.vertex_count();
    doc["mode"] = g.mode() == Mode::ferromagnetic ? "ferromagnetic" : "antiferromagnetic";
    doc["edges"] = std::move(edges);
    return doc;
}

void write_graph_file(const std::string& path, const IsingInstance& g) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("graph file " + path + ": cannot open for writing");
    out << graph_to_json(g).dump(2) << "\n";
}

Json rational_to_json(const Rational& value) {
    Json obj;
    obj["num"] = value.num().get_str();
    obj["den"] = value.den().get_str();
    return obj;
}

Rational rational_from_arg(const std::string& text) {
    try {
        return Rational::parse(text);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("cannot parse rational '" + text + "' (use p or p/q)");
    }
}

}  // namespace wormcov
