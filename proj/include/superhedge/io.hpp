/**
 * JSON model files and JSON/CSV exports.
 *
 * Rationals are written as strings ("134/3", "-2", "0.25"); JSON integers
 * are accepted on input, other JSON numbers are rejected because they are
 * not exact. Per-node data is either an array in the order the tree lists
 * its nodes, or an object keyed by node id. Schema: see README.md.
 */
#ifndef SUPERHEDGE_IO_HPP
#define SUPERHEDGE_IO_HPP

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "buyer.hpp"
#include "exercise.hpp"
#include "market.hpp"
#include "seller.hpp"

namespace superhedge {

using json = nlohmann::ordered_json;

/// Model file problem; `where` is a JSON pointer or "line L, column C".
class ParseError : public std::runtime_error
{
  public:
    ParseError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where))
    {
    }
    const std::string& where() const { return where_; }

  private:
    std::string where_;
};

struct ModelOptions
{
    std::size_t asset = 0; // 0-based
    Convention convention = Convention::Standard;
    std::size_t cap = 1000000;
};

struct ModelFile
{
    Model model;
    ModelOptions options;
    std::vector<std::string> assets;
};

namespace detail {

inline std::string child_path(const std::string& path, const std::string& key)
{
    std::string k;
    for (char c : key) {
        if (c == '~')
            k += "~0";
        else if (c == '/')
            k += "~1";
        else
            k += c;
    }
    return path + "/" + k;
}

inline std::string child_path(const std::string& path, std::size_t k)
{
    return path + "/" + std::to_string(k);
}

inline const json& require(const json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object())
        throw ParseError(path.empty() ? "/" : path, "expected an object");
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(path.empty() ? "/" : path, "missing field '" + key + "'");
    return *it;
}

inline Rational rational_from(const json& j, const std::string& path)
{
    if (j.is_number_integer())
        return Rational(j.get<long long>());
    if (j.is_number())
        throw ParseError(path, "inexact number; write it as a string such as \"1/6\" or \"0.25\"");
    if (!j.is_string())
        throw ParseError(path, "expected a rational");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(path, e.what());
    }
}

inline Vec vector_from(const json& j, std::size_t d, const std::string& path)
{
    if (!j.is_array())
        throw ParseError(path, "expected an array of " + std::to_string(d) + " rationals");
    if (j.size() != d)
        throw ParseError(path, "expected " + std::to_string(d) + " entries, got " + std::to_string(j.size()));
    Vec v;
    for (std::size_t k = 0; k < d; ++k)
        v.push_back(rational_from(j[k], child_path(path, k)));
    return v;
}

inline Matrix matrix_from(const json& j, std::size_t d, const std::string& path)
{
    if (!j.is_array() || j.size() != d)
        throw ParseError(path, "expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
    Matrix m;
    for (std::size_t r = 0; r < d; ++r)
        m.push_back(vector_from(j[r], d, child_path(path, r)));
    return m;
}

inline std::size_t size_from(const json& j, const std::string& path)
{
    if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<long long>() < 0))
        throw ParseError(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

/// Per-node values: array in listing order or object keyed by id.
template <typename T, typename F>
std::vector<T> per_node(const json& j, const EventTree& tree, const std::vector<std::string>& listing,
                        const std::string& path, F parse)
{
    std::vector<std::optional<T>> out(tree.size());
    if (j.is_array()) {
        if (j.size() != listing.size())
            throw ParseError(path, "expected " + std::to_string(listing.size()) + " entries (one per node), got " +
                                       std::to_string(j.size()));
        for (std::size_t k = 0; k < j.size(); ++k)
            out[tree.index_of(listing[k])] = parse(j[k], child_path(path, k));
    } else if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            std::size_t n;
            try {
                n = tree.index_of(it.key());
            } catch (const ModelError&) {
                throw ParseError(child_path(path, it.key()), "unknown node id");
            }
            out[n] = parse(it.value(), child_path(path, it.key()));
        }
        for (std::size_t n = 0; n < tree.size(); ++n)
            if (!out[n])
                throw ParseError(path, "no entry for node '" + tree.id(n) + "'");
    } else {
        throw ParseError(path, "expected an array or an object keyed by node id");
    }
    std::vector<T> v;
    for (auto& o : out)
        v.push_back(std::move(*o));
    return v;
}

inline ExercisePolicy policy_from(const json& j, const EventTree& tree, const std::vector<std::string>& listing,
                                  const std::string& path)
{
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "american")
            return make_american(tree);
        if (s == "european")
            return make_european(tree);
        throw ParseError(path, "unknown policy '" + s + "' (american, european, or an object)");
    }
    if (j.is_array())
        return {per_node<bool>(j, tree, listing, path, [](const json& v, const std::string& p) {
            if (!v.is_boolean())
                throw ParseError(p, "expected true or false");
            return v.get<bool>();
        })};
    if (!j.is_object() || j.size() != 1)
        throw ParseError(path, "expected \"american\", \"european\", an array of booleans, or one of "
                               "{\"bermudan\": [dates]}, {\"expiry\": [node ids]}, {\"nodes\": [node ids]}");
    auto ids = [&](const json& v, const std::string& p) {
        if (!v.is_array())
            throw ParseError(p, "expected an array of node ids");
        std::vector<bool> mark(tree.size(), false);
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!v[k].is_string())
                throw ParseError(child_path(p, k), "expected a node id");
            try {
                mark[tree.index_of(v[k].get<std::string>())] = true;
            } catch (const ModelError& e) {
                throw ParseError(child_path(p, k), e.what());
            }
        }
        return mark;
    };
    const auto& [key, v] = *j.items().begin();
    const std::string p = child_path(path, key);
    if (key == "bermudan") {
        if (!v.is_array())
            throw ParseError(p, "expected an array of dates");
        std::vector<std::size_t> dates;
        for (std::size_t k = 0; k < v.size(); ++k)
            dates.push_back(size_from(v[k], child_path(p, k)));
        try {
            return make_bermudan(tree, dates);
        } catch (const std::invalid_argument& e) {
            throw ParseError(p, e.what());
        }
    }
    if (key == "expiry") {
        try {
            return make_random_expiry(tree, {ids(v, p)});
        } catch (const std::invalid_argument& e) {
            throw ParseError(p, e.what());
        }
    }
    if (key == "nodes")
        return {ids(v, p)};
    throw ParseError(p, "unknown policy kind");
}

} // namespace detail

/// Builds a model from parsed JSON; every failure names the offending field.
inline ModelFile parse_model(const json& j)
{
    using namespace detail;
    ModelFile f;
    const std::size_t d = size_from(require(j, "d", ""), "/d");
    if (d < 1)
        throw ParseError("/d", "need at least one asset");

    if (auto it = j.find("assets"); it != j.end()) {
        if (!it->is_array() || it->size() != d)
            throw ParseError("/assets", "expected " + std::to_string(d) + " asset names");
        for (std::size_t k = 0; k < d; ++k) {
            if (!(*it)[k].is_string())
                throw ParseError(child_path("/assets", k), "expected a name");
            f.assets.push_back((*it)[k].get<std::string>());
        }
    }

    const json& jt = require(j, "tree", "");
    if (!jt.is_array() || jt.empty())
        throw ParseError("/tree", "expected a nonempty array of nodes");
    std::vector<NodeSpec> specs;
    std::vector<std::string> listing;
    for (std::size_t k = 0; k < jt.size(); ++k) {
        const std::string p = child_path("/tree", k);
        const json& node = jt[k];
        const json& id = require(node, "id", p);
        if (!id.is_string())
            throw ParseError(child_path(p, "id"), "expected a string");
        NodeSpec s{id.get<std::string>(), std::nullopt, 1};
        if (auto it = node.find("parent"); it != node.end() && !it->is_null()) {
            if (!it->is_string())
                throw ParseError(child_path(p, "parent"), "expected a node id or null");
            s.parent = it->get<std::string>();
        }
        if (auto it = node.find("q"); it != node.end())
            s.weight = rational_from(*it, child_path(p, "q"));
        listing.push_back(s.id);
        specs.push_back(std::move(s));
    }
    try {
        f.model.tree = EventTree::from_specs(specs);
    } catch (const ModelError& e) {
        throw ParseError("/tree", e.what());
    }
    const auto& tree = f.model.tree;

    f.model.pi.d = d;
    auto pi_it = j.find("pi");
    auto pr_it = j.find("prices");
    if ((pi_it == j.end()) == (pr_it == j.end()))
        throw ParseError("/", "give exactly one of 'pi' (exchange rate matrices) or 'prices' with 'k'");
    if (pi_it != j.end()) {
        f.model.pi.pi = per_node<Matrix>(*pi_it, tree, listing, "/pi",
                                         [d](const json& v, const std::string& p) { return matrix_from(v, d, p); });
        for (std::size_t n = 0; n < tree.size(); ++n) {
            try {
                validate_rates(f.model.pi.pi[n], d);
            } catch (const ModelError& e) {
                throw ParseError("/pi/" + tree.id(n), e.what());
            }
        }
    } else {
        auto prices = per_node<Vec>(*pr_it, tree, listing, "/prices",
                                    [d](const json& v, const std::string& p) { return vector_from(v, d, p); });
        Rational k = rational_from(require(j, "k", ""), "/k");
        if (k < 0)
            throw ParseError("/k", "transaction cost rate must be nonnegative");
        for (std::size_t n = 0; n < tree.size(); ++n) {
            for (std::size_t a = 0; a < d; ++a)
                if (prices[n][a] <= 0)
                    throw ParseError("/prices/" + tree.id(n), "prices must be positive");
            f.model.pi.pi.push_back(frictionless_to_pi(prices[n], k));
        }
    }

    f.model.xi = per_node<Vec>(require(j, "payoff", ""), tree, listing, "/payoff",
                               [d](const json& v, const std::string& p) { return vector_from(v, d, p); });
    f.model.exercise = policy_from(require(j, "exercise", ""), tree, listing, "/exercise");
    auto issues = validate_policy(tree, f.model.exercise);
    if (!issues.empty())
        throw ParseError("/exercise", issues.front());

    f.options.asset = d - 1;
    if (auto it = j.find("options"); it != j.end()) {
        if (!it->is_object())
            throw ParseError("/options", "expected an object");
        if (auto a = it->find("asset"); a != it->end()) {
            std::size_t i = size_from(*a, "/options/asset");
            if (i < 1 || i > d)
                throw ParseError("/options/asset", "asset index must be between 1 and " + std::to_string(d));
            f.options.asset = i - 1;
        }
        if (auto c = it->find("convention"); c != it->end()) {
            std::string s = c->is_string() ? c->get<std::string>() : "";
            if (s == "standard")
                f.options.convention = Convention::Standard;
            else if (s == "interchanged")
                f.options.convention = Convention::Interchanged;
            else
                throw ParseError("/options/convention", "expected \"standard\" or \"interchanged\"");
        }
        if (auto c = it->find("cap"); c != it->end())
            f.options.cap = size_from(*c, "/options/cap");
    }
    return f;
}

/// Parses model text; JSON syntax errors are located by line and column.
inline ModelFile parse_model_text(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        if (auto p = what.find("syntax error"); p != std::string::npos)
            what = what.substr(p);
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col), what);
    }
    return parse_model(j);
}

inline ModelFile load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_model_text(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
    }
}

// ---- exports ----

inline json to_json(const Rational& r) { return to_string(r); }

inline json to_json(const Vec& v)
{
    json a = json::array();
    for (const auto& x : v)
        a.push_back(to_string(x));
    return a;
}

inline json to_json(const std::vector<Vec>& vs)
{
    json a = json::array();
    for (const auto& v : vs)
        a.push_back(to_json(v));
    return a;
}

/// "empty", "full-space", or the vertices, rays, lines and facets.
inline json to_json(const Polyhedron& p)
{
    json j;
    j["dim"] = p.dim();
    if (p.is_empty()) {
        j["kind"] = "empty";
        return j;
    }
    if (p.is_full()) {
        j["kind"] = "full-space";
        return j;
    }
    j["kind"] = "polyhedron";
    j["vertices"] = to_json(p.vertices());
    j["rays"] = to_json(p.rays());
    j["lines"] = to_json(p.lines());
    json facets = json::array();
    for (const auto& h : p.hrep())
        facets.push_back({{"normal", to_json(h.normal)}, {"offset", to_string(h.offset)}});
    j["facets"] = facets;
    return j;
}

inline json to_json(const PolyUnion& u)
{
    json j;
    j["dim"] = u.dim;
    if (u.is_empty()) {
        j["kind"] = "empty";
        return j;
    }
    j["kind"] = "union";
    json pieces = json::array();
    for (const auto& p : u.pieces)
        pieces.push_back(to_json(p));
    j["pieces"] = pieces;
    j["vertices"] = to_json(union_vertices(u));
    return j;
}

inline json strategy_json(const EventTree& tree, const Strategy& y)
{
    json nodes = json::array();
    for (std::size_t n = 0; n < tree.size(); ++n)
        nodes.push_back({{"id", tree.id(n)},
                         {"time", tree.time(n)},
                         {"held", to_json(y.holding(tree, n))},
                         {"next", to_json(y.out[n])}});
    return {{"nodes", nodes}};
}

inline json stopping_json(const EventTree& tree, const StoppingTime& tau)
{
    json ids = json::array();
    for (std::size_t n = 0; n < tree.size(); ++n)
        if (tau.stop[n])
            ids.push_back(tree.id(n));
    return ids;
}

inline json certificate_json(const EventTree& tree, const DualCertificate& c)
{
    json nodes = json::array();
    for (std::size_t n = 0; n < tree.size(); ++n)
        nodes.push_back({{"id", tree.id(n)},
                         {"time", tree.time(n)},
                         {"chi", to_string(c.chi.chi[n])},
                         {"p", to_string(c.pair.prob[n])},
                         {"S", to_json(c.pair.S[n])}});
    return {{"value", to_string(c.value)}, {"nodes", nodes}};
}

/// One CSV row per generator: node,set,kind,coordinates...
inline void write_csv_rows(std::ostream& os, const std::string& node, const std::string& set, const Polyhedron& p)
{
    if (p.is_empty()) {
        os << node << ',' << set << ",empty\n";
        return;
    }
    if (p.is_full()) {
        os << node << ',' << set << ",full-space\n";
        return;
    }
    auto rows = [&](const char* kind, const std::vector<Vec>& vs) {
        for (const auto& v : vs) {
            os << node << ',' << set << ',' << kind;
            for (const auto& x : v)
                os << ',' << to_string(x);
            os << '\n';
        }
    };
    rows("vertex", p.vertices());
    rows("ray", p.rays());
    rows("line", p.lines());
}

} // namespace superhedge

#endif // SUPERHEDGE_IO_HPP
