// Command-line front end: no-arbitrage check, prices, hedges, dual
// certificates and set exports for a JSON model file.
//
// Exit codes: 0 ok, 1 domain failure (bad model, arbitrage, insufficient
// endowment), 2 resource cap exceeded, 3 internal verification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "superhedge/superhedge.hpp"

using namespace superhedge;

namespace {

enum Exit { ok = 0, domain = 1, resource = 2, verification = 3 };

struct Options
{
    std::string model;
    std::optional<std::size_t> asset; // 1-based
    std::string convention;
    std::optional<std::size_t> cap;
    std::string side = "both";
    std::string out;
    std::string format = "json";
    std::optional<std::size_t> axis; // 1-based
    bool oracle = false;
};

struct Context
{
    ModelFile file;
    std::size_t i = 0;
};

std::string show(const Rational& r)
{
    if (denominator(r) == 1)
        return to_string(r);
    return to_string(r) + " ≈ " + to_decimal(r);
}

Context load(const Options& o)
{
    Context c{load_model(o.model), 0};
    auto& opt = c.file.options;
    if (o.asset) {
        if (*o.asset < 1 || *o.asset > c.file.model.d())
            throw ParseError("--asset", "must be between 1 and " + std::to_string(c.file.model.d()));
        opt.asset = *o.asset - 1;
    }
    if (o.convention == "standard")
        opt.convention = Convention::Standard;
    else if (o.convention == "interchanged")
        opt.convention = Convention::Interchanged;
    if (o.cap)
        opt.cap = *o.cap;
    c.i = opt.asset;
    return c;
}

void emit(const Options& o, const std::string& text)
{
    if (o.out.empty() || o.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f)
        throw std::runtime_error("cannot write '" + o.out + "'");
    f << text;
}

bool wants(const Options& o, const char* side) { return o.side == "both" || o.side == side; }

/// The equivalent martingale pair from the no-arbitrage test; throws if there is none.
MartingalePair seed_pair(const Context& c)
{
    auto na = check_weak_na(c.file.model.tree, c.file.model.pi, c.i);
    if (!na.holds)
        throw ArbitrageError();
    return *na.witness;
}

int cmd_check_na(const Options& o)
{
    auto c = load(o);
    const auto& tree = c.file.model.tree;
    auto na = check_weak_na(tree, c.file.model.pi, c.i);
    if (!na.holds) {
        std::cout << "weak no-arbitrage: fails\n";
        return domain;
    }
    std::cout << "weak no-arbitrage: holds\n";
    std::cout << "smallest leaf probability: " << show(na.margin) << "\n";
    std::cout << "node,p,S\n";
    for (std::size_t n = 0; n < tree.size(); ++n)
        std::cout << tree.id(n) << ',' << to_string(na.witness->prob[n]) << ',' << to_string(na.witness->S[n])
                  << '\n';
    return ok;
}

int cmd_price(const Options& o)
{
    auto c = load(o);
    seed_pair(c);
    const auto& m = c.file.model;
    int code = ok;
    if (wants(o, "ask")) {
        auto sets = build_seller_sets(m, c.file.options.convention);
        Rational ask = ask_price(sets, c.i);
        std::cout << "ask: " << show(ask) << "\n";
        if (o.oracle) {
            if (c.file.options.convention != Convention::Standard)
                throw std::invalid_argument("the oracle covers the standard convention only");
            Rational ref = lp_ask(m, c.i);
            std::cout << "oracle ask: " << show(ref) << (ref == ask ? " (match)" : " (MISMATCH)") << "\n";
            if (ref != ask)
                code = verification;
        }
    }
    if (wants(o, "bid")) {
        auto sets = build_buyer_sets(m, c.file.options.cap);
        Rational bid = bid_price(sets, c.i);
        std::cout << "bid: " << show(bid) << "\n";
        if (o.oracle) {
            Rational ref = lp_bid(m, c.i, c.file.options.cap).value;
            std::cout << "oracle bid: " << show(ref) << (ref == bid ? " (match)" : " (MISMATCH)") << "\n";
            if (ref != bid)
                code = verification;
        }
    }
    return code;
}

int cmd_hedge(const Options& o)
{
    auto c = load(o);
    seed_pair(c);
    const auto& m = c.file.model;
    json out;
    if (wants(o, "ask")) {
        auto sets = build_seller_sets(m, c.file.options.convention);
        Rational ask = ask_price(sets, c.i);
        auto y = seller_hedge(m, sets, ask, c.i);
        if (!verify_seller_hedge(y, m))
            throw VerificationError("seller strategy failed verification");
        out["seller"] = {{"price", to_string(ask)}, {"strategy", strategy_json(m.tree, y)}};
    }
    if (wants(o, "bid")) {
        auto sets = build_buyer_sets(m, c.file.options.cap);
        Rational bid = bid_price(sets, c.i);
        auto h = buyer_hedge(m, sets, -bid * unit_vector(m.d(), c.i));
        if (!verify_buyer_hedge(h, m))
            throw VerificationError("buyer strategy failed verification");
        out["buyer"] = {{"price", to_string(bid)},
                        {"strategy", strategy_json(m.tree, h.strategy)},
                        {"stop", stopping_json(m.tree, h.tau)}};
    }
    emit(o, out.dump(2) + "\n");
    return ok;
}

int cmd_dual(const Options& o)
{
    auto c = load(o);
    const auto& m = c.file.model;
    auto seed = seed_pair(c);
    json out;
    if (wants(o, "ask")) {
        auto sets = build_seller_sets(m, c.file.options.convention);
        Rational ask = ask_price(sets, c.i);
        auto cert = seller_dual(m, sets, c.i, seed);
        if (cert.value != ask)
            throw VerificationError("seller certificate value " + to_string(cert.value) + " differs from ask " +
                                    to_string(ask));
        if (!verify_pair(m.tree, m.pi, cert.pair, cert.chi, c.i) ||
            !validate_randomised(m.tree, m.exercise, cert.chi))
            throw VerificationError("seller certificate failed verification");
        out["seller"] = certificate_json(m.tree, cert);
    }
    if (wants(o, "bid")) {
        auto sets = build_buyer_sets(m, c.file.options.cap);
        Rational bid = bid_price(sets, c.i);
        auto h = buyer_hedge(m, sets, -bid * unit_vector(m.d(), c.i));
        auto cert = buyer_dual(m, h.tau, c.i, seed);
        if (cert.value != bid)
            throw VerificationError("buyer certificate value " + to_string(cert.value) + " differs from bid " +
                                    to_string(bid));
        if (cert.chi.chi != to_randomised(h.tau).chi || !verify_pair(m.tree, m.pi, cert.pair, cert.chi, c.i))
            throw VerificationError("buyer certificate failed verification");
        out["buyer"] = certificate_json(m.tree, cert);
    }
    emit(o, out.dump(2) + "\n");
    return ok;
}

int cmd_export_sets(const Options& o)
{
    auto c = load(o);
    seed_pair(c);
    const auto& m = c.file.model;
    const auto& tree = m.tree;
    std::size_t axis = c.i;
    if (o.axis) {
        if (*o.axis < 1 || *o.axis > m.d())
            throw ParseError("--axis", "must be between 1 and " + std::to_string(m.d()));
        axis = *o.axis - 1;
    }
    const bool csv = o.format == "csv";
    std::ostringstream text;
    json out;
    if (csv)
        text << "side,node,set,kind,coordinates\n";
    if (wants(o, "ask")) {
        auto sets = build_seller_sets(m, c.file.options.convention);
        json nodes = json::array();
        for (std::size_t n = 0; n < tree.size(); ++n) {
            const std::pair<const char*, const Polyhedron*> named[] = {
                {"U", &sets.U[n]}, {"V", &sets.V[n]}, {"W", &sets.W[n]}, {"Z", &sets.Z[n]}};
            json node{{"id", tree.id(n)}};
            for (const auto& [name, p] : named) {
                auto section = dual_section_vertices(support_epigraph(*p), axis);
                if (csv) {
                    std::ostringstream rows;
                    write_csv_rows(rows, tree.id(n), name, *p);
                    std::string line;
                    for (std::istringstream in(rows.str()); std::getline(in, line);)
                        text << "ask," << line << '\n';
                    for (const auto& v : section) {
                        text << "ask," << tree.id(n) << ',' << name << ",dual-section";
                        for (const auto& x : v)
                            text << ',' << to_string(x);
                        text << '\n';
                    }
                } else {
                    node[name] = to_json(*p);
                    node[name]["dual_section"] = to_json(section);
                }
            }
            nodes.push_back(node);
        }
        out["seller"] = {{"axis", axis + 1}, {"nodes", nodes}};
    }
    if (wants(o, "bid")) {
        auto sets = build_buyer_sets(m, c.file.options.cap);
        json nodes = json::array();
        for (std::size_t n = 0; n < tree.size(); ++n) {
            PolyUnion u{m.d(), {}};
            if (sets.U[n])
                u.pieces.push_back(*sets.U[n]);
            const std::pair<const char*, const PolyUnion*> named[] = {
                {"U", &u}, {"V", &sets.V[n]}, {"W", &sets.W[n]}, {"Z", &sets.Z[n]}};
            json node{{"id", tree.id(n)}};
            for (const auto& [name, p] : named) {
                if (csv) {
                    if (p->is_empty())
                        text << "bid," << tree.id(n) << ',' << name << ",empty\n";
                    for (std::size_t k = 0; k < p->pieces.size(); ++k) {
                        std::ostringstream rows;
                        write_csv_rows(rows, tree.id(n), std::string(name) + "#" + std::to_string(k), p->pieces[k]);
                        std::string line;
                        for (std::istringstream in(rows.str()); std::getline(in, line);)
                            text << "bid," << line << '\n';
                    }
                    if (!p->is_empty())
                        for (const auto& v : union_vertices(*p)) {
                            text << "bid," << tree.id(n) << ',' << name << ",union-vertex";
                            for (const auto& x : v)
                                text << ',' << to_string(x);
                            text << '\n';
                        }
                } else {
                    node[name] = to_json(*p);
                }
            }
            nodes.push_back(node);
        }
        out["buyer"] = {{"nodes", nodes}};
    }
    emit(o, csv ? text.str() : out.dump(2) + "\n");
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bid/ask prices, hedges and dual certificates for options under transaction costs"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool sided) {
        sub->add_option("model", o.model, "model JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--asset", o.asset, "numeraire asset, 1-based (default: last)");
        sub->add_option("--convention", o.convention, "standard|interchanged")
            ->check(CLI::IsMember({"standard", "interchanged"}));
        sub->add_option("--cap", o.cap, "limit on union pieces and enumerated stopping times");
        if (sided)
            sub->add_option("--side", o.side, "ask|bid|both")->check(CLI::IsMember({"ask", "bid", "both"}));
    };

    auto* na = app.add_subcommand("check-na", "test weak no-arbitrage and print a witness pair");
    common(na, false);
    auto* price = app.add_subcommand("price", "ask and bid prices");
    common(price, true);
    price->add_flag("--oracle", o.oracle, "cross-check against the direct LP / enumeration oracle");
    auto* hedge = app.add_subcommand("hedge", "verified superhedging strategies as JSON");
    common(hedge, true);
    hedge->add_option("--out", o.out, "output file (default stdout)");
    auto* dual = app.add_subcommand("dual", "verified dual certificates as JSON");
    common(dual, true);
    dual->add_option("--out", o.out, "output file (default stdout)");
    auto* ex = app.add_subcommand("export-sets", "per-node set geometry for plotting");
    common(ex, true);
    ex->add_option("--out", o.out, "output file (default stdout)");
    ex->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    ex->add_option("--axis", o.axis, "coordinate fixed to 1 in dual sections, 1-based (default: asset)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : domain;
    }

    try {
        if (na->parsed())
            return cmd_check_na(o);
        if (price->parsed())
            return cmd_price(o);
        if (hedge->parsed())
            return cmd_hedge(o);
        if (dual->parsed())
            return cmd_dual(o);
        return cmd_export_sets(o);
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return resource;
    } catch (const VerificationError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return verification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return domain;
    }
}
