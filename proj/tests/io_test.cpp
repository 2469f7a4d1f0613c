#include <gtest/gtest.h>

#include <sstream>

#include "random_models.hpp"
#include "superhedge/io.hpp"

using namespace superhedge;

namespace {

const char* base = R"({
  "d": 2,
  "tree": [{"id": "r"}, {"id": "u", "parent": "r"}, {"id": "d", "parent": "r"}],
  "prices": [[10, 1], [12, 1], [9, 1]],
  "k": "1/50",
  "payoff": {"r": [0, 0], "u": [-1, 11], "d": [-1, 11]},
  "exercise": "american"
})";

json base_json() { return json::parse(base); }

std::string where_of(const json& j)
{
    try {
        parse_model(j);
    } catch (const ParseError& e) {
        return e.where();
    }
    return "no error";
}

} // namespace

TEST(ParseModel, ModelFileMatchesTheFixture)
{
    auto f = load_model(std::string(SUPERHEDGE_MODELS_DIR) + "/two_stock.json");
    auto m = fixtures::two_stock();
    ASSERT_EQ(f.model.tree.size(), m.tree.size());
    EXPECT_EQ(f.model.pi.pi, m.pi.pi);
    EXPECT_EQ(f.model.xi, m.xi);
    EXPECT_EQ(f.model.exercise.allowed, m.exercise.allowed);
    EXPECT_EQ(f.options.asset, 2u);
    EXPECT_EQ(f.assets, (std::vector<std::string>{"stock1", "stock2", "cash"}));
}

TEST(ParseModel, ExplicitRatesAndKeyedValues)
{
    auto j = base_json();
    j.erase("prices");
    j.erase("k");
    j["pi"] = {{"r", {{1, "1/10"}, {10, 1}}}, {"u", {{1, "1/12"}, {12, 1}}}, {"d", {{1, "1/9"}, {9, 1}}}};
    j["options"] = {{"asset", 1}, {"convention", "interchanged"}, {"cap", 50}};
    auto f = parse_model(j);
    EXPECT_EQ(f.model.pi.at(0)[0][1], Rational(1, 10));
    EXPECT_EQ(f.options.asset, 0u);
    EXPECT_EQ(f.options.convention, Convention::Interchanged);
    EXPECT_EQ(f.options.cap, 50u);
    auto g = parse_model(base_json());
    EXPECT_EQ(g.model.pi.at(1)[1][0], Rational(12) * Rational(51, 50));
    EXPECT_EQ(g.options.asset, 1u);
    EXPECT_EQ(g.model.xi[2], (Vec{-1, 11}));
}

TEST(ParseModel, PolicyForms)
{
    auto j = base_json();
    j["exercise"] = "european";
    EXPECT_EQ(parse_model(j).model.exercise.allowed, (std::vector<bool>{false, true, true}));
    j["exercise"] = {{"bermudan", {0}}};
    EXPECT_EQ(parse_model(j).model.exercise.allowed, (std::vector<bool>{true, false, false}));
    j["exercise"] = {true, false, false};
    EXPECT_EQ(parse_model(j).model.exercise.allowed, (std::vector<bool>{true, false, false}));
    j["exercise"] = {{"expiry", {"u", "d"}}};
    EXPECT_EQ(parse_model(j).model.exercise.allowed, (std::vector<bool>{true, true, true}));
    j["exercise"] = {{"nodes", {"r", "u", "d"}}};
    EXPECT_EQ(parse_model(j).model.exercise.allowed, (std::vector<bool>{true, true, true}));
}

TEST(ParseModel, ErrorsNameTheField)
{
    auto j = base_json();
    j.erase("d");
    EXPECT_EQ(where_of(j), "/");

    j = base_json();
    j["payoff"]["u"] = {1, 2, 3};
    EXPECT_EQ(where_of(j), "/payoff/u");

    j = base_json();
    j["payoff"]["zz"] = {1, 2};
    EXPECT_EQ(where_of(j), "/payoff/zz");

    j = base_json();
    j["payoff"].erase("d");
    EXPECT_EQ(where_of(j), "/payoff");

    j = base_json();
    j["k"] = 0.02;
    EXPECT_EQ(where_of(j), "/k");

    j = base_json();
    j["k"] = "1/0";
    EXPECT_EQ(where_of(j), "/k");

    j = base_json();
    j["prices"][2][0] = 0;
    EXPECT_EQ(where_of(j), "/prices/d");

    j = base_json();
    j["prices"][1] = {12};
    EXPECT_EQ(where_of(j), "/prices/1");

    j = base_json();
    j["tree"][2]["parent"] = "x";
    EXPECT_EQ(where_of(j), "/tree");

    j = base_json();
    j["pi"] = json::array();
    EXPECT_EQ(where_of(j), "/");

    j = base_json();
    j["exercise"] = {{"bermudan", {5}}};
    EXPECT_EQ(where_of(j), "/exercise/bermudan");

    j = base_json();
    j["exercise"] = {{"bermudan", {-1}}};
    EXPECT_EQ(where_of(j), "/exercise/bermudan/0");

    j = base_json();
    j["exercise"] = {{"nodes", {"u"}}};
    EXPECT_EQ(where_of(j), "/exercise");

    j = base_json();
    j["exercise"] = "sometimes";
    EXPECT_EQ(where_of(j), "/exercise");

    j = base_json();
    j["options"] = {{"asset", 3}};
    EXPECT_EQ(where_of(j), "/options/asset");
}

TEST(ParseModel, SyntaxErrorsHaveLineAndColumn)
{
    try {
        parse_model_text("{\n  \"d\": 2,\n  \"tree\": [,]\n}");
        FAIL() << "no error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.where(), "line 3, column 12");
    }
    EXPECT_THROW(load_model("/nonexistent/model.json"), ParseError);
}

TEST(Export, PolyhedronKinds)
{
    EXPECT_EQ(to_json(Polyhedron::empty(2))["kind"], "empty");
    EXPECT_EQ(to_json(Polyhedron::full(2))["kind"], "full-space");
    auto j = to_json(Polyhedron::from_vrep(2, {{0, 0}}, {{1, 0}, {0, 1}}));
    EXPECT_EQ(j["kind"], "polyhedron");
    EXPECT_EQ(j["vertices"], json::parse(R"([["0","0"]])"));
    EXPECT_EQ(j["rays"].size(), 2u);
    EXPECT_EQ(j["facets"].size(), 2u);

    std::ostringstream csv;
    write_csv_rows(csv, "r", "Z", Polyhedron::from_vrep(2, {{Rational(1, 2), 0}}, {{1, 0}}));
    write_csv_rows(csv, "u", "U", Polyhedron::empty(2));
    write_csv_rows(csv, "d", "W", Polyhedron::full(2));
    EXPECT_EQ(csv.str(), "r,Z,vertex,1/2,0\nr,Z,ray,1,0\nu,U,empty\nd,W,full-space\n");
}

TEST(Export, UnionAndCertificate)
{
    auto m = fixtures::two_stock();
    auto b = build_buyer_sets(m);
    auto j = to_json(b.Z[0]);
    EXPECT_EQ(j["kind"], "union");
    EXPECT_EQ(j["pieces"].size(), b.Z[0].pieces.size());
    EXPECT_EQ(j["vertices"].size(), 8u);

    auto s = build_seller_sets(m);
    auto c = seller_dual(m, s, 2, *check_weak_na(m.tree, m.pi, 2).witness);
    auto cj = certificate_json(m.tree, c);
    EXPECT_EQ(cj["value"], "134/3");
    ASSERT_EQ(cj["nodes"].size(), 5u);
    EXPECT_EQ(cj["nodes"][0]["p"], "1");
    EXPECT_EQ(cj["nodes"][0]["S"].size(), 3u);

    auto y = seller_hedge(m, s, Rational(134, 3), 2);
    auto sj = strategy_json(m.tree, y);
    EXPECT_EQ(sj["nodes"][0]["held"], json::parse(R"(["0","0","134/3"])"));
    EXPECT_EQ(stopping_json(m.tree, enumerate_stopping_times(m.tree, m.exercise).front()), json::parse(R"(["0"])"));
}
