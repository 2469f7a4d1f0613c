#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "superhedge/io.hpp"

namespace {

struct Run
{
    int code;
    std::string out;
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(SUPERHEDGE_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return {-1, ""};
    std::string out;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;)
        out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string model(const std::string& name) { return std::string(SUPERHEDGE_MODELS_DIR) + "/" + name; }

std::filesystem::path scratch(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / "superhedge_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST(Cli, PricesTheTwoStock)
{
    auto r = run("price " + model("two_stock.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "ask: 134/3 ≈ 44.6667\nbid: 59/3 ≈ 19.6667\n");
    EXPECT_EQ(run("price " + model("two_stock.json") + " --side ask").out, "ask: 134/3 ≈ 44.6667\n");
}

TEST(Cli, OracleAgreesOnEveryBundledModel)
{
    for (auto name : {"two_stock.json", "binomial_put.json", "european_call.json", "zero_payoff.json"}) {
        auto r = run("price --oracle " + model(name));
        EXPECT_EQ(r.code, 0) << name << "\n" << r.out;
        EXPECT_EQ(r.out.find("mismatch"), std::string::npos) << r.out;
        EXPECT_NE(r.out.find("(match)"), std::string::npos) << r.out;
    }
    EXPECT_EQ(run("price " + model("european_call.json")).out, "ask: 76/9 ≈ 8.44444\nbid: 76/9 ≈ 8.44444\n");
    EXPECT_EQ(run("price " + model("zero_payoff.json")).out, "ask: 0\nbid: 0\n");
}

TEST(Cli, ExitCodes)
{
    auto arb = run("price " + model("arbitrage.json"));
    EXPECT_EQ(arb.code, 1);
    EXPECT_NE(arb.out.find("no-arbitrage"), std::string::npos);
    EXPECT_EQ(run("check-na " + model("arbitrage.json")).code, 1);
    EXPECT_EQ(run("price /nonexistent/model.json").code, 1);
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("--help").code, 0);
    EXPECT_EQ(run("price --oracle --side bid --cap 1 " + model("binomial_put.json")).code, 2);
    EXPECT_EQ(run("hedge --convention interchanged " + model("two_stock.json")).code, 1);

    auto bad = scratch("bad.json");
    std::ofstream(bad) << R"({"d": 2, "tree": [{"id": "r"}], "prices": [[1, 1]], "k": 0,
                             "payoff": {"r": [1]}, "exercise": "american"})";
    auto r = run("price " + bad.string());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("/payoff/r"), std::string::npos) << r.out;
}

TEST(Cli, CheckNaPrintsAWitness)
{
    auto r = run("check-na " + model("two_stock.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("weak no-arbitrage: holds"), std::string::npos);
    EXPECT_NE(r.out.find("w4,1/4,(72/7,132/7,1)"), std::string::npos) << r.out;
}

TEST(Cli, HedgeAndDualAreVerifiedJsonAndDeterministic)
{
    auto h = run("hedge " + model("two_stock.json"));
    ASSERT_EQ(h.code, 0);
    auto j = superhedge::json::parse(h.out);
    EXPECT_EQ(j["seller"]["price"], "134/3");
    EXPECT_EQ(j["seller"]["strategy"]["nodes"][0]["held"], superhedge::json::parse(R"(["0","0","134/3"])"));
    EXPECT_TRUE(j.contains("buyer"));
    EXPECT_EQ(run("hedge " + model("two_stock.json")).out, h.out);

    auto d = run("dual " + model("two_stock.json"));
    ASSERT_EQ(d.code, 0);
    auto dj = superhedge::json::parse(d.out);
    EXPECT_EQ(dj["seller"]["value"], "134/3");
    EXPECT_EQ(dj["buyer"]["value"], "59/3");
    EXPECT_EQ(run("dual " + model("two_stock.json")).out, d.out);

    auto out = scratch("dual.json");
    std::filesystem::remove(out);
    EXPECT_EQ(run("dual --side ask --out " + out.string() + " " + model("two_stock.json")).code, 0);
    EXPECT_EQ(superhedge::json::parse(slurp(out))["seller"]["value"], "134/3");
}

TEST(Cli, ExportSets)
{
    auto csv = run("export-sets --format csv " + model("two_stock.json"));
    ASSERT_EQ(csv.code, 0);
    EXPECT_EQ(csv.out.rfind("side,node,set,kind,coordinates\n", 0), 0u);
    EXPECT_NE(csv.out.find("ask,0,U,vertex,1,-1,33\n"), std::string::npos);

    auto js = run("export-sets --side ask " + model("two_stock.json"));
    ASSERT_EQ(js.code, 0);
    EXPECT_NE(js.out.find("\"181/7\""), std::string::npos); // a dual-section vertex
    EXPECT_NO_THROW(superhedge::json::parse(js.out));

    auto bid = run("export-sets --side bid " + model("two_stock.json"));
    ASSERT_EQ(bid.code, 0);
    EXPECT_NE(bid.out.find("\"163/2\""), std::string::npos); // a union vertex

    auto zero = run("export-sets --format csv " + model("zero_payoff.json"));
    EXPECT_NE(zero.out.find(",full-space"), std::string::npos);
    EXPECT_NE(zero.out.find(",empty"), std::string::npos);
}
