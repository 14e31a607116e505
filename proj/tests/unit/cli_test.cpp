#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace riskorder::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "riskorder");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    fs::path dir;

    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("riskorder_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string file(const std::string& name, const std::string& text) {
        const auto p = (dir / name).string();
        std::ofstream(p) << text;
        return p;
    }
    static std::string slurp(const std::string& p) {
        std::ifstream f(p);
        return {std::istreambuf_iterator<char>(f), {}};
    }

    std::string binary_tree() {
        return file("tree.json", R"({"horizon":1,"nodes":[
            {"id":0,"parent":null,"prob":1,"price":1,"time":0},
            {"id":1,"parent":0,"prob":0.6,"price":2,"time":1},
            {"id":2,"parent":0,"prob":0.4,"price":0.5,"time":1}]})");
    }
};

TEST_F(CliTest, NoSubcommandIsInvalidInput) { EXPECT_EQ(invoke({}).code, kExitInvalidInput); }

TEST_F(CliTest, UnknownOptionIsInvalidInput) {
    EXPECT_EQ(invoke({"counterexample", "--bogus"}).code, kExitInvalidInput);
}

TEST_F(CliTest, SolveMethodsAgreeOnCompleteTree) {
    const auto tree = binary_tree();
    const auto u = file("u.json", R"({"kind":"power","p":0.9})");
    auto dp = invoke({"solve", "--tree", tree, "--utility", u});
    auto dual = invoke({"solve", "--tree", tree, "--utility", u, "--method", "dual"});
    ASSERT_EQ(dp.code, kExitOk) << dp.err;
    ASSERT_EQ(dual.code, kExitOk) << dual.err;
    const auto a = json::parse(dp.out), b = json::parse(dual.out);
    EXPECT_NEAR(a.at("value").get<double>(), b.at("value").get<double>(), 1e-9);
}

TEST_F(CliTest, SolveMissingFileIsInvalidInput) {
    const auto u = file("u.json", R"({"kind":"log"})");
    EXPECT_EQ(invoke({"solve", "--tree", (dir / "nope.json").string(), "--utility", u}).code, kExitInvalidInput);
}

TEST_F(CliTest, SolveDualOnIncompleteTreeIsComputationError) {
    const auto tree = file("tree3.json", R"({"horizon":1,"nodes":[
        {"id":0,"parent":null,"prob":1,"price":1,"time":0},
        {"id":1,"parent":0,"prob":0.3,"price":2,"time":1},
        {"id":2,"parent":0,"prob":0.3,"price":1,"time":1},
        {"id":3,"parent":0,"prob":0.4,"price":0.5,"time":1}]})");
    const auto u = file("u.json", R"({"kind":"log"})");
    auto r = invoke({"solve", "--tree", tree, "--utility", u, "--method", "dual"});
    EXPECT_EQ(r.code, kExitComputation);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, OrderCsvHeaderAndDeterminism) {
    const auto x = file("x.json", R"({"atoms":[{"x":0,"p":1}]})");
    const auto y = file("y.json", R"({"atoms":[{"x":-1,"p":0.5},{"x":1,"p":0.5}]})");
    auto a = invoke({"order", "--x", x, "--y", y, "--relation", "c", "--format", "csv"});
    auto b = invoke({"order", "--x", x, "--y", y, "--relation", "c", "--format", "csv"});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "strike,call_x,call_y,gap");
}

TEST_F(CliTest, OrderWithCoupling) {
    const auto x = file("x.json", R"({"atoms":[{"x":0,"p":1}]})");
    const auto y = file("y.json", R"({"atoms":[{"x":-1,"p":0.5},{"x":1,"p":0.5}]})");
    auto r = invoke({"order", "--x", x, "--y", y, "--relation", "c", "--coupling"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.at("verdict").at("holds").get<bool>());
    EXPECT_TRUE(j.at("coupling").is_object());

    auto rev = json::parse(invoke({"order", "--x", y, "--y", x, "--relation", "c", "--coupling"}).out);
    EXPECT_FALSE(rev.at("verdict").at("holds").get<bool>());
    EXPECT_TRUE(rev.at("coupling").is_null());
}

TEST_F(CliTest, OrderBadToleranceIsInvalidInput) {
    const auto x = file("x.json", R"({"atoms":[{"x":0,"p":1}]})");
    EXPECT_EQ(invoke({"order", "--x", x, "--y", x, "--tol", "-1"}).code, kExitInvalidInput);
}

TEST_F(CliTest, CounterexampleDefaultsFailAndBaseHolds) {
    auto r = invoke({"counterexample"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_FALSE(j.at("verdict").at("holds").get<bool>());
    EXPECT_NEAR(j.at("base_fractions").at("more").get<double>(), 0.887, 1e-3);
    EXPECT_NEAR(j.at("base_fractions").at("less").get<double>(), 1.853, 1e-3);

    auto base = json::parse(invoke({"counterexample", "--epsilon", "0"}).out);
    EXPECT_TRUE(base.at("verdict").at("holds").get<bool>());
    EXPECT_TRUE(base.at("fractions").at("more").at("inserted").is_null());
}

TEST_F(CliTest, CounterexampleExportsRoundTripThroughOrder) {
    const auto ex = (dir / "x.json").string(), ey = (dir / "y.json").string();
    ASSERT_EQ(invoke({"counterexample", "--export-x", ex, "--export-y", ey}).code, kExitOk);
    auto r = invoke({"order", "--x", ex, "--y", ey});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_FALSE(json::parse(r.out).at("verdict").at("holds").get<bool>());
}

TEST_F(CliTest, CounterexampleBadRiskAversionIsInvalidInput) {
    EXPECT_EQ(invoke({"counterexample", "--p-more", "0.3", "--p-less", "0.9"}).code, kExitInvalidInput);
}

TEST_F(CliTest, PerturbWritesValidTree) {
    const auto tree = file("tree2.json", R"({"horizon":2,"nodes":[
        {"id":0,"parent":null,"prob":1,"price":1,"time":0},
        {"id":1,"parent":0,"prob":0.5,"price":2,"time":1},
        {"id":2,"parent":0,"prob":0.5,"price":0.5,"time":1},
        {"id":3,"parent":1,"prob":1,"price":2,"time":2},
        {"id":4,"parent":2,"prob":1,"price":0.5,"time":2}]})");
    const auto out = (dir / "p.json").string();
    auto r = invoke({"perturb", "--tree", tree, "--nodes", "1", "--out", out});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = json::parse(slurp(out));
    EXPECT_EQ(j.at("nodes").size(), 8u);
    EXPECT_EQ(invoke({"perturb", "--tree", tree, "--time", "0"}).code, kExitInvalidInput);
}

TEST_F(CliTest, IidExactAndMonteCarlo) {
    const auto inc = file("inc.json", R"({"atoms":[{"x":0.1,"p":0.5},{"x":-0.08,"p":0.5}]})");
    auto exact = invoke({"iid", "--increment", inc, "--periods", "5"});
    ASSERT_EQ(exact.code, kExitOk) << exact.err;
    EXPECT_EQ(json::parse(exact.out).at("mode"), "exact");

    EXPECT_EQ(invoke({"iid", "--increment", inc, "--periods", "5", "--paths", "2000"}).code, kExitInvalidInput);

    auto mc1 = invoke({"iid", "--increment", inc, "--periods", "5", "--paths", "2000", "--seed", "7"});
    auto mc2 = invoke(
        {"iid", "--increment", inc, "--periods", "5", "--paths", "2000", "--seed", "7", "--workers", "3"});
    ASSERT_EQ(mc1.code, kExitOk) << mc1.err;
    EXPECT_EQ(mc1.out, mc2.out);
    EXPECT_EQ(json::parse(mc1.out).at("mode"), "monte_carlo");
}

TEST_F(CliTest, IidCapFallbackNeedsSeed) {
    const auto inc = file("inc.json", R"({"atoms":[{"x":0.1,"p":0.5},{"x":-0.08,"p":0.5}]})");
    EXPECT_EQ(invoke({"iid", "--increment", inc, "--periods", "40"}).code, kExitInvalidInput);
}

TEST_F(CliTest, IidOneSidedIncrementIsInvalidInput) {
    const auto inc = file("inc.json", R"({"atoms":[{"x":0.1,"p":0.5},{"x":0.2,"p":0.5}]})");
    EXPECT_EQ(invoke({"iid", "--increment", inc, "--periods", "2"}).code, kExitInvalidInput);
}

}  // namespace
}  // namespace riskorder::cli
