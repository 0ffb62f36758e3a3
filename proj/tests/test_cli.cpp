#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace {

struct run_result {
    int code = -1;
    std::string out;
};

run_result run(const std::string& args) {
    std::string cmd = std::string(WNEV_CLI) + " " + args + " 2>/dev/null";
    run_result r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
    std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << text;
    return path;
}

} // namespace

TEST(Cli, UnknownSuite) { EXPECT_EQ(run("verify nosuch").code, 2); }

TEST(Cli, MissingSubcommand) { EXPECT_EQ(run("").code, 2); }

TEST(Cli, Characteristic) {
    auto r = run("characteristic --model exp --rmin 10 --rmax 1000 --ppd 5");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("r,m,N,T,quadrature_error\n", 0), 0u);
}

TEST(Cli, CharacteristicNeedsEvaluator) {
    auto path = temp_file("divs.json", R"([{"re":1,"im":0,"mult":1,"kind":"pole"}])");
    EXPECT_EQ(run("characteristic --model file:" + path).code, 3);
}

TEST(Cli, BadRange) { EXPECT_EQ(run("characteristic --rmin 100 --rmax 10").code, 2); }

TEST(Cli, MalformedConfig) {
    auto path = temp_file("bad.cfg", "model exp\n");
    EXPECT_EQ(run("characteristic --config " + path).code, 2);
}

TEST(Cli, ConfigWithOverride) {
    auto path = temp_file("good.cfg", "model = exp\nrmin = 10\nrmax = 100\nppd = 5\nformat = json\n");
    auto r = run("characteristic --config " + path + " --rmax 1000");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.back().at("r").get<double>(), 1000.0, 1e-9);
}

TEST(Cli, ExpandBasis) {
    auto r = run("expand --model tau:2 --a 0.3,0.2 --K 4");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["coeffs"][2]["re"].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(j["coeffs"][1]["re"].get<double>(), 0.0, 1e-12);
}

TEST(Cli, ExpandGate) {
    auto ok = nlohmann::json::parse(run("expand --model cosh_sqrt --K 40").out);
    EXPECT_GT(ok["gate_margin"].get<double>(), 0.0);
    EXPECT_FALSE(ok.contains("warning"));
    auto bad = nlohmann::json::parse(run("expand --model cosh_pi_sqrt --K 20").out);
    EXPECT_LT(bad["gate_margin"].get<double>(), 0.0);
    EXPECT_TRUE(bad.contains("warning"));
}

TEST(Cli, Deterministic) {
    std::string args = "wilson-counts --model g_iii:2,1 --a 0 --rmin 10 --rmax 1000 --ppd 5";
    auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.rfind("r,nW,nW_tilde,NW,NW_tilde\n", 0), 0u);
}

TEST(Cli, ChainsFromData) {
    auto r = run(std::string("wilson-counts --chains --a inf --rmax 300 --model file:") + WNEV_DATA_DIR +
                 "/figure_dataset.json");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["chains"].size(), 3u);
    EXPECT_EQ(j["residual"].size(), 5u);
}
