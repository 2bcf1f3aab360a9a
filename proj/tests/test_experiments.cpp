#include "qwalk/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qwalk/errors.hpp"

using namespace qwalk;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qwalk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int qwalk(const std::string& args) const {
        const std::string cmd = std::string(QWALK_CLI_PATH) + " " + args + " > " + (dir_ / "log.txt").string() + " 2>&1";
        const int rc = std::system(cmd.c_str());
        return rc;
    }
    fs::path path(const std::string& name) const { return dir_ / name; }

    fs::path dir_;
};

RunSpec spec_for(Experiment e, const std::string& omega) {
    RunSpec s;
    s.experiment = e;
    s.omega = parse_omega_token(omega);
    return s;
}

}  // namespace

TEST(Parse, OmegaTokens) {
    auto r = parse_omega_token("2/6");
    EXPECT_EQ(r.kind, OmegaSpec::Kind::Ratio);
    EXPECT_EQ(r.value.numerator(), 1);
    EXPECT_EQ(r.value.denominator(), 3);
    EXPECT_EQ(r.text, "2/6");

    EXPECT_EQ(parse_omega_token("3").value.denominator(), 1);
    EXPECT_EQ(parse_omega_token("0.25").kind, OmegaSpec::Kind::Decimal);
    EXPECT_EQ(parse_omega_token("2pi:0.1").kind, OmegaSpec::Kind::TwoPi);
    EXPECT_NEAR(parse_omega_token("2pi:0.1").value.approx(), 0.1 / (2 * M_PI), 1e-17);
    EXPECT_EQ(parse_omega_token("markov").kind, OmegaSpec::Kind::Markov);

    for (const char* bad : {"", "1/0", "1/-3", "x", "2pi:", "0.1.2", "1/3z"}) {
        EXPECT_THROW((void)parse_omega_token(bad), ConfigurationError) << bad;
    }
}

TEST(Parse, InitialCondition) {
    const auto init = parse_init("0,0,1,0@-3");
    EXPECT_EQ(init.site, -3);
    EXPECT_EQ(init.left, Complex(0.0, 0.0));
    EXPECT_EQ(init.right, Complex(1.0, 0.0));
    EXPECT_THROW((void)parse_init("1,0,0@0"), ConfigurationError);
    EXPECT_THROW((void)parse_init("1,0,0,0"), ConfigurationError);
}

TEST(Parse, RealList) {
    EXPECT_EQ(parse_real_list("1e-4,0.5,-2"), (std::vector<double>{1e-4, 0.5, -2.0}));
    EXPECT_THROW((void)parse_real_list("1,,2"), ConfigurationError);
}

TEST(FormatReal, RoundTrips) {
    EXPECT_EQ(format_real(0.1), "0.10000000000000001");
    EXPECT_EQ(format_real(2.0), "2");
    EXPECT_EQ(format_real(std::nan("")), "nan");
    EXPECT_EQ(format_real(-INFINITY), "-inf");
    const double x = 2.052874162806681;
    EXPECT_EQ(std::stod(format_real(x)), x);
}

TEST(RunSpec, DefaultHalfWidth) {
    RunSpec s;
    s.steps = 100;
    s.init.site = -7;
    EXPECT_EQ(s.effective_half_width(), 171);
    s.half_width = 300;
    EXPECT_EQ(s.effective_half_width(), 300);
}

TEST(RunSpec, Validation) {
    RunSpec s;
    EXPECT_THROW(s.validate(), ConfigurationError);  // no omega
    s = spec_for(Experiment::Evolve, "1/3");
    s.steps = 0;
    EXPECT_THROW(s.validate(), ConfigurationError);
    s = spec_for(Experiment::VarianceScan, "1/3");
    EXPECT_THROW(s.validate(), ConfigurationError);  // no omega list
    s = spec_for(Experiment::NearResonanceScan, "1/11");
    EXPECT_THROW(s.validate(), ConfigurationError);  // no delta list
}

TEST(RunEvolve, TableShape) {
    auto s = spec_for(Experiment::Evolve, "1/9");
    s.steps = 50;
    s.stride = 10;
    s.markov_baseline = true;
    const auto out = run_evolve(s);
    EXPECT_EQ(out.table.header,
              (std::vector<std::string>{"t", "variance", "mean", "participation", "boundary_leak", "variance_markov"}));
    ASSERT_EQ(out.table.rows.size(), 5u);
    EXPECT_EQ(out.table.rows.back()[0], "50");
    EXPECT_EQ(out.table.rows.back()[5], "50");
    EXPECT_EQ(out.table.comment.rfind("# qwalk ", 0), 0u);
    EXPECT_NE(out.table.comment.find("1/9"), std::string::npos);
}

TEST(RunEvolve, MarkovVarianceIsTime) {
    auto s = spec_for(Experiment::Evolve, "0");
    s.markov = true;
    s.steps = 30;
    const auto out = run_evolve(s);
    for (const auto& row : out.table.rows) EXPECT_NEAR(std::stod(row[1]), std::stod(row[0]), 1e-12);
}

TEST(RunDistribution, OnlyOccupiedParity) {
    auto s = spec_for(Experiment::Distribution, "2pi:0.1");
    s.steps = 101;
    const auto out = run_distribution(s);
    for (const auto& row : out.table.rows) EXPECT_NE(std::stoll(row[0]) % 2, 0) << row[0];
    ASSERT_EQ(out.sidecars.size(), 1u);
    EXPECT_EQ(out.sidecars[0].first, ".fit.json");
}

TEST(RunVarianceScan, MarkovAndBallistic) {
    RunSpec s;
    s.experiment = Experiment::VarianceScan;
    s.omegas = {parse_omega_token("markov"), parse_omega_token("1")};
    s.steps = 400;
    s.fit_t_min = 100;
    const auto out = run_variance_scan(s);
    ASSERT_EQ(out.table.rows.size(), 2u);
    EXPECT_NEAR(std::stod(out.table.rows[0][1]), 1.0, 1e-9);
    EXPECT_NEAR(std::stod(out.table.rows[1][1]), 2.0, 1e-3);
}

TEST(RunAndersonCheck, TrivialRecursion) {
    auto s = spec_for(Experiment::AndersonCheck, "0");
    s.w_list = {0.0};
    const auto out = run_anderson_check(s);
    ASSERT_EQ(out.table.rows.size(), 1u);
    EXPECT_LT(std::stod(out.table.rows[0][1]), 1e-12);
    EXPECT_EQ(out.table.rows[0][4], "1");
    EXPECT_FALSE(out.had_errors);
    EXPECT_TRUE(out.sidecars.empty());
}

TEST(RunAndersonCheck, IrrationalGridClean) {
    auto s = spec_for(Experiment::AndersonCheck, "2pi:0.1");
    s.w_count = 16;
    const auto out = run_anderson_check(s);
    ASSERT_EQ(out.table.rows.size(), 16u);
    for (const auto& row : out.table.rows) {
        EXPECT_LT(std::stod(row[1]), kRecursionThreshold);
        EXPECT_LT(std::stod(row[2]), kSecondOrderThreshold);
        EXPECT_LT(std::stod(row[3]), kAndersonThreshold);
        EXPECT_EQ(row[4], "0");
    }
    EXPECT_TRUE(out.sidecars.empty());
}

TEST(RunKineticStats, SidecarHasSummary) {
    auto s = spec_for(Experiment::KineticStats, "2pi:0.1");
    const auto out = run_kinetic_stats(s);
    EXPECT_EQ(out.table.rows.size(), 1000u);
    ASSERT_EQ(out.sidecars.size(), 1u);
    EXPECT_EQ(out.sidecars[0].first, ".stats.json");
    EXPECT_NE(out.sidecars[0].second.find("\"median\""), std::string::npos);
}

TEST_F(Cli, EvolveIsByteIdentical) {
    const std::string args = "evolve --two-pi-omega 0.1 --steps 300 --out ";
    ASSERT_EQ(qwalk(args + path("a.csv").string()), 0);
    ASSERT_EQ(qwalk(args + path("b.csv").string()), 0);
    const auto a = slurp(path("a.csv"));
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(path("b.csv")));
    EXPECT_EQ(a.rfind("# qwalk ", 0), 0u);
}

TEST_F(Cli, OverflowLeavesNoOutput) {
    EXPECT_NE(qwalk("evolve --omega 1 --steps 50 --half-width 10 --out " + path("o.csv").string()), 0);
    EXPECT_FALSE(fs::exists(path("o.csv")));
    EXPECT_NE(slurp(path("log.txt")).find("overflow"), std::string::npos);
}

TEST_F(Cli, BadArgumentsFail) {
    EXPECT_NE(qwalk("evolve --omega 1/0 --out " + path("x.csv").string()), 0);
    EXPECT_NE(qwalk("evolve --omega 1/3 --omega-dec 0.3 --out " + path("x.csv").string()), 0);
    EXPECT_NE(qwalk("distribution --omega 1/3"), 0);
    EXPECT_NE(qwalk("variance-scan --omegas 1/3,bogus --out " + path("x.csv").string()), 0);
    EXPECT_FALSE(fs::exists(path("x.csv")));
}

TEST_F(Cli, AllSubcommandsRun) {
    EXPECT_EQ(qwalk("distribution --omega 1/11 --steps 200 --q 11 --out " + path("d.csv").string()), 0);
    EXPECT_TRUE(fs::exists(path("d.csv.fit.json")));
    EXPECT_EQ(qwalk("variance-scan --omegas 1,1/3,markov --steps 200 --fit-min 50 --out " + path("v.csv").string()), 0);
    EXPECT_EQ(qwalk("near-resonance-scan --omega 1/11 --delta 1e-2,1e-3 --steps 200 --out " + path("n.csv").string()),
              0);
    EXPECT_EQ(qwalk("anderson-check --two-pi-omega 0.1 --w-count 4 --out " + path("a.csv").string()), 0);
    EXPECT_EQ(qwalk("kinetic-stats --two-pi-omega 0.1 --w 0.5 --sites 200 --out " + path("k.csv").string()), 0);
    for (const char* f : {"v.csv", "n.csv", "a.csv", "k.csv"}) EXPECT_TRUE(fs::exists(path(f))) << f;
}
