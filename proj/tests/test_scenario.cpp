#include "ghzpurify/scenario.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace ghzpurify;

namespace {

std::string temp_path(const std::string& name) {
    return testing::TempDir() + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Config, FileParsingWithComments) {
    std::string path = temp_path("scenario.cfg");
    {
        std::ofstream out(path);
        out << "# scenario\n"
            << "protocol = conventional\n"
            << "n = 3\n"
            << "engines = analytic,enumerate\n"
            << "f = 0.7, 0.1, 0.1, 0.1\n"
            << "trials = 5000   # inline comment\n"
            << "seed = 9\n";
    }
    auto cfg = ScenarioConfig::from_file(path);
    EXPECT_EQ(cfg.protocol, "conventional");
    EXPECT_EQ(cfg.n, 3);
    EXPECT_EQ(cfg.trials, 5000u);
    ASSERT_TRUE(cfg.f_vec);
    EXPECT_EQ(cfg.f_vec->at(0), Rational(7, 10));
    EXPECT_EQ(cfg.input_ensemble().fidelity(), Rational(7, 10));
}

TEST(Config, DiagnosticsCarryLineNumbers) {
    std::string path = temp_path("bad.cfg");
    {
        std::ofstream out(path);
        out << "protocol = conventional\n"
            << "bogus_line_without_equals\n";
    }
    try {
        ScenarioConfig::from_file(path);
        FAIL() << "expected parse failure";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos);
    }
    {
        std::ofstream out(path);
        out << "unknown_key = 1\n";
    }
    try {
        ScenarioConfig::from_file(path);
        FAIL() << "expected parse failure";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("unknown_key"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find(":1"), std::string::npos);
    }
}

TEST(Config, ValidationRules) {
    ScenarioConfig cfg;
    cfg.engines.clear();
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    ScenarioConfig sweepy;
    sweepy.sweep = SweepSpec{};
    sweepy.f_vec = std::vector<Rational>{1, 0, 0, 0};
    EXPECT_THROW(sweepy.validate(), std::invalid_argument);
}

TEST(Config, EnsembleFileInput) {
    std::string path = temp_path("input.ens");
    {
        std::ofstream out(path);
        GhzDiagonalEnsemble e(3);
        e.set_weight(GhzLabel(3, 0, Sign::plus), Rational(4, 5));
        e.set_weight(GhzLabel(3, 2, Sign::plus), Rational(1, 5));
        write_ensemble(out, e);
    }
    ScenarioConfig cfg;
    cfg.ensemble_file = path;
    auto e = cfg.input_ensemble();
    EXPECT_EQ(e.fidelity(), Rational(4, 5));
    EXPECT_EQ(e.weight(GhzLabel(3, 2, Sign::plus)), Rational(1, 5));
}

TEST(Curves, GridAndSpotValues) {
    SweepSpec sweep{Rational(1, 4), Rational(1), 16};
    auto grid = sweep.grid();
    ASSERT_EQ(grid.size(), 16u);
    EXPECT_EQ(grid.front(), Rational(1, 4));
    EXPECT_EQ(grid[5], Rational(1, 2));
    EXPECT_EQ(grid.back(), Rational(1));
    std::string csv = curves_csv(grid);
    EXPECT_NE(csv.find("F0,Y_c,Y_2to3,Y_e,F_c,F_2,F_2to3,F_e\n"), std::string::npos);
    EXPECT_NE(csv.find("0.500000000000,0.333333333333"), std::string::npos);
    EXPECT_NE(csv.find(",0.666666666667,"), std::string::npos);
    EXPECT_NE(csv.find(",0.656250000000\n"), std::string::npos);
}

TEST(Curves, CommandWritesDeterministicFile) {
    ScenarioConfig cfg;
    cfg.sweep = SweepSpec{Rational(1, 4), Rational(1), 16};
    cfg.out = temp_path("curves_a.csv");
    ASSERT_EQ(cmd_curves(cfg), 0);
    std::string first = slurp(cfg.out);
    cfg.out = temp_path("curves_b.csv");
    ASSERT_EQ(cmd_curves(cfg), 0);
    EXPECT_EQ(first, slurp(cfg.out));
    EXPECT_FALSE(first.empty());
}

TEST(Curves, ErrorsReported) {
    ScenarioConfig cfg; // no sweep
    std::ostringstream err;
    cfg.out = temp_path("x.csv");
    EXPECT_EQ(cmd_curves(cfg, err), 1);
    EXPECT_NE(err.str().find("sweep"), std::string::npos);
    ScenarioConfig bad;
    bad.sweep = SweepSpec{};
    bad.out = "/nonexistent-dir/x.csv";
    std::ostringstream err2;
    EXPECT_EQ(cmd_curves(bad, err2), 1);
}

TEST(Run, EnginesAgreeAndExitZero) {
    ScenarioConfig cfg;
    cfg.protocol = "conventional";
    cfg.f_vec = std::vector<Rational>{Rational(7, 10), Rational(1, 10), Rational(1, 10),
                                      Rational(1, 10)};
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run(cfg, out, err), 0);
    EXPECT_NE(out.str().find("yield=13/25"), std::string::npos);
    EXPECT_NE(out.str().find("F[ABC:00:+]=49/52"), std::string::npos);
    EXPECT_NE(out.str().find("cross-check: analytic == enumerate"), std::string::npos);
}

TEST(Run, AllProtocolsCrossCheck) {
    for (const char* protocol : {"recycling", "link", "phaseflip", "full-mepp"}) {
        ScenarioConfig cfg;
        cfg.protocol = protocol;
        cfg.f0 = Rational(7, 10);
        cfg.p0 = Rational(4, 5);
        std::ostringstream out, err;
        EXPECT_EQ(cmd_run(cfg, out, err), 0) << protocol << ": " << err.str();
    }
}

TEST(Run, CrossEngineGateHoldsOnAcceptanceGrid) {
    // Exit status zero certifies exact analytic/enumeration agreement on the
    // whole comparison grid.
    for (int k = 5; k <= 20; k += 3) {
        for (const char* protocol : {"conventional", "full-mepp"}) {
            ScenarioConfig cfg;
            cfg.protocol = protocol;
            cfg.f0 = Rational(k, 20);
            std::ostringstream out, err;
            EXPECT_EQ(cmd_run(cfg, out, err), 0)
                << protocol << " F0=" << k << "/20: " << err.str();
        }
    }
}

TEST(Run, MalformedInputExitsNonzero) {
    ScenarioConfig cfg;
    cfg.protocol = "conventional";
    cfg.f_vec = std::vector<Rational>{Rational(2, 5), Rational(3, 10), Rational(1, 5), Rational(0)};
    std::ostringstream out, err;
    // sums to 0.9
    cfg.f_vec->back() = Rational(0);
    EXPECT_EQ(cmd_run(cfg, out, err), 1);
    EXPECT_NE(err.str().find("normalized"), std::string::npos);
}

TEST(Run, MonteCarloGate) {
    ScenarioConfig cfg;
    cfg.protocol = "link";
    cfg.pair_f0 = Rational(7, 8);
    cfg.engines = {"analytic", "montecarlo"};
    cfg.trials = 20000;
    cfg.seed = 31;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run(cfg, out, err), 0) << err.str();
    EXPECT_NE(out.str().find("cross-check: montecarlo within 4 sigma"), std::string::npos);
}

TEST(Explain, BranchDumpSumsToOne) {
    ScenarioConfig cfg;
    cfg.protocol = "conventional";
    cfg.f0 = Rational(1);
    std::ostringstream out, err;
    EXPECT_EQ(cmd_explain(cfg, out, err), 0);
    EXPECT_NE(out.str().find("pattern=EEE"), std::string::npos);
    EXPECT_NE(out.str().find("total_probability=1"), std::string::npos);
    EXPECT_NE(out.str().find("final=ABC:00:+"), std::string::npos);
}

TEST(Explain, RecyclingShowsOmegaPathQuarter) {
    // A half/half Phi_0 / Phi_2 mixture: the (odd, even, odd) pattern carries
    // total probability 1/4 and every one of its branches survives as an AC
    // pair.
    ScenarioConfig cfg;
    cfg.protocol = "recycling";
    cfg.f_vec = std::vector<Rational>{Rational(1, 2), Rational(0), Rational(1, 2), Rational(0)};
    std::ostringstream out, err;
    ASSERT_EQ(cmd_explain(cfg, out, err), 0) << err.str();
    Rational omega_path = 0;
    std::istringstream lines(out.str());
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("pattern=OEO", 0) != 0) continue;
        auto ppos = line.find(" p=");
        auto pend = line.find(' ', ppos + 3);
        omega_path += parse_rational(line.substr(ppos + 3, pend - ppos - 3));
        EXPECT_NE(line.find("final=AC:"), std::string::npos) << line;
    }
    EXPECT_EQ(omega_path, Rational(1, 4));
}

TEST(Explain, PhaseflipDiscardedBranchesTotal) {
    // p0 = 0.8: discarded cross-term weight is 2 p0 p1 = 0.32.
    ScenarioConfig cfg;
    cfg.protocol = "phaseflip";
    cfg.p0 = Rational(4, 5);
    std::ostringstream out, err;
    ASSERT_EQ(cmd_explain(cfg, out, err), 0);
    Rational discarded = 0;
    std::istringstream lines(out.str());
    std::string line;
    while (std::getline(lines, line)) {
        if (line.find("final=discarded") == std::string::npos) continue;
        auto ppos = line.find(" p=");
        auto pend = line.find(' ', ppos + 3);
        discarded += parse_rational(line.substr(ppos + 3, pend - ppos - 3));
    }
    EXPECT_EQ(discarded, Rational(8, 25));
}

TEST(Mc, CsvSchemaAndDeterminism) {
    ScenarioConfig cfg;
    cfg.protocol = "full-mepp";
    cfg.sweep = SweepSpec{Rational(3, 10), Rational(7, 10), 3};
    cfg.trials = 2000;
    cfg.seed = 12;
    cfg.out = temp_path("mc_a.csv");
    ASSERT_EQ(cmd_mc(cfg), 0);
    std::string first = slurp(cfg.out);
    EXPECT_EQ(first.rfind("F0,Y_c,Y_2to3,Y_e,F_c,F_2,F_2to3,F_e,stderr_Y_c", 0), 0u);
    cfg.out = temp_path("mc_b.csv");
    ASSERT_EQ(cmd_mc(cfg), 0);
    EXPECT_EQ(first, slurp(cfg.out));
}

TEST(Mc, SinglePointWithoutSweep) {
    ScenarioConfig cfg;
    cfg.protocol = "phaseflip";
    cfg.p0 = Rational(4, 5);
    cfg.trials = 2000;
    cfg.seed = 4;
    cfg.out = temp_path("mc_single.csv");
    ASSERT_EQ(cmd_mc(cfg), 0);
    std::string csv = slurp(cfg.out);
    EXPECT_EQ(csv.rfind("F0,yield,p0_prime,stderr_yield,stderr_p0_prime", 0), 0u);
    EXPECT_NE(csv.find("\n0.800000000000,"), std::string::npos);
}
