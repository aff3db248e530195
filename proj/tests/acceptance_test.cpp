// Acceptance suite: one test per criterion, each printing a pass/fail line
// with its runtime. Exact claims are checked in rational arithmetic; Monte
// Carlo claims at the stated sigma gates with a pinned seed.

#include "ghzpurify/montecarlo.hpp"
#include "ghzpurify/scenario.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace ghzpurify;

namespace {

class CriterionGuard {
public:
    CriterionGuard(int id, std::string what, double budget_seconds)
        : id_(id), what_(std::move(what)), budget_(budget_seconds),
          start_(std::chrono::steady_clock::now()) {}

    ~CriterionGuard() {
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (dt >= budget_)
            ADD_FAILURE() << "criterion " << id_ << " exceeded its runtime budget: " << dt << "s >= "
                          << budget_ << "s";
        bool ok = !::testing::Test::HasFailure();
        std::printf("[CRITERION %d] %s (%.2fs) %s\n", id_, ok ? "PASS" : "FAIL", dt, what_.c_str());
        std::fflush(stdout);
    }

private:
    int id_;
    std::string what_;
    double budget_;
    std::chrono::steady_clock::time_point start_;
};

std::vector<Rational> acceptance_grid() {
    std::vector<Rational> g;
    for (int k = 5; k <= 20; ++k) g.push_back(Rational(k, 20)); // 0.25 .. 1.00 step 0.05
    return g;
}

GhzDiagonalEnsemble bell_pair_ensemble(char a, char b, const Rational& f) {
    BellDiagonalEnsemble e(a, b);
    e.set_weight(bell_phi_plus(), f);
    if (f != 1) e.set_weight(bell_psi_plus(), 1 - f);
    return e.ghz();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Acceptance, Criterion1CurvesYields) {
    CriterionGuard guard(1, "Fig. 4(a) yield curves exact on the 0.25..1.00 grid", 1.0);
    ScenarioConfig cfg;
    cfg.sweep = SweepSpec{Rational(1, 4), Rational(1), 16};
    cfg.out = testing::TempDir() + "/acceptance_curves.csv";
    ASSERT_EQ(cmd_curves(cfg), 0);
    std::string csv = slurp(cfg.out);
    ASSERT_FALSE(csv.empty());
    EXPECT_EQ(csv.rfind("F0,Y_c,Y_2to3,Y_e,F_c,F_2,F_2to3,F_e\n", 0), 0u);

    for (const auto& f0 : acceptance_grid()) {
        auto r = yields_and_fidelities(SymmetricNoiseParams(f0));
        EXPECT_EQ(r.y_c, (1 - 2 * f0 + 4 * f0 * f0) / 3);
        EXPECT_EQ(r.y_2to3, (1 + f0 - 2 * f0 * f0) / 3);
        EXPECT_EQ(r.y_e, (2 - f0 + 2 * f0 * f0) / 3);
        if (f0 < Rational(1, 2)) {
            EXPECT_GT(r.y_2to3, r.y_c);
        }
    }
    auto half = yields_and_fidelities(SymmetricNoiseParams(Rational(1, 2)));
    EXPECT_EQ(half.y_c, Rational(1, 3));
    EXPECT_EQ(half.y_e, Rational(2, 3));
    EXPECT_EQ(yields_and_fidelities(SymmetricNoiseParams(Rational(1))).y_e, Rational(1));
    EXPECT_NE(csv.find("0.500000000000,0.333333333333,0.333333333333,0.666666666667"),
              std::string::npos);
}

TEST(Acceptance, Criterion2CurvesFidelities) {
    CriterionGuard guard(2, "Fig. 4(b) fidelity values and ordering claims", 1.0);
    auto half = yields_and_fidelities(SymmetricNoiseParams(Rational(1, 2)));
    EXPECT_EQ(half.f_c, Rational(3, 4));
    EXPECT_EQ(half.f_2, Rational(3, 4));
    EXPECT_EQ(half.f_2to3, Rational(9, 16));
    EXPECT_EQ(half.f_e, Rational(21, 32));
    for (const auto& f0 : acceptance_grid()) {
        auto r = yields_and_fidelities(SymmetricNoiseParams(f0));
        if (f0 < Rational(1, 2)) {
            EXPECT_GT(r.f_2, r.f_c);
        }
        if (f0 > Rational(1, 2) && f0 < Rational(1)) {
            EXPECT_LT(r.f_2, r.f_c);
        }
        if (f0 == Rational(1)) {
            EXPECT_EQ(r.f_2, r.f_c);
        }
        if (f0 > Rational(1, 4) && f0 < Rational(1)) {
            EXPECT_LT(r.f_2to3, r.f_c);
            EXPECT_GT(r.f_2to3, f0);
            EXPECT_GT(r.f_c, f0);
        }
        if (f0 == Rational(1)) {
            EXPECT_EQ(r.f_2to3, Rational(1));
            EXPECT_EQ(r.f_c, Rational(1));
        }
    }
}

TEST(Acceptance, Criterion3ConventionalOracle) {
    CriterionGuard guard(3, "conventional round equals branch enumeration on 20+ ensembles", 10.0);
    int count = 0;
    auto check = [&](const GhzDiagonalEnsemble& e) {
        auto rep = run_conventional_bitflip(e, RunOptions{false, false, nullptr});
        auto [dist, yield] = conventional_round(e);
        ASSERT_EQ(rep.yield, yield);
        ASSERT_EQ(rep.output.weights(), dist.weights());
        ++count;
    };
    for (int k = 5; k <= 19; ++k) check(SymmetricNoiseParams(Rational(k, 20)).ensemble(3));
    SplitMix64 rng(31337);
    for (int t = 0; t < 6; ++t) {
        GhzDiagonalEnsemble e(3);
        Rational total = 0;
        std::vector<Rational> ws;
        for (int m = 0; m < 4; ++m) {
            ws.push_back(Rational(1 + rng.next() % 9, 1));
            total += ws.back();
        }
        for (uint32_t m = 0; m < 4; ++m) e.set_weight(GhzLabel(3, m, Sign::plus), ws[m] / total);
        check(e);
    }
    auto spec = ghz3_from_error_weights(
        {Rational(2, 5), Rational(3, 10), Rational(1, 5), Rational(1, 10)});
    auto rep = run_conventional_bitflip(spec);
    EXPECT_EQ(rep.output.fidelity(), Rational(8, 15));
    ++count;
    EXPECT_GE(count, 20);
}

TEST(Acceptance, Criterion4FixedPointsAndThresholds) {
    CriterionGuard guard(4, "fixed points at F0=1/4 and p0=1/2 with strict behavior around them",
                         1.0);
    auto quarter = conventional_round(SymmetricNoiseParams(Rational(1, 4)).ensemble(3));
    EXPECT_EQ(quarter.output.fidelity(), Rational(1, 4));
    EXPECT_EQ(yields_and_fidelities(SymmetricNoiseParams(Rational(1, 4))).f_2to3, Rational(1, 4));
    EXPECT_EQ(phase_round(PhaseEnsemble(Rational(1, 2))).first.p0, Rational(1, 2));
    for (int k = 2; k <= 15; ++k) {
        Rational f0(k, 16);
        Rational f_prime = conventional_round(SymmetricNoiseParams(f0).ensemble(3)).output.fidelity();
        Rational f_link = yields_and_fidelities(SymmetricNoiseParams(f0)).f_2to3;
        if (f0 > Rational(1, 4) && f0 < 1) {
            EXPECT_GT(f_prime, f0);
            EXPECT_GT(f_link, f0);
        } else if (f0 < Rational(1, 4)) {
            EXPECT_LT(f_prime, f0);
            EXPECT_LT(f_link, f0);
        }
        Rational p0(k, 16);
        Rational p_prime = phase_round(PhaseEnsemble(p0)).first.p0;
        if (p0 > Rational(1, 2) && p0 < 1) {
            EXPECT_GT(p_prime, p0);
        } else if (p0 < Rational(1, 2) && p0 > 0) {
            EXPECT_LT(p_prime, p0);
        }
    }
}

TEST(Acceptance, Criterion5RecyclingTables) {
    CriterionGuard guard(5, "recycled pair ensembles equal Table 1 with exact mass balance", 10.0);
    auto check = [&](const GhzDiagonalEnsemble& e) {
        auto rep = run_recycling(e, RunOptions{false, false, nullptr});
        auto tables = recycle_pair_tables(e);
        ASSERT_EQ(rep.pair('A', 'B').weights(), tables.ab.weights());
        ASSERT_EQ(rep.pair('A', 'C').weights(), tables.ac.weights());
        ASSERT_EQ(rep.pair('B', 'C').weights(), tables.bc.weights());
        Rational squares = 0;
        for (const auto& [l, w] : e.weights()) squares += w * w;
        ASSERT_EQ(tables.total_weight() + squares, Rational(1));
        ASSERT_EQ(rep.recycled_weight, tables.total_weight());
    };
    for (int k = 5; k <= 19; ++k) check(SymmetricNoiseParams(Rational(k, 20)).ensemble(3));
    SplitMix64 rng(2718);
    for (int t = 0; t < 8; ++t) {
        GhzDiagonalEnsemble e(3);
        Rational total = 0;
        std::vector<Rational> ws;
        for (int m = 0; m < 4; ++m) {
            ws.push_back(Rational(1 + rng.next() % 9, 1));
            total += ws.back();
        }
        for (uint32_t m = 0; m < 4; ++m) e.set_weight(GhzLabel(3, m, Sign::plus), ws[m] / total);
        check(e);
    }
}

TEST(Acceptance, Criterion6LinkFormulasAndTopologies) {
    CriterionGuard guard(6, "link formulas at F0b=7/8 plus the 3+2, 3+3, and 2+2+2 topologies",
                         30.0);
    RunOptions lean{false, false, nullptr};
    // Exact fidelity block.
    auto ab = bell_pair_ensemble('A', 'B', Rational(7, 8));
    auto ac = bell_pair_ensemble('A', 'C', Rational(7, 8));
    auto rep = run_link(ab, ac, {'A'}, lean);
    EXPECT_EQ(rep.output.weight(GhzLabel(3, 0, Sign::plus)), Rational(49, 64));
    EXPECT_EQ(rep.output.weight(GhzLabel(3, 3, Sign::plus)), Rational(1, 64));
    EXPECT_EQ(rep.output.weight(GhzLabel(3, 2, Sign::plus)), Rational(7, 64));
    EXPECT_EQ(rep.output.weight(GhzLabel(3, 1, Sign::plus)), Rational(7, 64));
    EXPECT_EQ(rep.output.weights(), entanglement_link(ab, ac, {'A'}).weights());

    // Fig. 5: recycled three-photon ensemble + pair at junction A.
    GhzDiagonalEnsemble abc(3);
    abc.set_weight(GhzLabel(3, 0, Sign::plus), Rational(49, 64));
    abc.set_weight(GhzLabel(3, 1, Sign::plus), Rational(7, 64));
    abc.set_weight(GhzLabel(3, 2, Sign::plus), Rational(7, 64));
    abc.set_weight(GhzLabel(3, 3, Sign::plus), Rational(1, 64));
    auto ad = bell_pair_ensemble('A', 'D', Rational(7, 8));
    auto fig5 = run_link(abc, ad, {'A'}, lean);
    EXPECT_EQ(fig5.output.weights(), entanglement_link(abc, ad, {'A'}).weights());
    EXPECT_EQ(fig5.output.n(), 4);
    EXPECT_EQ(fig5.output.total_weight(), Rational(1));
    EXPECT_EQ(fig5.yield, Rational(1));

    // Fig. 6: two three-photon subsystems fused at two junctions.
    GhzDiagonalEnsemble acd(3, {'A', 'C', 'D'});
    acd.set_weight(GhzLabel(3, 0, Sign::plus), Rational(3, 4));
    acd.set_weight(GhzLabel(3, 2, Sign::plus), Rational(1, 4));
    auto fig6a = run_link(abc, acd, {'A', 'C'}, lean);
    auto fig6b = run_link(abc, acd, {'C', 'A'}, lean);
    EXPECT_EQ(fig6a.output.weights(), fig6b.output.weights());
    EXPECT_EQ(fig6a.output.weights(), entanglement_link(abc, acd, {'A', 'C'}).weights());
    EXPECT_EQ(fig6a.output.n(), 4);
    EXPECT_EQ(fig6a.output.total_weight(), Rational(1));

    // Fig. 7(a): pairs AC + AD fused at A, then CB at C.
    auto pair_ac = bell_pair_ensemble('A', 'C', Rational(7, 8));
    auto pair_ad = bell_pair_ensemble('A', 'D', Rational(5, 6));
    auto pair_cb = bell_pair_ensemble('C', 'B', Rational(3, 4));
    auto acd_linked = run_link(pair_ac, pair_ad, {'A'}, lean).output;
    auto fig7a = run_link(acd_linked, pair_cb, {'C'}, lean);
    auto fig7a_analytic =
        entanglement_link(entanglement_link(pair_ac, pair_ad, {'A'}), pair_cb, {'C'});
    EXPECT_EQ(fig7a.output.weights(), fig7a_analytic.weights());
    EXPECT_EQ(fig7a.output.n(), 4);
    EXPECT_EQ(fig7a.output.total_weight(), Rational(1));

    // Fig. 7(b): Alice shares a pair with everyone.
    auto pair_ab = bell_pair_ensemble('A', 'B', Rational(7, 8));
    auto pair_ac2 = bell_pair_ensemble('A', 'C', Rational(5, 6));
    auto pair_ad2 = bell_pair_ensemble('A', 'D', Rational(3, 4));
    auto abc_linked = run_link(pair_ab, pair_ac2, {'A'}, lean).output;
    auto fig7b = run_link(abc_linked, pair_ad2, {'A'}, lean);
    auto fig7b_analytic =
        entanglement_link(entanglement_link(pair_ab, pair_ac2, {'A'}), pair_ad2, {'A'});
    EXPECT_EQ(fig7b.output.weights(), fig7b_analytic.weights());
    EXPECT_EQ(fig7b.output.n(), 4);
    EXPECT_EQ(fig7b.output.total_weight(), Rational(1));
}

TEST(Acceptance, Criterion7PhaseFlip) {
    CriterionGuard guard(7, "phase-flip round equals p0^2/(p0^2+p1^2) with odd cross-term parity",
                         10.0);
    for (uint8_t n : {uint8_t(3), uint8_t(4)}) {
        for (int k = 1; k <= 9; ++k) {
            PhaseEnsemble p(Rational(k, 10));
            auto rep = run_phaseflip(p, n, RunOptions{false, false, nullptr});
            Rational denom = p.p0 * p.p0 + p.p1 * p.p1;
            ASSERT_EQ(rep.yield, denom);
            ASSERT_EQ(rep.output.p0, p.p0 * p.p0 / denom);
            ASSERT_TRUE(rep.all_classified);
        }
        // Full enumeration of Psi+ x Psi-: every branch has an odd number of
        // odd parities.
        auto parties = GhzDiagonalEnsemble::default_parties(n);
        PureState plus = PureState::make_ghz(n, GhzLabel(n, 0, Sign::plus), 1).apply_hadamard_all();
        PureState minus = PureState::make_ghz(n, GhzLabel(n, 0, Sign::minus), 2).apply_hadamard_all();
        BranchWalk<Sqrt2Rat> walk(Cursor<Sqrt2Rat>{tensor(plus, minus), Rational(1)}, nullptr,
                                  false);
        for (char p : parties)
            walk.step([&](const Cursor<Sqrt2Rat>& cur) {
                std::vector<Cursor<Sqrt2Rat>> kids;
                for (auto& br : parity_project(cur.state, PhotonTag(p, 1), PhotonTag(p, 2))) {
                    Cursor<Sqrt2Rat> k = cur;
                    k.state = br.post;
                    k.prob = cur.prob * br.probability;
                    k.pattern.push_back(br.outcome);
                    kids.push_back(std::move(k));
                }
                return kids;
            });
        Rational total = 0;
        for (const auto& leaf : walk.leaves()) {
            int odd = 0;
            for (auto o : leaf.pattern)
                if (o == ParityOutcome::odd) ++odd;
            ASSERT_EQ(odd % 2, 1);
            total += leaf.prob;
        }
        ASSERT_EQ(total, Rational(1));
    }
}

TEST(Acceptance, Criterion8FourPhotonRecycling) {
    CriterionGuard guard(8, "four-photon recycling branch tables match the closed forms", 30.0);
    std::vector<ParityOutcome> eeeo{ParityOutcome::even, ParityOutcome::even, ParityOutcome::even,
                                    ParityOutcome::odd};
    std::vector<ParityOutcome> eeoo{ParityOutcome::even, ParityOutcome::even, ParityOutcome::odd,
                                    ParityOutcome::odd};
    auto verify = [&](const std::vector<Rational>& f) {
        auto e = ghz4_from_mask_weights(f);
        auto rep = run_recycling(e, RunOptions{false, false, nullptr});
        // Enumerated pattern ensembles equal the analytic extraction.
        auto an_eeeo = four_photon_recycle(f, eeeo);
        auto an_eeoo = four_photon_recycle(f, eeoo);
        ASSERT_TRUE(rep.by_pattern.count("EEEO"));
        ASSERT_TRUE(rep.by_pattern.count("EEOO"));
        ASSERT_EQ(rep.by_pattern.at("EEEO").ensemble.weights(), an_eeeo.ensemble.weights());
        ASSERT_EQ(rep.by_pattern.at("EEOO").ensemble.weights(), an_eeoo.ensemble.weights());
        // And equal the appendix formulas: f'''_m ~ f''_{2m} f''_{2m+1};
        // pair weights phi ~ f0 f3 + f1 f2, psi ~ f4 f7 + f5 f6.
        const auto& triple = rep.by_pattern.at("EEEO").ensemble;
        for (uint32_t m = 0; m < 4; ++m)
            ASSERT_EQ(triple.weight(GhzLabel(3, m, Sign::plus)), f[2 * m] * f[2 * m + 1]);
        const auto& pair = rep.by_pattern.at("EEOO").ensemble;
        ASSERT_EQ(pair.weight(GhzLabel(2, 0, Sign::plus)), f[0] * f[3] + f[1] * f[2]);
        ASSERT_EQ(pair.weight(GhzLabel(2, 1, Sign::plus)), f[4] * f[7] + f[5] * f[6]);
    };
    verify(std::vector<Rational>(8, Rational(1, 8)));
    SplitMix64 rng(20110523);
    for (int t = 0; t < 10; ++t) {
        std::vector<Rational> f;
        Rational total = 0;
        for (int i = 0; i < 8; ++i) {
            f.push_back(Rational(1 + rng.next() % 9, 1));
            total += f.back();
        }
        for (auto& w : f) w /= total;
        verify(f);
    }
}

TEST(Acceptance, Criterion9QndCnotEquivalence) {
    CriterionGuard guard(9, "QND and CNOT detectors give identical outcome distributions", 5.0);
    for (uint32_t i = 0; i < 4; ++i)
        for (uint32_t j = 0; j < 4; ++j) {
            PureState prod = tensor(PureState::make_ghz(3, GhzLabel(3, i, Sign::plus), 1),
                                    PureState::make_ghz(3, GhzLabel(3, j, Sign::plus), 2));
            for (char party : {'A', 'B', 'C'}) {
                auto qnd = parity_project(prod, PhotonTag(party, 1), PhotonTag(party, 2));
                auto cnot = parity_via_cnot(prod, PhotonTag(party, 1), PhotonTag(party, 2));
                ASSERT_EQ(qnd.size(), cnot.size());
                for (size_t k = 0; k < qnd.size(); ++k) {
                    ASSERT_EQ(qnd[k].outcome, cnot[k].outcome);
                    ASSERT_EQ(qnd[k].probability, cnot[k].probability);
                }
            }
        }
}

TEST(Acceptance, Criterion10MonteCarloConsistency) {
    CriterionGuard guard(10, "Monte Carlo within 3 sigma on the acceptance grid, bit-stable reruns",
                         120.0);
    const uint64_t trials = 100000;
    const uint64_t seed = 20110523;
    int total_stats = 0, outside = 0;
    auto tally = [&](double est, double se, double exact) {
        ++total_stats;
        double gate = se > 0 ? 3 * se : 1e-9;
        if (std::abs(est - exact) > gate) ++outside;
    };

    std::vector<Rational> f_grid{Rational(3, 10), Rational(9, 20), Rational(3, 5), Rational(3, 4),
                                 Rational(9, 10)};
    // conventional
    for (auto rows = mc_sweep(f_grid, McPipeline::conventional, trials, seed); const auto& row : rows) {
        auto e = SymmetricNoiseParams(row.f0).ensemble(3);
        auto [dist, yield] = conventional_round(e);
        tally(row.estimate.value("yield"), row.estimate.se("yield"), to_double(yield));
        for (const auto& [l, w] : dist.weights()) {
            std::string name = "F[ABC:" + l.str() + "]";
            tally(row.estimate.value(name), row.estimate.se(name), to_double(w));
        }
    }
    // recycling
    for (auto rows = mc_sweep(f_grid, McPipeline::recycling, trials, seed + 1); const auto& row : rows) {
        auto tables = recycle_pair_tables(SymmetricNoiseParams(row.f0).ensemble(3));
        tally(row.estimate.value("yield"), row.estimate.se("yield"),
              to_double(tables.total_weight()));
        for (const auto* pe : {&tables.ab, &tables.ac, &tables.bc}) {
            std::string key{pe->parties().first, pe->parties().second};
            tally(row.estimate.value("W[" + key + "]"), row.estimate.se("W[" + key + "]"),
                  to_double(pe->total_weight()));
            tally(row.estimate.value("F[" + key + "]"), row.estimate.se("F[" + key + "]"),
                  to_double(pe->weight(bell_phi_plus()) / pe->total_weight()));
        }
    }
    // link
    std::vector<Rational> pair_grid{Rational(11, 20), Rational(13, 20), Rational(3, 4),
                                    Rational(17, 20), Rational(19, 20)};
    for (auto rows = mc_sweep(pair_grid, McPipeline::link, trials, seed + 2); const auto& row : rows) {
        auto linked = entanglement_link(bell_pair_ensemble('A', 'B', row.f0),
                                        bell_pair_ensemble('A', 'C', row.f0), {'A'});
        tally(row.estimate.value("yield"), row.estimate.se("yield"), 1.0);
        for (const auto& [l, w] : linked.weights()) {
            std::string name = "F[ABC:" + l.str() + "]";
            tally(row.estimate.value(name), row.estimate.se(name), to_double(w));
        }
    }
    // phase flip
    std::vector<Rational> p_grid{Rational(11, 20), Rational(13, 20), Rational(3, 4),
                                 Rational(17, 20), Rational(19, 20)};
    for (auto rows = mc_sweep(p_grid, McPipeline::phaseflip, trials, seed + 3); const auto& row : rows) {
        auto [dist, yield] = phase_round(PhaseEnsemble(row.f0));
        tally(row.estimate.value("yield"), row.estimate.se("yield"), to_double(yield));
        tally(row.estimate.value("p0_prime"), row.estimate.se("p0_prime"), to_double(dist.p0));
    }
    // full protocol
    for (auto rows = mc_sweep(f_grid, McPipeline::full_mepp, trials, seed + 4); const auto& row : rows) {
        auto r = yields_and_fidelities(SymmetricNoiseParams(row.f0));
        tally(row.estimate.value("Y_c"), row.estimate.se("Y_c"), to_double(r.y_c));
        tally(row.estimate.value("Y_2to3"), row.estimate.se("Y_2to3"), to_double(r.y_2to3));
        tally(row.estimate.value("Y_e"), row.estimate.se("Y_e"), to_double(r.y_e));
        tally(row.estimate.value("F_c"), row.estimate.se("F_c"), to_double(r.f_c));
        tally(row.estimate.value("F_2"), row.estimate.se("F_2"), to_double(r.f_2));
        tally(row.estimate.value("F_2to3"), row.estimate.se("F_2to3"), to_double(r.f_2to3));
        tally(row.estimate.value("F_e"), row.estimate.se("F_e"), to_double(r.f_e));
    }

    EXPECT_GE(total_stats, 100);
    EXPECT_LE(outside * 100, total_stats) << outside << " of " << total_stats
                                          << " statistics fell outside 3 sigma";

    // Bit-identical rerun with the same seed.
    McConfig cfg;
    cfg.pipeline = McPipeline::conventional;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.ensemble = SymmetricNoiseParams(Rational(3, 5)).ensemble(3);
    auto a = mc_run(cfg);
    auto b = mc_run(cfg);
    ASSERT_EQ(a.stats.size(), b.stats.size());
    for (size_t i = 0; i < a.stats.size(); ++i) {
        ASSERT_EQ(a.stats[i].value, b.stats[i].value);
        ASSERT_EQ(a.stats[i].se, b.stats[i].se);
    }
}

int main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    return RUN_ALL_TESTS();
}
