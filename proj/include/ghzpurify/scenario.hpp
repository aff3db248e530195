// Scenario configuration (flat key = value files), the comparison-curve CSV
// writer, and the command entry points behind the CLI subcommands. Commands
// return process exit codes: 0 success, 1 configuration/input error, 2 exact
// engine disagreement, 3 Monte Carlo outside the 4-sigma gate.

#pragma once

#include "ghzpurify/analytics.hpp"
#include "ghzpurify/montecarlo.hpp"
#include "ghzpurify/protocol.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ghzpurify {

struct SweepSpec {
    Rational start{1, 4};
    Rational stop{1};
    int steps = 16;

    std::vector<Rational> grid() const {
        if (steps < 1) throw std::invalid_argument("sweep needs at least one step");
        if (steps == 1) return {start};
        std::vector<Rational> g;
        Rational delta = (stop - start) / (steps - 1);
        for (int i = 0; i < steps; ++i) g.push_back(start + delta * i);
        return g;
    }
};

struct ScenarioConfig {
    std::string protocol = "conventional";
    uint8_t n = 3;
    std::vector<std::string> engines = {"analytic", "enumerate"};
    std::optional<std::vector<Rational>> f_vec; // n=3: error-position order; n=4: mask order
    std::optional<Rational> f0;                 // symmetric noise
    std::optional<Rational> p, q;               // channel flip rates
    std::optional<Rational> p0;                 // phase ensemble
    std::optional<Rational> pair_f0;            // link input pair fidelity
    std::optional<std::string> ensemble_file;
    std::optional<SweepSpec> sweep;
    uint64_t trials = 100000;
    uint64_t seed = 1;
    std::string out;

    bool wants(const std::string& engine) const {
        for (const auto& e : engines)
            if (e == engine) return true;
        return false;
    }

    void set_key(const std::string& key, const std::string& value, const std::string& where) {
        auto bad = [&](const std::string& why) {
            throw std::invalid_argument(where + ": field '" + key + "': " + why);
        };
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t");
            size_t b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        try {
            if (key == "protocol") {
                protocol = value;
            } else if (key == "n") {
                int v = std::stoi(value);
                if (v < 2 || v > 6) bad("photon count out of range");
                n = static_cast<uint8_t>(v);
            } else if (key == "engines") {
                engines.clear();
                std::istringstream ss(value);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    tok = trim(tok);
                    if (tok != "analytic" && tok != "enumerate" && tok != "montecarlo")
                        bad("unknown engine '" + tok + "'");
                    engines.push_back(tok);
                }
            } else if (key == "f") {
                std::vector<Rational> v;
                std::istringstream ss(value);
                std::string tok;
                while (std::getline(ss, tok, ',')) v.push_back(parse_rational(trim(tok)));
                f_vec = std::move(v);
            } else if (key == "f0") {
                f0 = parse_rational(value);
            } else if (key == "p") {
                p = parse_rational(value);
            } else if (key == "q") {
                q = parse_rational(value);
            } else if (key == "p0") {
                p0 = parse_rational(value);
            } else if (key == "pair_f0") {
                pair_f0 = parse_rational(value);
            } else if (key == "ensemble_file") {
                ensemble_file = value;
            } else if (key == "sweep_start") {
                if (!sweep) sweep = SweepSpec{};
                sweep->start = parse_rational(value);
            } else if (key == "sweep_stop") {
                if (!sweep) sweep = SweepSpec{};
                sweep->stop = parse_rational(value);
            } else if (key == "sweep_steps") {
                if (!sweep) sweep = SweepSpec{};
                sweep->steps = std::stoi(value);
            } else if (key == "trials") {
                trials = std::stoull(value);
            } else if (key == "seed") {
                seed = std::stoull(value);
            } else if (key == "out") {
                out = value;
            } else {
                bad("unknown key");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            bad(e.what());
        }
    }

    static ScenarioConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open config file " + path);
        ScenarioConfig cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                size_t a = s.find_first_not_of(" \t\r");
                size_t b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            std::string t = trim(line);
            if (t.empty()) continue;
            auto eq = t.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                            ": expected 'key = value'");
            cfg.set_key(trim(t.substr(0, eq)), trim(t.substr(eq + 1)),
                        path + ":" + std::to_string(lineno));
        }
        return cfg;
    }

    void validate() const {
        if (engines.empty()) throw std::invalid_argument("at least one engine is required");
        if (sweep && (f_vec || ensemble_file))
            throw std::invalid_argument("sweeps require symmetric-noise input");
    }

    // Input ensemble for the bit-flip pipelines.
    GhzDiagonalEnsemble input_ensemble() const {
        if (ensemble_file) {
            std::ifstream in(*ensemble_file);
            if (!in) throw std::invalid_argument("cannot open ensemble file " + *ensemble_file);
            GhzDiagonalEnsemble e = read_ensemble(in);
            return e;
        }
        if (f_vec) {
            if (n == 3 && f_vec->size() == 4) {
                Rational total = 0;
                for (const auto& w : *f_vec) total += w;
                if (total != 1)
                    throw std::invalid_argument("F vector must be normalized; weights sum to " +
                                                rational_string(total));
                return ghz3_from_error_weights(*f_vec);
            }
            if (n == 4 && f_vec->size() == 8) {
                Rational total = 0;
                for (const auto& w : *f_vec) total += w;
                if (total != 1)
                    throw std::invalid_argument("F vector must be normalized; weights sum to " +
                                                rational_string(total));
                return ghz4_from_mask_weights(*f_vec);
            }
            throw std::invalid_argument("F vector length does not match the photon count");
        }
        if (f0) return SymmetricNoiseParams(*f0).ensemble(n);
        if (p) return channel_to_ensemble(n, *p, q.value_or(Rational(0))).flips;
        throw std::invalid_argument("no input: give f, f0, p, or ensemble_file");
    }

    PhaseEnsemble input_phase() const {
        if (p0) return PhaseEnsemble(*p0);
        if (q) return channel_to_ensemble(n, p.value_or(Rational(0)), *q).phase;
        throw std::invalid_argument("phaseflip needs p0 or a channel rate q");
    }

    Rational input_pair_fidelity() const {
        if (pair_f0) return *pair_f0;
        if (f0) return 3 * *f0 / (1 + 2 * *f0); // recycled-pair fidelity under symmetric noise
        throw std::invalid_argument("link needs pair_f0 or f0");
    }
};

// --- curves ------------------------------------------------------------------

inline const char* curves_csv_header() { return "F0,Y_c,Y_2to3,Y_e,F_c,F_2,F_2to3,F_e"; }

inline std::string curves_csv(const std::vector<Rational>& grid) {
    std::string out = std::string(curves_csv_header()) + "\n";
    for (const auto& f0 : grid) {
        YieldFidelityRecord r = yields_and_fidelities(SymmetricNoiseParams(f0));
        out += decimal_string(f0);
        for (const Rational* v : {&r.y_c, &r.y_2to3, &r.y_e, &r.f_c, &r.f_2, &r.f_2to3, &r.f_e})
            out += "," + decimal_string(*v);
        out += "\n";
    }
    return out;
}

inline int cmd_curves(const ScenarioConfig& cfg, std::ostream& err = std::cerr) {
    try {
        cfg.validate();
        if (!cfg.sweep) throw std::invalid_argument("curves needs a sweep (sweep_start/stop/steps)");
        if (cfg.out.empty()) throw std::invalid_argument("curves needs an output path");
        std::string csv = curves_csv(cfg.sweep->grid());
        std::ofstream os(cfg.out, std::ios::binary);
        if (!os) throw std::invalid_argument("cannot write " + cfg.out);
        os << csv;
        return 0;
    } catch (const std::exception& e) {
        err << "curves: " << e.what() << "\n";
        return 1;
    }
}

// --- run ---------------------------------------------------------------------

namespace rundetail {

struct NamedValue {
    std::string name;
    Rational exact;
};

inline std::string label_stat(const std::vector<char>& parties, const GhzLabel& l) {
    return "F[" + std::string(parties.begin(), parties.end()) + ":" + l.str() + "]";
}

// Exact per-protocol statistics; the enumerate engine must reproduce these
// exactly and Monte Carlo within four standard errors.
inline std::vector<NamedValue> analytic_stats(const ScenarioConfig& cfg) {
    std::vector<NamedValue> out;
    if (cfg.protocol == "conventional") {
        auto e = cfg.input_ensemble();
        auto [dist, yield] = conventional_round(e);
        out.push_back({"yield", yield});
        for (const auto& [l, w] : dist.weights()) out.push_back({label_stat(e.parties(), l), w});
    } else if (cfg.protocol == "recycling") {
        auto e = cfg.input_ensemble();
        if (e.n() != 3) throw std::invalid_argument("recycling reporting is defined for n = 3");
        auto t = recycle_pair_tables(e);
        out.push_back({"yield", t.total_weight()});
        for (const auto* pe : {&t.ab, &t.ac, &t.bc}) {
            std::string key{pe->parties().first, pe->parties().second};
            Rational w = pe->total_weight();
            out.push_back({"W[" + key + "]", w});
            out.push_back({"F[" + key + "]", w == 0 ? Rational(0) : pe->weight(bell_phi_plus()) / w});
        }
    } else if (cfg.protocol == "link") {
        Rational fb = cfg.input_pair_fidelity();
        BellDiagonalEnsemble ab('A', 'B'), ac('A', 'C');
        ab.set_weight(bell_phi_plus(), fb);
        ab.set_weight(bell_psi_plus(), 1 - fb);
        ac.set_weight(bell_phi_plus(), fb);
        ac.set_weight(bell_psi_plus(), 1 - fb);
        auto linked = entanglement_link(ab.ghz(), ac.ghz(), {'A'});
        out.push_back({"yield", Rational(1)});
        for (const auto& [l, w] : linked.weights()) out.push_back({label_stat(linked.parties(), l), w});
    } else if (cfg.protocol == "phaseflip") {
        auto [dist, yield] = phase_round(cfg.input_phase());
        out.push_back({"yield", yield});
        out.push_back({"p0_prime", dist.p0});
    } else if (cfg.protocol == "full-mepp") {
        if (!cfg.f0) throw std::invalid_argument("full-mepp needs symmetric f0");
        auto r = yields_and_fidelities(SymmetricNoiseParams(*cfg.f0));
        out.push_back({"Y_c", r.y_c});
        out.push_back({"Y_2to3", r.y_2to3});
        out.push_back({"Y_e", r.y_e});
        out.push_back({"F_c", r.f_c});
        out.push_back({"F_2", r.f_2});
        out.push_back({"F_2to3", r.f_2to3});
        out.push_back({"F_e", r.f_e});
    } else {
        throw std::invalid_argument("unknown protocol '" + cfg.protocol + "'");
    }
    return out;
}

inline std::vector<NamedValue> enumeration_stats(const ScenarioConfig& cfg) {
    std::vector<NamedValue> out;
    RunOptions opts;
    opts.record_branches = false;
    if (cfg.protocol == "conventional") {
        auto e = cfg.input_ensemble();
        auto rep = run_conventional_bitflip(e, opts);
        out.push_back({"yield", rep.yield});
        for (const auto& [l, w] : rep.output.weights()) out.push_back({label_stat(e.parties(), l), w});
    } else if (cfg.protocol == "recycling") {
        auto e = cfg.input_ensemble();
        if (e.n() != 3) throw std::invalid_argument("recycling reporting is defined for n = 3");
        auto rep = run_recycling(e, opts);
        out.push_back({"yield", rep.recycled_weight});
        for (const char* key : {"AB", "AC", "BC"}) {
            auto pe = rep.pair(key[0], key[1]);
            Rational w = pe.total_weight();
            out.push_back({std::string("W[") + key + "]", w});
            out.push_back(
                {std::string("F[") + key + "]", w == 0 ? Rational(0) : pe.weight(bell_phi_plus()) / w});
        }
    } else if (cfg.protocol == "link") {
        Rational fb = cfg.input_pair_fidelity();
        BellDiagonalEnsemble ab('A', 'B'), ac('A', 'C');
        ab.set_weight(bell_phi_plus(), fb);
        ab.set_weight(bell_psi_plus(), 1 - fb);
        ac.set_weight(bell_phi_plus(), fb);
        ac.set_weight(bell_psi_plus(), 1 - fb);
        auto rep = run_link(ab.ghz(), ac.ghz(), {'A'}, opts);
        out.push_back({"yield", rep.yield});
        for (const auto& [l, w] : rep.output.weights())
            out.push_back({label_stat(rep.output.parties(), l), w});
    } else if (cfg.protocol == "phaseflip") {
        auto rep = run_phaseflip(cfg.input_phase(), cfg.n, opts);
        if (!rep.all_classified || !rep.all_canonical)
            throw std::logic_error("phase-flip enumeration failed internal validation");
        out.push_back({"yield", rep.yield});
        out.push_back({"p0_prime", rep.output.p0});
    } else if (cfg.protocol == "full-mepp") {
        if (!cfg.f0) throw std::invalid_argument("full-mepp needs symmetric f0");
        auto e = SymmetricNoiseParams(*cfg.f0).ensemble(3);
        auto conv = run_conventional_bitflip(e, opts);
        auto rec = run_recycling(e, opts);
        Rational y_c = conv.yield;
        Rational f_c = conv.output.fidelity();
        Rational p32 = rec.recycled_weight;
        Rational y23 = p32 / 2;
        Rational f2(1), f23(1); // no cross-combinations at F0 = 1: pure-input limit
        if (p32 != 0) {
            auto ab = rec.pair('A', 'B').normalized();
            auto ac = rec.pair('A', 'C').normalized();
            f2 = ab.weight(bell_phi_plus());
            f23 = run_link(ab.ghz(), ac.ghz(), {'A'}, opts).output.fidelity();
        }
        Rational y_e = y_c + y23;
        out.push_back({"Y_c", y_c});
        out.push_back({"Y_2to3", y23});
        out.push_back({"Y_e", y_e});
        out.push_back({"F_c", f_c});
        out.push_back({"F_2", f2});
        out.push_back({"F_2to3", f23});
        out.push_back({"F_e", (f_c * y_c + f23 * y23) / y_e});
    } else {
        throw std::invalid_argument("unknown protocol '" + cfg.protocol + "'");
    }
    return out;
}

inline McConfig mc_config(const ScenarioConfig& cfg) {
    McConfig mc;
    mc.pipeline = parse_pipeline(cfg.protocol);
    mc.trials = cfg.trials;
    mc.seed = cfg.seed;
    mc.n = cfg.n;
    switch (mc.pipeline) {
        case McPipeline::conventional:
        case McPipeline::recycling:
        case McPipeline::full_mepp:
            mc.ensemble = cfg.protocol == "full-mepp" ? SymmetricNoiseParams(*cfg.f0).ensemble(3)
                                                      : cfg.input_ensemble();
            break;
        case McPipeline::link:
            mc.pair_fidelity = cfg.input_pair_fidelity();
            break;
        case McPipeline::phaseflip:
            mc.phase = cfg.input_phase();
            break;
    }
    return mc;
}

// Recycling Monte Carlo reports pair weights relative to trials and per-pair
// fidelities; map its stat names onto the analytic ones directly (they match).
inline std::string format_stats(const std::vector<NamedValue>& stats) {
    std::string s;
    for (const auto& nv : stats)
        s += " " + nv.name + "=" + rational_string(nv.exact) + " (" + decimal_string(nv.exact) + ")";
    return s;
}

} // namespace rundetail

inline int cmd_run(const ScenarioConfig& cfg, std::ostream& os = std::cout,
                   std::ostream& err = std::cerr) {
    using rundetail::NamedValue;
    try {
        cfg.validate();
        os << "protocol=" << cfg.protocol << " n=" << static_cast<int>(cfg.n) << "\n";
        std::vector<NamedValue> analytic, enumerated;
        bool need_analytic = cfg.wants("analytic") || cfg.wants("montecarlo");
        if (need_analytic) {
            analytic = rundetail::analytic_stats(cfg);
            if (cfg.wants("analytic")) os << "engine=analytic" << rundetail::format_stats(analytic) << "\n";
        }
        if (cfg.wants("enumerate")) {
            enumerated = rundetail::enumeration_stats(cfg);
            os << "engine=enumerate" << rundetail::format_stats(enumerated) << "\n";
        }
        if (cfg.wants("analytic") && cfg.wants("enumerate")) {
            if (analytic.size() != enumerated.size())
                throw std::logic_error("engines disagree on the statistic set");
            for (size_t i = 0; i < analytic.size(); ++i)
                if (analytic[i].name != enumerated[i].name ||
                    analytic[i].exact != enumerated[i].exact) {
                    err << "run: exact engines disagree on " << analytic[i].name << ": analytic="
                        << rational_string(analytic[i].exact)
                        << " enumerate=" << rational_string(enumerated[i].exact) << "\n";
                    return 2;
                }
            os << "cross-check: analytic == enumerate\n";
        }
        if (cfg.wants("montecarlo")) {
            McEstimate est = mc_run(rundetail::mc_config(cfg));
            os << "engine=montecarlo trials=" << est.trials << " rng=" << est.rng;
            char buf[64];
            for (const auto& s : est.stats) {
                std::snprintf(buf, sizeof buf, " %s=%.9g(%.3g)", s.name.c_str(), s.value, s.se);
                os << buf;
            }
            os << "\n";
            for (const auto& nv : analytic) {
                const McStat* s = est.find(nv.name);
                if (!s) continue;
                double exact = to_double(nv.exact);
                double gate = s->se > 0 ? 4 * s->se : 1e-12;
                if (std::abs(s->value - exact) > gate) {
                    err << "run: montecarlo outside 4 sigma on " << nv.name << ": est=" << s->value
                        << " se=" << s->se << " exact=" << exact << "\n";
                    return 3;
                }
            }
            os << "cross-check: montecarlo within 4 sigma\n";
        }
        return 0;
    } catch (const std::exception& e) {
        err << "run: " << e.what() << "\n";
        return 1;
    }
}

// --- explain -------------------------------------------------------------------

inline int cmd_explain(const ScenarioConfig& cfg, std::ostream& os = std::cout,
                       std::ostream& err = std::cerr) {
    try {
        cfg.validate();
        RunOptions opts;
        std::vector<BranchRecord> records;
        if (cfg.protocol == "conventional") {
            records = run_conventional_bitflip(cfg.input_ensemble(), opts).branches;
        } else if (cfg.protocol == "recycling") {
            records = run_recycling(cfg.input_ensemble(), opts).branches;
        } else if (cfg.protocol == "link") {
            Rational fb = cfg.input_pair_fidelity();
            BellDiagonalEnsemble ab('A', 'B'), ac('A', 'C');
            ab.set_weight(bell_phi_plus(), fb);
            ab.set_weight(bell_psi_plus(), 1 - fb);
            ac.set_weight(bell_phi_plus(), fb);
            ac.set_weight(bell_psi_plus(), 1 - fb);
            records = run_link(ab.ghz(), ac.ghz(), {'A'}, opts).branches;
        } else if (cfg.protocol == "phaseflip") {
            records = run_phaseflip(cfg.input_phase(), cfg.n, opts).branches;
        } else {
            throw std::invalid_argument("explain supports conventional, recycling, link, phaseflip");
        }
        Rational total = 0;
        for (const auto& r : records) {
            os << r.line() << "\n";
            total += r.probability;
        }
        os << "# branches=" << records.size() << " total_probability=" << rational_string(total)
           << "\n";
        if (total != 1) throw std::logic_error("branch probabilities do not sum to one");
        return 0;
    } catch (const std::exception& e) {
        err << "explain: " << e.what() << "\n";
        return 1;
    }
}

// --- mc ----------------------------------------------------------------------

inline std::string mc_csv(const std::vector<McSweepRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("empty sweep");
    // Conditional statistics can be absent at degenerate grid points (no
    // samples exist for them); columns are the union over rows.
    std::vector<std::string> names;
    for (const auto& row : rows)
        for (const auto& s : row.estimate.stats)
            if (std::find(names.begin(), names.end(), s.name) == names.end())
                names.push_back(s.name);
    std::string out = "F0";
    for (const auto& name : names) out += "," + name;
    for (const auto& name : names) out += ",stderr_" + name;
    out += "\n";
    char buf[64];
    for (const auto& row : rows) {
        out += decimal_string(row.f0);
        for (bool want_se : {false, true})
            for (const auto& name : names) {
                const McStat* s = row.estimate.find(name);
                if (!s) {
                    out += ",";
                    continue;
                }
                std::snprintf(buf, sizeof buf, ",%.12g", want_se ? s->se : s->value);
                out += buf;
            }
        out += "\n";
    }
    return out;
}

inline int cmd_mc(const ScenarioConfig& cfg, std::ostream& err = std::cerr) {
    try {
        cfg.validate();
        if (cfg.out.empty()) throw std::invalid_argument("mc needs an output path");
        std::vector<Rational> grid;
        if (cfg.sweep)
            grid = cfg.sweep->grid();
        else if (cfg.f0)
            grid = {*cfg.f0};
        else if (cfg.p0)
            grid = {*cfg.p0};
        else if (cfg.pair_f0)
            grid = {*cfg.pair_f0};
        else
            throw std::invalid_argument("mc needs a sweep or a single f0/p0/pair_f0 point");
        auto rows = mc_sweep(grid, parse_pipeline(cfg.protocol), cfg.trials, cfg.seed, cfg.n);
        std::ofstream os(cfg.out, std::ios::binary);
        if (!os) throw std::invalid_argument("cannot write " + cfg.out);
        os << mc_csv(rows);
        return 0;
    } catch (const std::exception& e) {
        err << "mc: " << e.what() << "\n";
        return 1;
    }
}

} // namespace ghzpurify
