// Seeded stochastic mirror of the protocol pipelines. Trials run on the same
// walkers as the exact engine but with double amplitudes and one sampled
// branch per measurement. Trials are split over a fixed number of partitions
// with independent splitmix64 substreams, so results are bit-identical for
// any worker count and any repeat of the same config. One representative
// product per run is enumerated in both numerics and every branch probability
// must agree within 1e-12.

#pragma once

#include "ghzpurify/protocol.hpp"

#include <atomic>
#include <cstdlib>
#include <map>
#include <optional>
#include <thread>

namespace ghzpurify {

inline unsigned worker_count() {
    if (const char* env = std::getenv("GHZ_PURIFY_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? std::min(hw, 8u) : 1u;
}

enum class McPipeline : uint8_t { conventional, recycling, link, phaseflip, full_mepp };

inline const char* pipeline_name(McPipeline p) {
    switch (p) {
        case McPipeline::conventional: return "conventional";
        case McPipeline::recycling: return "recycling";
        case McPipeline::link: return "link";
        case McPipeline::phaseflip: return "phaseflip";
        case McPipeline::full_mepp: return "full-mepp";
    }
    return "?";
}

inline McPipeline parse_pipeline(const std::string& s) {
    if (s == "conventional") return McPipeline::conventional;
    if (s == "recycling") return McPipeline::recycling;
    if (s == "link") return McPipeline::link;
    if (s == "phaseflip") return McPipeline::phaseflip;
    if (s == "full-mepp" || s == "full_mepp") return McPipeline::full_mepp;
    throw std::invalid_argument("unknown pipeline '" + s + "'");
}

struct McConfig {
    McPipeline pipeline = McPipeline::conventional;
    uint64_t trials = 0;
    uint64_t seed = 0;
    std::optional<GhzDiagonalEnsemble> ensemble;  // conventional / recycling / full-mepp
    std::optional<PhaseEnsemble> phase;           // phaseflip
    uint8_t n = 3;
    std::optional<Rational> pair_fidelity;        // link: weight of phi+ in both pairs

    void validate() const {
        if (trials < 1) throw std::invalid_argument("trials must be at least 1");
        switch (pipeline) {
            case McPipeline::conventional:
            case McPipeline::recycling:
            case McPipeline::full_mepp:
                if (!ensemble) throw std::invalid_argument("pipeline needs an input ensemble");
                ensemble->check_normalized();
                if (ensemble->n() > 6)
                    throw std::invalid_argument("photon count outside the simulation budget");
                if (pipeline == McPipeline::full_mepp && ensemble->n() != 3)
                    throw std::invalid_argument("full-mepp sampling is defined for three parties");
                break;
            case McPipeline::link:
                if (!pair_fidelity || *pair_fidelity < 0 || *pair_fidelity > 1)
                    throw std::invalid_argument("link needs a pair fidelity in [0, 1]");
                break;
            case McPipeline::phaseflip:
                if (!phase) throw std::invalid_argument("phaseflip needs p0/p1");
                if (n < 2 || n > 5) throw std::invalid_argument("phaseflip photon count out of budget");
                break;
        }
    }
};

struct McStat {
    std::string name;
    double value = 0;
    double se = 0;
};

struct McEstimate {
    uint64_t trials = 0;
    std::string rng = rng_algorithm_id();
    double float_mirror_max_dev = 0;
    std::vector<McStat> stats;

    const McStat* find(const std::string& name) const {
        for (const auto& s : stats)
            if (s.name == name) return &s;
        return nullptr;
    }
    double value(const std::string& name) const {
        const McStat* s = find(name);
        if (!s) throw std::invalid_argument("no statistic named " + name);
        return s->value;
    }
    double se(const std::string& name) const {
        const McStat* s = find(name);
        if (!s) throw std::invalid_argument("no statistic named " + name);
        return s->se;
    }
};

namespace mcdetail {

constexpr uint64_t kPartitions = 64;

struct Tally {
    std::map<std::string, double> c;
    void add(const std::string& key, double v = 1.0) { c[key] += v; }
    double get(const std::string& key) const {
        auto it = c.find(key);
        return it == c.end() ? 0.0 : it->second;
    }
    void merge(const Tally& o) {
        for (const auto& [k, v] : o.c) c[k] += v;
    }
};

struct LabelSampler {
    std::vector<GhzLabel> labels;
    std::vector<double> cum;

    explicit LabelSampler(const GhzDiagonalEnsemble& e) {
        double acc = 0;
        for (const auto& [l, w] : e.weights()) {
            labels.push_back(l);
            acc += to_double(w);
            cum.push_back(acc);
        }
    }

    const GhzLabel& pick(SplitMix64& rng) const {
        double r = rng.next_double() * cum.back();
        for (size_t i = 0; i < cum.size(); ++i)
            if (r < cum[i]) return labels[i];
        return labels.back();
    }
};

inline double binom_se(double p, double n) {
    if (n <= 0) return 0;
    double v = p * (1 - p) / n;
    return v > 0 ? std::sqrt(v) : 0.0;
}

inline PureStateF ghzF(uint8_t n, const GhzLabel& l, uint8_t copy, char first_party = 'A') {
    return PureStateF::make_ghz(n, l, copy, first_party);
}

inline PureStateF ghzF_on(const std::vector<char>& parties, uint8_t copy, const GhzLabel& l) {
    std::vector<PhotonTag> tags;
    for (char p : parties) tags.emplace_back(p, copy);
    return PureStateF::make_ghz_on(PhotonRegister(tags), l);
}

// One sampled trial per pipeline. Keys: kept/good_kept (conventional),
// pairs/good_pairs plus per-subsystem counters (recycling), links/good_links
// (full-mepp), L:<final> label counters everywhere.
struct TrialContext {
    McPipeline pipeline;
    std::vector<char> parties;
    std::optional<LabelSampler> sampler;
    std::vector<char> b_parties;            // link
    std::optional<LabelSampler> b_sampler;  // link
    std::vector<char> junctions;            // link
    double p0 = 1;                          // phaseflip
    uint8_t n = 3;
};

inline TrialContext make_context(const McConfig& cfg) {
    TrialContext ctx;
    ctx.pipeline = cfg.pipeline;
    ctx.n = cfg.n;
    switch (cfg.pipeline) {
        case McPipeline::conventional:
        case McPipeline::recycling:
        case McPipeline::full_mepp:
            ctx.parties = cfg.ensemble->parties();
            ctx.n = cfg.ensemble->n();
            ctx.sampler.emplace(*cfg.ensemble);
            break;
        case McPipeline::link: {
            BellDiagonalEnsemble ab('A', 'B');
            ab.set_weight(bell_phi_plus(), *cfg.pair_fidelity);
            ab.set_weight(bell_psi_plus(), 1 - *cfg.pair_fidelity);
            BellDiagonalEnsemble ac('A', 'C');
            ac.set_weight(bell_phi_plus(), *cfg.pair_fidelity);
            ac.set_weight(bell_psi_plus(), 1 - *cfg.pair_fidelity);
            ctx.parties = {'A', 'B'};
            ctx.b_parties = {'A', 'C'};
            ctx.junctions = {'A'};
            ctx.sampler.emplace(ab.ghz());
            ctx.b_sampler.emplace(ac.ghz());
            ctx.n = 2;
            break;
        }
        case McPipeline::phaseflip:
            ctx.parties = GhzDiagonalEnsemble::default_parties(cfg.n);
            ctx.p0 = to_double(cfg.phase->p0);
            break;
    }
    return ctx;
}

inline void link_buffered_pairs(std::map<std::string, std::vector<BellLabel>>& buffer,
                                SplitMix64& rng, Tally& t) {
    while (true) {
        std::string k1, k2;
        for (auto& [k, v] : buffer)
            if (!v.empty()) {
                if (k1.empty())
                    k1 = k;
                else {
                    k2 = k;
                    break;
                }
            }
        if (k2.empty()) return;
        BellLabel l1 = buffer[k1].back();
        BellLabel l2 = buffer[k2].back();
        buffer[k1].pop_back();
        buffer[k2].pop_back();
        char junction = (k2.find(k1[0]) != std::string::npos) ? k1[0] : k1[1];
        std::vector<char> pa{k1[0], k1[1]}, pb{k2[0], k2[1]};
        PureStateF product = tensor(ghzF_on(pa, 1, l1.ghz()), [&] {
            std::vector<PhotonTag> tags;
            for (char p : pb) tags.emplace_back(p, 2);
            return PureStateF::make_ghz_on(PhotonRegister(tags), l2.ghz());
        }());
        BranchWalk<double> walk(Cursor<double>{std::move(product), 1.0}, &rng, false);
        walk_link(walk, pa, pb, {junction}, false);
        const auto& leaf = walk.leaves().front();
        t.add("links");
        if (leaf.final->kind == BranchFinal::Kind::labeled && leaf.final->label->mask == 0 &&
            leaf.final->label->sign == Sign::plus)
            t.add("good_links");
    }
}

inline void run_partition(const TrialContext& ctx, uint64_t trials, SplitMix64 rng, Tally& t) {
    std::map<std::string, std::vector<BellLabel>> pair_buffer;
    for (uint64_t i = 0; i < trials; ++i) {
        t.add("trials");
        switch (ctx.pipeline) {
            case McPipeline::conventional:
            case McPipeline::recycling:
            case McPipeline::full_mepp: {
                const GhzLabel& l1 = ctx.sampler->pick(rng);
                const GhzLabel& l2 = ctx.sampler->pick(rng);
                PureStateF product =
                    tensor(ghzF_on(ctx.parties, 1, l1), ghzF_on(ctx.parties, 2, l2));
                BranchWalk<double> walk(Cursor<double>{std::move(product), 1.0}, &rng, false);
                PipelineMode mode = ctx.pipeline == McPipeline::conventional
                                        ? PipelineMode::conventional
                                        : (ctx.pipeline == McPipeline::recycling
                                               ? PipelineMode::recycling
                                               : PipelineMode::combined);
                walk_purify(walk, ctx.parties, false, mode);
                const auto& leaf = walk.leaves().front();
                if (leaf.final->kind != BranchFinal::Kind::labeled) break;
                const auto& fin = *leaf.final;
                t.add("L:" + fin.str());
                if (fin.parties.size() == ctx.parties.size()) {
                    t.add("kept");
                    if (fin.label->mask == 0 && fin.label->sign == Sign::plus) t.add("good_kept");
                } else {
                    std::string key(fin.parties.begin(), fin.parties.end());
                    t.add("pairs");
                    t.add("P:" + key);
                    bool target = fin.label->mask == 0 && fin.label->sign == Sign::plus;
                    if (target) {
                        t.add("good_pairs");
                        t.add("G:" + key);
                    }
                    if (ctx.pipeline == McPipeline::full_mepp && fin.parties.size() == 2) {
                        pair_buffer[key].push_back(BellLabel::from_ghz(*fin.label));
                        link_buffered_pairs(pair_buffer, rng, t);
                    }
                }
                break;
            }
            case McPipeline::link: {
                const GhzLabel& l1 = ctx.sampler->pick(rng);
                const GhzLabel& l2 = ctx.b_sampler->pick(rng);
                PureStateF product =
                    tensor(ghzF_on(ctx.parties, 1, l1), ghzF_on(ctx.b_parties, 2, l2));
                BranchWalk<double> walk(Cursor<double>{std::move(product), 1.0}, &rng, false);
                walk_link(walk, ctx.parties, ctx.b_parties, ctx.junctions, false);
                const auto& leaf = walk.leaves().front();
                if (leaf.final->kind == BranchFinal::Kind::labeled) {
                    t.add("kept");
                    t.add("L:" + leaf.final->str());
                }
                break;
            }
            case McPipeline::phaseflip: {
                Sign s1 = rng.next_double() < ctx.p0 ? Sign::plus : Sign::minus;
                Sign s2 = rng.next_double() < ctx.p0 ? Sign::plus : Sign::minus;
                PureStateF c1 = ghzF(ctx.n, GhzLabel(ctx.n, 0, s1), 1).apply_hadamard_all();
                PureStateF c2 = ghzF(ctx.n, GhzLabel(ctx.n, 0, s2), 2).apply_hadamard_all();
                BranchWalk<double> walk(Cursor<double>{tensor(c1, c2), 1.0}, &rng, false);
                static thread_local std::map<uint8_t, PhaseCorrectionTable> tables;
                auto it = tables.find(ctx.n);
                if (it == tables.end())
                    it = tables.emplace(ctx.n, default_phase_corrections(ctx.n, ctx.parties)).first;
                walk_phaseflip(walk, ctx.parties, it->second, false);
                const auto& leaf = walk.leaves().front();
                if (leaf.final->kind == BranchFinal::Kind::labeled && leaf.final->label->mask == 0) {
                    t.add("kept");
                    if (leaf.final->label->sign == Sign::plus) t.add("good_kept");
                }
                break;
            }
        }
    }
}

// Enumerates one representative product in both numerics and returns the
// largest branch-probability deviation.
inline double float_mirror_check(const McConfig& cfg) {
    auto compare = [](BranchWalk<Sqrt2Rat>& we, BranchWalk<double>& wf) {
        auto& exact = we.leaves();
        auto& mirror = wf.leaves();
        if (exact.size() != mirror.size())
            throw std::logic_error("floating mirror enumerated a different branch set");
        double worst = 0;
        for (size_t i = 0; i < exact.size(); ++i) {
            if (exact[i].pattern != mirror[i].pattern || exact[i].outcomes != mirror[i].outcomes)
                throw std::logic_error("floating mirror branch bookkeeping diverged");
            double dev = std::abs(to_double(exact[i].prob) - mirror[i].prob);
            worst = std::max(worst, dev);
        }
        return worst;
    };

    TrialContext ctx = make_context(cfg);
    double worst = 0;
    auto run_pair = [&](const GhzLabel& l1, const GhzLabel& l2) {
        PureState pe = tensor(PureState::make_ghz_on(
                                  PhotonRegister([&] {
                                      std::vector<PhotonTag> t;
                                      for (char p : ctx.parties) t.emplace_back(p, 1);
                                      return t;
                                  }()),
                                  l1),
                              PureState::make_ghz_on(
                                  PhotonRegister([&] {
                                      std::vector<PhotonTag> t;
                                      for (char p : ctx.pipeline == McPipeline::link ? ctx.b_parties
                                                                                     : ctx.parties)
                                          t.emplace_back(p, 2);
                                      return t;
                                  }()),
                                  l2));
        PureStateF pf = tensor(ghzF_on(ctx.parties, 1, l1),
                               ghzF_on(ctx.pipeline == McPipeline::link ? ctx.b_parties : ctx.parties,
                                       2, l2));
        BranchWalk<Sqrt2Rat> we(Cursor<Sqrt2Rat>{std::move(pe), Rational(1)}, nullptr, false);
        BranchWalk<double> wf(Cursor<double>{std::move(pf), 1.0}, nullptr, false);
        switch (ctx.pipeline) {
            case McPipeline::conventional:
            case McPipeline::recycling:
            case McPipeline::full_mepp: {
                PipelineMode mode = ctx.pipeline == McPipeline::conventional
                                        ? PipelineMode::conventional
                                        : (ctx.pipeline == McPipeline::recycling
                                               ? PipelineMode::recycling
                                               : PipelineMode::combined);
                walk_purify(we, ctx.parties, false, mode);
                walk_purify(wf, ctx.parties, false, mode);
                break;
            }
            case McPipeline::link:
                walk_link(we, ctx.parties, ctx.b_parties, ctx.junctions, false);
                walk_link(wf, ctx.parties, ctx.b_parties, ctx.junctions, false);
                break;
            case McPipeline::phaseflip:
                break;
        }
        worst = std::max(worst, compare(we, wf));
    };

    if (ctx.pipeline == McPipeline::phaseflip) {
        auto table = default_phase_corrections(ctx.n, ctx.parties);
        for (Sign s2 : {Sign::plus, Sign::minus}) {
            PureState e1 = PureState::make_ghz(ctx.n, GhzLabel(ctx.n, 0, Sign::plus), 1).apply_hadamard_all();
            PureState e2 = PureState::make_ghz(ctx.n, GhzLabel(ctx.n, 0, s2), 2).apply_hadamard_all();
            PureStateF f1 = ghzF(ctx.n, GhzLabel(ctx.n, 0, Sign::plus), 1).apply_hadamard_all();
            PureStateF f2 = ghzF(ctx.n, GhzLabel(ctx.n, 0, s2), 2).apply_hadamard_all();
            BranchWalk<Sqrt2Rat> we(Cursor<Sqrt2Rat>{tensor(e1, e2), Rational(1)}, nullptr, false);
            BranchWalk<double> wf(Cursor<double>{tensor(f1, f2), 1.0}, nullptr, false);
            walk_phaseflip(we, ctx.parties, table, false);
            walk_phaseflip(wf, ctx.parties, table, false);
            worst = std::max(worst, compare(we, wf));
        }
        return worst;
    }

    const auto& labels = ctx.sampler->labels;
    run_pair(labels.front(), labels.front());
    if (labels.size() > 1) run_pair(labels.front(), labels[1]);
    if (ctx.pipeline == McPipeline::link && ctx.b_sampler->labels.size() > 1)
        run_pair(labels.front(), ctx.b_sampler->labels[1]);
    return worst;
}

inline std::vector<McStat> build_stats(const McConfig& cfg, const Tally& t) {
    std::vector<McStat> out;
    double N = t.get("trials");
    auto push = [&](const std::string& name, double v, double se) {
        out.push_back({name, v, se});
    };
    double kept = t.get("kept");
    switch (cfg.pipeline) {
        case McPipeline::conventional: {
            double y = kept / N;
            push("yield", y, binom_se(y, N));
            for (const auto& [k, v] : t.c)
                if (k.rfind("L:", 0) == 0 && kept > 0) {
                    double f = v / kept;
                    push("F[" + k.substr(2) + "]", f, binom_se(f, kept));
                }
            break;
        }
        case McPipeline::recycling: {
            double pairs = t.get("pairs");
            push("yield", pairs / N, binom_se(pairs / N, N));
            for (const auto& [k, v] : t.c) {
                if (k.rfind("P:", 0) != 0) continue;
                std::string key = k.substr(2);
                double w = v / N;
                push("W[" + key + "]", w, binom_se(w, N));
                double f = v > 0 ? t.get("G:" + key) / v : 0;
                push("F[" + key + "]", f, binom_se(f, v));
            }
            break;
        }
        case McPipeline::link: {
            push("yield", kept / N, binom_se(kept / N, N));
            for (const auto& [k, v] : t.c)
                if (k.rfind("L:", 0) == 0) {
                    double f = v / kept;
                    push("F[" + k.substr(2) + "]", f, binom_se(f, kept));
                }
            break;
        }
        case McPipeline::phaseflip: {
            double y = kept / N;
            push("yield", y, binom_se(y, N));
            double p = kept > 0 ? t.get("good_kept") / kept : 0;
            push("p0_prime", p, binom_se(p, kept));
            break;
        }
        case McPipeline::full_mepp: {
            double pairs = t.get("pairs"), links = t.get("links");
            double yc = kept / N;
            double y23 = 0.5 * pairs / N;
            double ye = yc + y23;
            // per-trial contribution is 1 (kept), 1/2 (pair), or 0
            double second_moment = (kept * 1.0 + pairs * 0.25) / N;
            double var = std::max(0.0, second_moment - ye * ye);
            push("Y_c", yc, binom_se(yc, N));
            push("Y_2to3", y23, 0.5 * binom_se(pairs / N, N));
            push("Y_e", ye, std::sqrt(var / N));
            // Conditional fidelities exist only where samples exist.
            if (kept > 0) push("F_c", t.get("good_kept") / kept, binom_se(t.get("good_kept") / kept, kept));
            if (pairs > 0)
                push("F_2", t.get("good_pairs") / pairs, binom_se(t.get("good_pairs") / pairs, pairs));
            if (links > 0)
                push("F_2to3", t.get("good_links") / links,
                     binom_se(t.get("good_links") / links, links));
            double outputs = kept + links;
            if (outputs > 0) {
                double fe = (t.get("good_kept") + t.get("good_links")) / outputs;
                push("F_e", fe, binom_se(fe, outputs));
            }
            break;
        }
    }
    return out;
}

} // namespace mcdetail

inline McEstimate mc_run(const McConfig& cfg) {
    cfg.validate();
    McEstimate est;
    est.trials = cfg.trials;
    est.float_mirror_max_dev = mcdetail::float_mirror_check(cfg);
    if (est.float_mirror_max_dev > 1e-12)
        throw std::logic_error("floating mirror deviates from the exact kernel");

    mcdetail::TrialContext ctx = mcdetail::make_context(cfg);
    const uint64_t parts = std::min<uint64_t>(mcdetail::kPartitions, cfg.trials);
    std::vector<mcdetail::Tally> tallies(parts);
    std::atomic<uint64_t> next{0};
    auto work = [&] {
        for (;;) {
            uint64_t p = next.fetch_add(1);
            if (p >= parts) return;
            uint64_t count = cfg.trials / parts + (p < cfg.trials % parts ? 1 : 0);
            mcdetail::run_partition(ctx, count, SplitMix64::substream(cfg.seed, p), tallies[p]);
        }
    };
    unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(parts));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    mcdetail::Tally total;
    for (const auto& t : tallies) total.merge(t);
    est.stats = mcdetail::build_stats(cfg, total);
    return est;
}

struct McSweepRow {
    Rational f0;
    McEstimate estimate;
};

// One estimate per grid point; per-point seeds derive from the master seed.
// The sweep parameter is the symmetric input fidelity F0 (conventional,
// recycling, full-mepp), the pair fidelity (link), or p0 (phaseflip).
inline std::vector<McSweepRow> mc_sweep(const std::vector<Rational>& grid, McPipeline pipeline,
                                        uint64_t trials, uint64_t seed, uint8_t n = 3) {
    if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
    std::vector<McSweepRow> rows;
    for (size_t i = 0; i < grid.size(); ++i) {
        McConfig cfg;
        cfg.pipeline = pipeline;
        cfg.trials = trials;
        cfg.seed = SplitMix64::substream(seed, 0x5eed0000ULL + i).state;
        cfg.n = n;
        switch (pipeline) {
            case McPipeline::conventional:
            case McPipeline::recycling:
            case McPipeline::full_mepp:
                cfg.ensemble = SymmetricNoiseParams(grid[i]).ensemble(n);
                break;
            case McPipeline::link:
                cfg.pair_fidelity = grid[i];
                break;
            case McPipeline::phaseflip:
                cfg.phase = PhaseEnsemble(grid[i]);
                break;
        }
        rows.push_back({grid[i], mc_run(cfg)});
    }
    return rows;
}

} // namespace ghzpurify
