// Exact branch enumeration of the purification pipelines on pure-state
// products: the conventional bit-flip round for any photon count in the
// enumeration budget, recycling extraction of entangled subsystems from
// cross-combinations, the entanglement link, and the phase-flip round with
// its correction table. Branch logs are retained so a failure pinpoints the
// parity/outcome path. The same walkers run on double amplitudes with a
// sampler attached; that is the Monte Carlo engine's kernel.

#pragma once

#include "ghzpurify/analytics.hpp"
#include "ghzpurify/ensemble.hpp"
#include "ghzpurify/qnd.hpp"
#include "ghzpurify/rng.hpp"
#include "ghzpurify/state.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghzpurify {

struct BranchFinal {
    enum class Kind : uint8_t { labeled, discarded, unentangled, unclassified };
    Kind kind = Kind::discarded;
    std::vector<char> parties;  // surviving parties for labeled branches
    std::optional<GhzLabel> label;

    static BranchFinal labeled(std::vector<char> parties, GhzLabel l) {
        return {Kind::labeled, std::move(parties), l};
    }
    static BranchFinal discarded() { return {Kind::discarded, {}, std::nullopt}; }
    static BranchFinal unentangled() { return {Kind::unentangled, {}, std::nullopt}; }
    static BranchFinal unclassified() { return {Kind::unclassified, {}, std::nullopt}; }

    std::string str() const {
        switch (kind) {
            case Kind::discarded: return "discarded";
            case Kind::unentangled: return "unentangled";
            case Kind::unclassified: return "unclassified";
            case Kind::labeled: {
                std::string s(parties.begin(), parties.end());
                return s + ":" + label->str();
            }
        }
        return "?";
    }
};

struct BranchRecord {
    std::vector<ParityOutcome> pattern;
    std::string outcomes;
    Rational probability;
    std::vector<std::pair<PhotonTag, char>> corrections;
    BranchFinal final;

    std::string line() const {
        std::string p;
        for (auto o : pattern) p += parity_char(o);
        return "pattern=" + p + " outcomes=" + (outcomes.empty() ? "-" : outcomes) +
               " p=" + rational_string(probability) + " final=" + final.str();
    }
};

// Correction table for the phase-flip round: parity pattern -> photons that
// receive a bit flip. Used for the mutation tests; the default entry for a
// kept pattern flips the copy-2 photon of every odd-parity party.
struct PhasePatternKey {
    std::vector<ParityOutcome> pattern;
    bool operator<(const PhasePatternKey& o) const { return pattern < o.pattern; }
};
using PhaseCorrectionTable = std::map<PhasePatternKey, std::vector<PhotonTag>>;

inline PhaseCorrectionTable default_phase_corrections(uint8_t n,
                                                      const std::vector<char>& parties) {
    PhaseCorrectionTable t;
    for (uint32_t bits = 0; bits < (1u << n); ++bits) {
        if (__builtin_popcount(bits) % 2) continue; // odd counts are discarded
        std::vector<ParityOutcome> pattern;
        std::vector<PhotonTag> fix;
        for (uint8_t i = 0; i < n; ++i) {
            bool odd = (bits >> i) & 1u;
            pattern.push_back(odd ? ParityOutcome::odd : ParityOutcome::even);
            if (odd) fix.emplace_back(parties[i], 2);
        }
        t[{pattern}] = fix;
    }
    return t;
}

struct RunOptions {
    bool record_branches = true;
    // Permutes the single-photon measurement order (the aggregate result must
    // not depend on it; a test exercises this).
    bool reverse_measurement_order = false;
    const PhaseCorrectionTable* phase_table = nullptr;
};

// --- branch walker ----------------------------------------------------------

template <class Num>
struct Cursor {
    Cursor(BasicPureState<Num> s, typename NumTraits<Num>::Prob p)
        : state(std::move(s)), prob(std::move(p)) {}

    BasicPureState<Num> state;
    typename NumTraits<Num>::Prob prob;
    std::vector<ParityOutcome> pattern;
    std::string outcomes;
    std::vector<std::pair<PhotonTag, char>> corrections;
    int minus_count = 0;
    uint32_t minus_positions = 0;
    bool canonical_ok = true;
    std::optional<BranchFinal> final;
};

// Expands branch stages over a frontier of cursors. With a sampler attached
// the frontier holds exactly one cursor and each stage picks one child with
// its conditional probability; without one, all children are kept.
template <class Num>
class BranchWalk {
public:
    BranchWalk(Cursor<Num> root, SplitMix64* sampler, bool record)
        : sampler_(sampler), record_(record) {
        frontier_.push_back(std::move(root));
    }

    bool record() const { return record_; }

    // fn: (const Cursor&) -> std::vector<Cursor> with absolute probabilities.
    template <class Fn>
    void step(Fn&& fn) {
        std::vector<Cursor<Num>> next;
        next.reserve(frontier_.size());
        for (auto& cur : frontier_) {
            if (cur.final) {
                next.push_back(std::move(cur));
                continue;
            }
            std::vector<Cursor<Num>> kids = fn(cur);
            if (kids.empty()) throw std::logic_error("branch stage produced no children");
            if (!sampler_) {
                for (auto& k : kids) next.push_back(std::move(k));
            } else {
                double r = sampler_->next_double() *
                           NumTraits<Num>::prob_to_double(cur.prob);
                size_t pick = kids.size() - 1;
                double acc = 0;
                for (size_t i = 0; i < kids.size(); ++i) {
                    acc += NumTraits<Num>::prob_to_double(kids[i].prob);
                    if (r < acc) {
                        pick = i;
                        break;
                    }
                }
                next.push_back(std::move(kids[pick]));
            }
        }
        frontier_ = std::move(next);
    }

    // Applies a deterministic in-place transformation to unfinished cursors.
    template <class Fn>
    void apply(Fn&& fn) {
        for (auto& cur : frontier_)
            if (!cur.final) fn(cur);
    }

    std::vector<Cursor<Num>>& leaves() { return frontier_; }

private:
    std::vector<Cursor<Num>> frontier_;
    SplitMix64* sampler_;
    bool record_;
};

namespace detail {

template <class Num>
std::vector<Cursor<Num>> parity_children(const Cursor<Num>& cur, const PhotonTag& a,
                                         const PhotonTag& b) {
    std::vector<Cursor<Num>> kids;
    for (auto& br : parity_project(cur.state, a, b)) {
        Cursor<Num> k = cur;
        k.state = std::move(br.post);
        k.prob = cur.prob * br.probability;
        k.pattern.push_back(br.outcome);
        kids.push_back(std::move(k));
    }
    return kids;
}

// Hadamard + Z measurement (the X basis up to outcome naming); `as_x` selects
// the +/- outcome characters and minus bookkeeping.
template <class Num>
std::vector<Cursor<Num>> measure_children(const Cursor<Num>& cur, const PhotonTag& t, bool as_x,
                                          uint32_t position_bit) {
    std::vector<Cursor<Num>> kids;
    auto branches = cur.state.measure_single(t, as_x ? MeasureBasis::X : MeasureBasis::Z);
    for (auto& br : branches) {
        Cursor<Num> k = cur;
        k.state = std::move(br.post);
        k.prob = cur.prob * br.probability;
        k.outcomes += br.outcome;
        if (br.outcome == 'V' || br.outcome == '-') {
            ++k.minus_count;
            k.minus_positions |= position_bit;
        }
        kids.push_back(std::move(k));
    }
    return kids;
}

inline std::vector<PhotonTag> maybe_reversed(std::vector<PhotonTag> tags, bool reversed) {
    if (reversed) std::reverse(tags.begin(), tags.end());
    return tags;
}

} // namespace detail

// --- conventional round and recycling ----------------------------------------
//
// Both start with per-party parity checks on a two-copy product. Uniform
// patterns (identity-combinations) feed the conventional round; mixed
// patterns feed recycling extraction. The combined mode runs both and is the
// Monte Carlo kernel behind the full protocol's efficiency estimates.

enum class PipelineMode : uint8_t { conventional, recycling, combined };

namespace detail {

inline std::pair<bool, bool> pattern_uniform(const std::vector<ParityOutcome>& pat) {
    bool all_even = true, all_odd = true;
    for (auto o : pat) (o == ParityOutcome::even ? all_odd : all_even) = false;
    return {all_even || all_odd, all_odd};
}

inline std::vector<char> pattern_survivors(const std::vector<ParityOutcome>& pattern,
                                           const std::vector<char>& parties) {
    std::vector<char> odd_set, even_set;
    for (size_t i = 0; i < pattern.size(); ++i)
        (pattern[i] == ParityOutcome::odd ? odd_set : even_set).push_back(parties[i]);
    return odd_set.size() > even_set.size() ? odd_set : even_set;
}

} // namespace detail

template <class Num>
void walk_purify(BranchWalk<Num>& walk, const std::vector<char>& parties, bool reversed,
                 PipelineMode mode) {
    const size_t n = parties.size();
    for (char p : parties)
        walk.step([&](const Cursor<Num>& cur) {
            return detail::parity_children(cur, PhotonTag(p, 1), PhotonTag(p, 2));
        });

    walk.apply([&](Cursor<Num>& cur) {
        auto [uniform, all_odd] = detail::pattern_uniform(cur.pattern);
        if (uniform) {
            if (mode == PipelineMode::recycling) {
                cur.final = BranchFinal::discarded();
                return;
            }
            if (all_odd)
                for (char p : parties) {
                    cur.state = cur.state.apply_pauli(PhotonTag(p, 2), Pauli::x);
                    cur.corrections.emplace_back(PhotonTag(p, 2), 'x');
                }
            for (char p : parties) cur.state = cur.state.apply_hadamard(PhotonTag(p, 2));
        } else {
            if (mode == PipelineMode::conventional) {
                cur.final = BranchFinal::discarded();
                return;
            }
            if (detail::pattern_survivors(cur.pattern, parties).size() < 2)
                cur.final = BranchFinal::unentangled();
        }
    });

    // Single-photon measurements, per-cursor order: parties alphabetical,
    // copy 2 before copy 1 where both leave. Aggregates must not depend on
    // the order; a test permutes it.
    for (size_t step_idx = 0; step_idx < 2 * n; ++step_idx) {
        walk.step([&](const Cursor<Num>& cur) -> std::vector<Cursor<Num>> {
            auto [uniform, all_odd] = detail::pattern_uniform(cur.pattern);
            std::vector<PhotonTag> order;
            bool as_x = !uniform;
            if (uniform) {
                for (char p : parties) order.emplace_back(p, 2);
            } else {
                auto survivors = detail::pattern_survivors(cur.pattern, parties);
                for (char p : parties) {
                    order.emplace_back(p, 2);
                    if (std::find(survivors.begin(), survivors.end(), p) == survivors.end())
                        order.emplace_back(p, 1);
                }
            }
            order = detail::maybe_reversed(std::move(order), reversed);
            if (step_idx >= order.size()) return {cur};
            return detail::measure_children(cur, order[step_idx], as_x, 0);
        });
    }

    walk.apply([&](Cursor<Num>& cur) {
        auto [uniform, all_odd] = detail::pattern_uniform(cur.pattern);
        std::vector<char> target = uniform ? parties : detail::pattern_survivors(cur.pattern, parties);
        if (cur.minus_count % 2) {
            PhotonTag first(target.front(), 1);
            cur.state = cur.state.apply_pauli(first, Pauli::z);
            cur.corrections.emplace_back(first, 'z');
        }
        auto label = classify_ghz(cur.state);
        cur.final = label ? BranchFinal::labeled(target, *label) : BranchFinal::unclassified();
    });
}

template <class Num>
void walk_conventional(BranchWalk<Num>& walk, const std::vector<char>& parties, bool reversed) {
    walk_purify(walk, parties, reversed, PipelineMode::conventional);
}

template <class Num>
void walk_recycling(BranchWalk<Num>& walk, const std::vector<char>& parties, bool reversed) {
    walk_purify(walk, parties, reversed, PipelineMode::recycling);
}

// --- entanglement link --------------------------------------------------------

template <class Num>
void walk_link(BranchWalk<Num>& walk, const std::vector<char>& a_parties,
               const std::vector<char>& b_parties, std::vector<char> junctions, bool reversed) {
    std::sort(junctions.begin(), junctions.end());
    char anchor = junctions.front();
    auto junction_order = detail::maybe_reversed(
        [&] {
            std::vector<PhotonTag> t;
            for (char j : junctions) t.emplace_back(j, 1);
            return t;
        }(),
        reversed);

    for (const auto& jt : junction_order)
        walk.step([&](const Cursor<Num>& cur) {
            auto kids = detail::parity_children(cur, PhotonTag(jt.party, 1), PhotonTag(jt.party, 2));
            return kids;
        });

    // Align the absorbed side at the anchor junction: bit-flip every absorbed
    // photon when the anchor parity came out odd.
    size_t anchor_idx = 0;
    for (size_t i = 0; i < junction_order.size(); ++i)
        if (junction_order[i].party == anchor) anchor_idx = i;
    walk.apply([&](Cursor<Num>& cur) {
        if (cur.pattern[anchor_idx] != ParityOutcome::odd) return;
        for (char p : b_parties) {
            cur.state = cur.state.apply_pauli(PhotonTag(p, 2), Pauli::x);
            cur.corrections.emplace_back(PhotonTag(p, 2), 'x');
        }
    });

    // Absorb the junction photons of the second subsystem.
    for (char j : junctions) {
        walk.apply([&](Cursor<Num>& cur) { cur.state = cur.state.apply_hadamard(PhotonTag(j, 2)); });
        walk.step([&](const Cursor<Num>& cur) {
            return detail::measure_children(cur, PhotonTag(j, 2), /*as_x=*/false, 0);
        });
    }

    std::vector<char> merged = a_parties;
    for (char p : b_parties)
        if (std::find(junctions.begin(), junctions.end(), p) == junctions.end()) merged.push_back(p);
    std::sort(merged.begin(), merged.end());

    walk.apply([&](Cursor<Num>& cur) {
        if (cur.minus_count % 2) {
            PhotonTag fix(anchor, 1);
            cur.state = cur.state.apply_pauli(fix, Pauli::z);
            cur.corrections.emplace_back(fix, 'z');
        }
        std::vector<PhotonTag> order;
        for (char p : merged) {
            bool from_a = std::find(a_parties.begin(), a_parties.end(), p) != a_parties.end();
            order.emplace_back(p, from_a ? 1 : 2);
        }
        cur.state = cur.state.reordered(order);
        auto label = classify_ghz(cur.state);
        cur.final = label ? BranchFinal::labeled(merged, *label) : BranchFinal::unclassified();
    });
}

// --- phase-flip round -----------------------------------------------------------

template <class Num>
void walk_phaseflip(BranchWalk<Num>& walk, const std::vector<char>& parties,
                    const PhaseCorrectionTable& table, bool reversed) {
    const uint8_t n = static_cast<uint8_t>(parties.size());
    for (char p : parties)
        walk.step([&](const Cursor<Num>& cur) {
            return detail::parity_children(cur, PhotonTag(p, 1), PhotonTag(p, 2));
        });

    walk.apply([&](Cursor<Num>& cur) {
        int odd = 0;
        for (auto o : cur.pattern)
            if (o == ParityOutcome::odd) ++odd;
        if (odd % 2) {
            cur.final = BranchFinal::discarded();
            return;
        }
        auto it = table.find({cur.pattern});
        if (it == table.end()) throw std::logic_error("missing phase correction entry");
        for (const auto& tag : it->second) {
            cur.state = cur.state.apply_pauli(tag, Pauli::x);
            cur.corrections.emplace_back(tag, 'x');
        }
        // The corrections are meant to restore the canonical identity-pattern
        // family: every term must now agree between the two copies.
        for (const auto& [label, amp] : cur.state.terms()) {
            uint32_t lo = label.bits & ((1u << n) - 1);
            uint32_t hi = label.bits >> n;
            if (lo != hi) {
                cur.canonical_ok = false;
                break;
            }
        }
    });

    auto order = detail::maybe_reversed(
        [&] {
            std::vector<PhotonTag> t;
            for (char p : parties) t.emplace_back(p, 2);
            return t;
        }(),
        reversed);
    for (size_t i = 0; i < order.size(); ++i) {
        // Position bit indexes the party so the sign fix can target the
        // minus-outcome photons.
        size_t party_index = static_cast<size_t>(
            std::find(parties.begin(), parties.end(), order[i].party) - parties.begin());
        walk.step([&, party_index](const Cursor<Num>& cur) {
            return detail::measure_children(cur, order[i], /*as_x=*/true,
                                            1u << party_index);
        });
    }

    walk.apply([&](Cursor<Num>& cur) {
        uint32_t r = cur.minus_positions;
        uint32_t all = (1u << n) - 1;
        if (__builtin_popcount(r) * 2 > n) r ^= all; // smaller equivalent set
        for (uint8_t i = 0; i < n; ++i)
            if ((r >> i) & 1u) {
                PhotonTag tag(parties[i], 1);
                cur.state = cur.state.apply_pauli(tag, Pauli::z);
                cur.corrections.emplace_back(tag, 'z');
            }
        for (char p : parties) cur.state = cur.state.apply_hadamard(PhotonTag(p, 1));
        auto label = classify_ghz(cur.state);
        cur.final = label ? BranchFinal::labeled(parties, *label) : BranchFinal::unclassified();
    });
}

// --- exact-run wrappers ------------------------------------------------------

struct ProtocolReport {
    Rational yield{0};
    GhzDiagonalEnsemble output;
    Rational discarded_weight{0};
    std::vector<BranchRecord> branches;
};

namespace detail {

inline BranchRecord record_of(const Cursor<Sqrt2Rat>& cur) {
    return {cur.pattern, cur.outcomes, cur.prob, cur.corrections, *cur.final};
}

inline void check_budget(uint8_t n, uint8_t lo, uint8_t hi) {
    if (n < lo || n > hi)
        throw std::invalid_argument("photon count " + std::to_string(n) +
                                    " outside the enumeration budget");
}

} // namespace detail

inline ProtocolReport run_conventional_bitflip(const GhzDiagonalEnsemble& e,
                                               const RunOptions& opts = {}) {
    detail::check_budget(e.n(), 2, 6);
    e.check_normalized();
    const auto& parties = e.parties();
    ProtocolReport report{Rational(0), GhzDiagonalEnsemble(e.n(), parties, false), Rational(0), {}};
    GhzDiagonalEnsemble raw(e.n(), parties, false);
    for (const auto& [l1, w1] : e.weights())
        for (const auto& [l2, w2] : e.weights()) {
            PureState product = tensor(PureState::make_ghz(e.n(), l1, 1, parties.front()),
                                       PureState::make_ghz(e.n(), l2, 2, parties.front()));
            BranchWalk<Sqrt2Rat> walk(Cursor<Sqrt2Rat>{std::move(product), w1 * w2}, nullptr,
                                      opts.record_branches);
            walk_conventional(walk, parties, opts.reverse_measurement_order);
            for (const auto& leaf : walk.leaves()) {
                if (leaf.final->kind == BranchFinal::Kind::labeled) {
                    report.yield += leaf.prob;
                    raw.add_weight(*leaf.final->label, leaf.prob);
                } else {
                    report.discarded_weight += leaf.prob;
                }
                if (opts.record_branches) report.branches.push_back(detail::record_of(leaf));
            }
        }
    report.output = raw.normalized();
    return report;
}

struct PatternSubsystem {
    std::vector<char> parties;
    GhzDiagonalEnsemble ensemble; // unnormalized absolute weights
    Rational unentangled_weight{0};
};

struct RecyclingReport {
    // Keyed by parity pattern string ("EEO"); aggregates also keyed by the
    // surviving party string ("AB").
    std::map<std::string, PatternSubsystem> by_pattern;
    std::map<std::string, GhzDiagonalEnsemble> by_parties;
    Rational recycled_weight{0};
    Rational identity_weight{0};
    Rational unentangled_weight{0};
    std::vector<BranchRecord> branches;

    BellDiagonalEnsemble pair(char x, char y) const {
        std::string key{x, y};
        auto it = by_parties.find(key);
        if (it == by_parties.end()) return BellDiagonalEnsemble(x, y, false);
        return BellDiagonalEnsemble::from_ghz(it->second);
    }
};

inline RecyclingReport run_recycling(const GhzDiagonalEnsemble& e, const RunOptions& opts = {}) {
    detail::check_budget(e.n(), 3, 6);
    e.check_normalized();
    const auto& parties = e.parties();
    RecyclingReport report;
    for (const auto& [l1, w1] : e.weights())
        for (const auto& [l2, w2] : e.weights()) {
            PureState product = tensor(PureState::make_ghz(e.n(), l1, 1, parties.front()),
                                       PureState::make_ghz(e.n(), l2, 2, parties.front()));
            BranchWalk<Sqrt2Rat> walk(Cursor<Sqrt2Rat>{std::move(product), w1 * w2}, nullptr,
                                      opts.record_branches);
            walk_recycling(walk, parties, opts.reverse_measurement_order);
            for (const auto& leaf : walk.leaves()) {
                std::string pattern_key;
                for (auto o : leaf.pattern) pattern_key += parity_char(o);
                switch (leaf.final->kind) {
                    case BranchFinal::Kind::labeled: {
                        report.recycled_weight += leaf.prob;
                        const auto& parts = leaf.final->parties;
                        std::string party_key(parts.begin(), parts.end());
                        auto ensure = [&](auto& map, const std::string& key) -> GhzDiagonalEnsemble& {
                            auto it = map.find(key);
                            if (it == map.end())
                                it = map.emplace(key, GhzDiagonalEnsemble(
                                                          static_cast<uint8_t>(parts.size()),
                                                          parts, false))
                                         .first;
                            return it->second;
                        };
                        if (report.by_pattern.find(pattern_key) == report.by_pattern.end())
                            report.by_pattern.emplace(
                                pattern_key,
                                PatternSubsystem{parts,
                                                 GhzDiagonalEnsemble(
                                                     static_cast<uint8_t>(parts.size()), parts,
                                                     false),
                                                 Rational(0)});
                        report.by_pattern.at(pattern_key).ensemble.add_weight(*leaf.final->label,
                                                                              leaf.prob);
                        ensure(report.by_parties, party_key).add_weight(*leaf.final->label, leaf.prob);
                        break;
                    }
                    case BranchFinal::Kind::discarded:
                        report.identity_weight += leaf.prob;
                        break;
                    case BranchFinal::Kind::unentangled: {
                        report.unentangled_weight += leaf.prob;
                        if (report.by_pattern.find(pattern_key) == report.by_pattern.end())
                            report.by_pattern.emplace(
                                pattern_key,
                                PatternSubsystem{{}, GhzDiagonalEnsemble(2, false), Rational(0)});
                        report.by_pattern.at(pattern_key).unentangled_weight += leaf.prob;
                        break;
                    }
                    case BranchFinal::Kind::unclassified:
                        report.unentangled_weight += leaf.prob;
                        break;
                }
                if (opts.record_branches) report.branches.push_back(detail::record_of(leaf));
            }
        }
    return report;
}

inline ProtocolReport run_link(const GhzDiagonalEnsemble& a, const GhzDiagonalEnsemble& b,
                               std::vector<char> junctions, const RunOptions& opts = {}) {
    a.check_normalized();
    b.check_normalized();
    // Junction validation mirrors the analytic operation.
    {
        std::set<char> pa(a.parties().begin(), a.parties().end());
        std::set<char> pb(b.parties().begin(), b.parties().end());
        std::set<char> shared;
        for (char c : pa)
            if (pb.count(c)) shared.insert(c);
        if (junctions.empty() || shared != std::set<char>(junctions.begin(), junctions.end()))
            throw std::invalid_argument("junction parties must be exactly the shared parties");
    }
    std::vector<char> merged = a.parties();
    for (char p : b.parties())
        if (std::find(junctions.begin(), junctions.end(), p) == junctions.end()) merged.push_back(p);
    std::sort(merged.begin(), merged.end());

    ProtocolReport report{Rational(0),
                          GhzDiagonalEnsemble(static_cast<uint8_t>(merged.size()), merged, false),
                          Rational(0),
                          {}};
    GhzDiagonalEnsemble raw(static_cast<uint8_t>(merged.size()), merged, false);
    for (const auto& [la, wa] : a.weights())
        for (const auto& [lb, wb] : b.weights()) {
            PureState pa = PureState::make_ghz_on(
                PhotonRegister([&] {
                    std::vector<PhotonTag> t;
                    for (char p : a.parties()) t.emplace_back(p, 1);
                    return t;
                }()),
                la);
            PureState pb = PureState::make_ghz_on(
                PhotonRegister([&] {
                    std::vector<PhotonTag> t;
                    for (char p : b.parties()) t.emplace_back(p, 2);
                    return t;
                }()),
                lb);
            BranchWalk<Sqrt2Rat> walk(Cursor<Sqrt2Rat>{tensor(pa, pb), wa * wb}, nullptr,
                                      opts.record_branches);
            walk_link(walk, a.parties(), b.parties(), junctions, opts.reverse_measurement_order);
            for (const auto& leaf : walk.leaves()) {
                if (leaf.final->kind == BranchFinal::Kind::labeled) {
                    report.yield += leaf.prob;
                    raw.add_weight(*leaf.final->label, leaf.prob);
                } else {
                    report.discarded_weight += leaf.prob;
                }
                if (opts.record_branches) report.branches.push_back(detail::record_of(leaf));
            }
        }
    report.output = raw.normalized();
    return report;
}

struct PhaseReport {
    Rational yield{0};
    PhaseEnsemble output;
    Rational discarded_weight{0};
    bool all_canonical = true;
    bool all_classified = true;
    std::vector<BranchRecord> branches;
};

inline PhaseReport run_phaseflip(const PhaseEnsemble& p, uint8_t n, const RunOptions& opts = {}) {
    detail::check_budget(n, 2, 5);
    auto parties = GhzDiagonalEnsemble::default_parties(n);
    PhaseCorrectionTable table =
        opts.phase_table ? *opts.phase_table : default_phase_corrections(n, parties);

    PhaseReport report;
    Rational plus_weight = 0, minus_weight = 0;
    const std::vector<std::pair<Sign, Rational>> inputs = {{Sign::plus, p.p0}, {Sign::minus, p.p1}};
    for (const auto& [s1, w1] : inputs)
        for (const auto& [s2, w2] : inputs) {
            if (w1 == 0 || w2 == 0) continue;
            PureState c1 = PureState::make_ghz(n, GhzLabel(n, 0, s1), 1).apply_hadamard_all();
            PureState c2 = PureState::make_ghz(n, GhzLabel(n, 0, s2), 2).apply_hadamard_all();
            BranchWalk<Sqrt2Rat> walk(Cursor<Sqrt2Rat>{tensor(c1, c2), w1 * w2}, nullptr,
                                      opts.record_branches);
            walk_phaseflip(walk, parties, table, opts.reverse_measurement_order);
            for (const auto& leaf : walk.leaves()) {
                if (leaf.final->kind == BranchFinal::Kind::labeled && leaf.final->label->mask == 0) {
                    report.yield += leaf.prob;
                    (leaf.final->label->sign == Sign::plus ? plus_weight : minus_weight) += leaf.prob;
                    if (!leaf.canonical_ok) report.all_canonical = false;
                } else if (leaf.final->kind == BranchFinal::Kind::discarded) {
                    report.discarded_weight += leaf.prob;
                } else {
                    report.all_classified = false;
                    report.discarded_weight += leaf.prob;
                }
                if (opts.record_branches) report.branches.push_back(detail::record_of(leaf));
            }
        }
    if (report.yield > 0)
        report.output = PhaseEnsemble(plus_weight / report.yield, minus_weight / report.yield);
    return report;
}

} // namespace ghzpurify
