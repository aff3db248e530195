// Closed-form ensemble calculus: the conventional purification round, the
// recycling extraction tables, the entanglement link algebra, the phase-flip
// round, channel ingestion, and the efficiency/fidelity record behind the
// protocol comparison curves. Everything is exact rational arithmetic; the
// branch-enumeration engine (protocol.hpp) independently reproduces each
// operation and the tests require exact agreement.

#pragma once

#include "ghzpurify/ensemble.hpp"
#include "ghzpurify/qnd.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

namespace ghzpurify {

struct RoundResult {
    GhzDiagonalEnsemble output; // normalized
    Rational yield;
};

// One conventional bit-flip round: both copies must show the same flip mask.
// Sign weights convolve (s1*s2 = out sign); for +-only ensembles this is the
// squared-weight update w(L)^2 / sum_k w(k)^2 with yield sum_k w(k)^2.
inline RoundResult conventional_round(const GhzDiagonalEnsemble& e) {
    e.check_normalized();
    GhzDiagonalEnsemble out(e.n(), e.parties(), true);
    Rational yield = 0;
    for (const auto& [l1, w1] : e.weights())
        for (const auto& [l2, w2] : e.weights()) {
            if (l1.mask != l2.mask) continue;
            yield += w1 * w2;
            out.add_weight(GhzLabel(e.n(), l1.mask, sign_mul(l1.sign, l2.sign)), w1 * w2);
        }
    if (yield == 0) throw std::invalid_argument("round keeps nothing");
    GhzDiagonalEnsemble norm(e.n(), e.parties(), true);
    for (const auto& [l, w] : out.weights()) norm.set_weight(l, w / yield);
    return {norm, yield};
}

// One phase-flip round: p0' = p0^2 / (p0^2 + p1^2), yield p0^2 + p1^2.
inline std::pair<PhaseEnsemble, Rational> phase_round(const PhaseEnsemble& p) {
    Rational denom = p.p0 * p.p0 + p.p1 * p.p1;
    return {PhaseEnsemble(p.p0 * p.p0 / denom, p.p1 * p.p1 / denom), denom};
}

// The efficiency/fidelity quantities of the three-photon comparison under
// symmetric noise.
struct YieldFidelityRecord {
    Rational y_c;     // conventional-round yield
    Rational p_3to2;  // probability a group yields a two-photon pair
    Rational y_2to3;  // three-photon systems recovered via the link
    Rational y_e;     // total efficiency
    Rational f_c;     // fidelity after the conventional round
    Rational f_2;     // fidelity of recycled pairs
    Rational f_2to3;  // fidelity of linked three-photon systems
    Rational f_e;     // average fidelity of all outputs
};

inline YieldFidelityRecord yields_and_fidelities(const SymmetricNoiseParams& params) {
    const Rational& f0 = params.f0;
    YieldFidelityRecord r;
    r.y_c = (1 - 2 * f0 + 4 * f0 * f0) / 3;
    r.p_3to2 = (2 + 2 * f0 - 4 * f0 * f0) / 3;
    r.y_2to3 = r.p_3to2 / 2;
    r.y_e = r.y_c + r.y_2to3;
    r.f_c = 3 * f0 * f0 / (1 - 2 * f0 + 4 * f0 * f0);
    r.f_2 = 3 * f0 / (1 + 2 * f0);
    r.f_2to3 = 9 * f0 * f0 / (1 + 4 * f0 + 4 * f0 * f0);
    r.f_e = (r.f_c * r.y_c + r.f_2to3 * r.y_2to3) / r.y_e;
    return r;
}

// --- Recycling extraction -------------------------------------------------
//
// A mixed parity pattern T (the odd parties) pins the cross-combinations
// whose canonical patterns differ exactly on T (or its complement). The
// surviving subsystem is the larger of T and its complement (ties go to the
// even parties); measuring out the rest leaves a GHZ state over the
// survivors labeled by the restricted pattern, with the sign fixed by the
// count of |-> outcomes.

struct SubsystemExtract {
    std::vector<char> parties;     // surviving parties (register order)
    GhzDiagonalEnsemble ensemble;  // unnormalized, absolute probability weights
    Rational unentangled_weight{0};

    Rational entangled_weight() const { return ensemble.total_weight(); }
};

namespace detail {

inline uint32_t odd_set_bits(const std::vector<ParityOutcome>& pattern) {
    uint32_t t = 0;
    for (size_t i = 0; i < pattern.size(); ++i)
        if (pattern[i] == ParityOutcome::odd) t |= 1u << i;
    return t;
}

inline std::vector<size_t> bit_positions(uint32_t set, size_t n) {
    std::vector<size_t> out;
    for (size_t i = 0; i < n; ++i)
        if ((set >> i) & 1u) out.push_back(i);
    return out;
}

inline BasisLabel restrict_label(const BasisLabel& l, const std::vector<size_t>& keep) {
    uint32_t bits = 0;
    for (size_t j = 0; j < keep.size(); ++j)
        if (l.bit(static_cast<unsigned>(keep[j]))) bits |= 1u << j;
    return {bits, static_cast<uint8_t>(keep.size())};
}

} // namespace detail

// Closed-form extraction for one mixed parity pattern.
inline SubsystemExtract recycle_pattern_extract(const GhzDiagonalEnsemble& e,
                                                const std::vector<ParityOutcome>& pattern) {
    e.check_normalized();
    size_t n = e.n();
    if (pattern.size() != n) throw std::invalid_argument("pattern size mismatch");
    uint32_t all = (1u << n) - 1;
    uint32_t odd = detail::odd_set_bits(pattern);
    if (odd == 0 || odd == all)
        throw std::invalid_argument("uniform parity patterns belong to the conventional round");

    uint32_t even = all & ~odd;
    uint32_t survivors = (__builtin_popcount(odd) > __builtin_popcount(even)) ? odd : even;
    auto keep = detail::bit_positions(survivors, n);
    // Cross terms pairing copy-1 pattern x with copy-2 pattern y show odd
    // parity exactly where x and y differ; canonical patterns (photon 1
    // unflipped) realize the version of T not containing photon 1.
    uint32_t delta = (odd & 1u) ? even : odd;

    std::vector<char> parties;
    for (size_t i : keep) parties.push_back(e.parties()[i]);

    SubsystemExtract out{parties,
                         GhzDiagonalEnsemble(static_cast<uint8_t>(std::max<size_t>(keep.size(), 2)),
                                             keep.size() >= 2 ? parties
                                                              : GhzDiagonalEnsemble::default_parties(2),
                                             false),
                         Rational(0)};

    for (const auto& [l1, w1] : e.weights())
        for (const auto& [l2, w2] : e.weights()) {
            if ((l1.pattern().bits ^ l2.pattern().bits) != delta) continue;
            Rational prob = w1 * w2 / 2; // this ordered pair splits between T and ~T
            if (keep.size() < 2) {
                out.unentangled_weight += prob;
                continue;
            }
            BasisLabel sub = detail::restrict_label(l1.pattern(), keep);
            out.ensemble.add_weight(GhzLabel::from_pattern(sub, sign_mul(l1.sign, l2.sign)), prob);
        }
    return out;
}

// The appendix's four-photon extraction for a 1- or 2-odd pattern (patterns
// with three odd entries fold to the complementary 1-odd case; uniform
// patterns are rejected).
inline SubsystemExtract four_photon_recycle(const std::vector<Rational>& f_mask,
                                            std::vector<ParityOutcome> pattern) {
    if (pattern.size() != 4) throw std::invalid_argument("expected a four-party pattern");
    int odd = 0;
    for (auto p : pattern)
        if (p == ParityOutcome::odd) ++odd;
    if (odd == 0 || odd == 4)
        throw std::invalid_argument("uniform parity patterns belong to the conventional round");
    if (odd == 3)
        for (auto& p : pattern)
            p = (p == ParityOutcome::odd) ? ParityOutcome::even : ParityOutcome::odd;
    return recycle_pattern_extract(ghz4_from_mask_weights(f_mask), pattern);
}

// Table of recycled two-photon ensembles for three parties (unnormalized):
// rho_AB = 2 F0F3 phi+ + 2 F1F2 psi+, and cyclic, in the main text's
// error-position indexing.
struct RecyclePairTables {
    BellDiagonalEnsemble ab;
    BellDiagonalEnsemble ac;
    BellDiagonalEnsemble bc;

    Rational total_weight() const {
        return ab.total_weight() + ac.total_weight() + bc.total_weight();
    }

    const BellDiagonalEnsemble& pair(char x, char y) const {
        if ((x == 'A' && y == 'B') || (x == 'B' && y == 'A')) return ab;
        if ((x == 'A' && y == 'C') || (x == 'C' && y == 'A')) return ac;
        if ((x == 'B' && y == 'C') || (x == 'C' && y == 'B')) return bc;
        throw std::invalid_argument("unknown pair");
    }
};

inline RecyclePairTables recycle_pair_tables(const GhzDiagonalEnsemble& e) {
    if (e.n() != 3) throw std::invalid_argument("pair tables are defined for three parties");
    e.check_normalized();
    RecyclePairTables t{BellDiagonalEnsemble('A', 'B', false), BellDiagonalEnsemble('A', 'C', false),
                        BellDiagonalEnsemble('B', 'C', false)};
    // Each two-party subsystem collects two complementary mixed patterns.
    const std::vector<std::pair<std::vector<ParityOutcome>, BellDiagonalEnsemble*>> cases = {
        {{ParityOutcome::even, ParityOutcome::even, ParityOutcome::odd}, &t.ab},
        {{ParityOutcome::odd, ParityOutcome::odd, ParityOutcome::even}, &t.ab},
        {{ParityOutcome::even, ParityOutcome::odd, ParityOutcome::even}, &t.ac},
        {{ParityOutcome::odd, ParityOutcome::even, ParityOutcome::odd}, &t.ac},
        {{ParityOutcome::odd, ParityOutcome::even, ParityOutcome::even}, &t.bc},
        {{ParityOutcome::even, ParityOutcome::odd, ParityOutcome::odd}, &t.bc},
    };
    for (const auto& [pattern, dest] : cases) {
        SubsystemExtract ex = recycle_pattern_extract(e, pattern);
        for (const auto& [l, w] : ex.ensemble.weights()) dest->add_weight(BellLabel::from_ghz(l), w);
    }
    return t;
}

inline RecyclePairTables recycle_pair_tables(const std::vector<Rational>& f_error_index) {
    return recycle_pair_tables(ghz3_from_error_weights(f_error_index));
}

// --- Entanglement link ----------------------------------------------------
//
// Fuses two GHZ-diagonal subsystems sharing the given junction parties (one
// photon each side per junction). Label algebra: the absorbed side is aligned
// at the anchor junction (alphabetically first); the parities of any further
// junctions are then determined and need no correction. phi-like x phi-like
// injects no flips; psi components inject a flip on the absorbed side. Signs
// multiply. The junction list order never matters.
inline GhzDiagonalEnsemble entanglement_link(const GhzDiagonalEnsemble& a,
                                             const GhzDiagonalEnsemble& b,
                                             const std::vector<char>& junctions) {
    a.check_normalized();
    b.check_normalized();
    if (junctions.empty()) throw std::invalid_argument("link needs at least one junction party");

    std::set<char> pa(a.parties().begin(), a.parties().end());
    std::set<char> pb(b.parties().begin(), b.parties().end());
    std::set<char> shared;
    for (char c : pa)
        if (pb.count(c)) shared.insert(c);
    if (shared != std::set<char>(junctions.begin(), junctions.end()))
        throw std::invalid_argument("junction parties must be exactly the shared parties");

    std::vector<char> absorbed_new; // b parties that survive into the output
    for (char c : b.parties())
        if (!shared.count(c)) absorbed_new.push_back(c);

    std::vector<char> merged = a.parties();
    merged.insert(merged.end(), absorbed_new.begin(), absorbed_new.end());
    std::sort(merged.begin(), merged.end());

    auto index_in = [](const std::vector<char>& v, char c) {
        return static_cast<size_t>(std::find(v.begin(), v.end(), c) - v.begin());
    };

    char anchor = *std::min_element(junctions.begin(), junctions.end());

    GhzDiagonalEnsemble out(static_cast<uint8_t>(merged.size()), merged, true);
    for (const auto& [la, wa] : a.weights())
        for (const auto& [lb, wb] : b.weights()) {
            BasisLabel alpha = la.pattern(), beta = lb.pattern();
            bool flip = alpha.bit(static_cast<unsigned>(index_in(a.parties(), anchor))) !=
                        beta.bit(static_cast<unsigned>(index_in(b.parties(), anchor)));
            uint32_t bits = 0;
            for (size_t i = 0; i < merged.size(); ++i) {
                char party = merged[i];
                bool bit;
                if (pa.count(party))
                    bit = alpha.bit(static_cast<unsigned>(index_in(a.parties(), party)));
                else
                    bit = beta.bit(static_cast<unsigned>(index_in(b.parties(), party))) ^ flip;
                if (bit) bits |= 1u << i;
            }
            BasisLabel fused(bits, static_cast<uint8_t>(merged.size()));
            out.add_weight(GhzLabel::from_pattern(fused, sign_mul(la.sign, lb.sign)), wa * wb);
        }
    return out;
}

inline GhzDiagonalEnsemble entanglement_link(const BellDiagonalEnsemble& a,
                                             const BellDiagonalEnsemble& b, char junction) {
    return entanglement_link(a.ghz(), b.ghz(), {junction});
}

// --- Channel ingestion ------------------------------------------------------

struct ChannelOutput {
    GhzDiagonalEnsemble flips;  // +-sign GHZ-diagonal weights
    PhaseEnsemble phase;
};

// Independent per-photon sigma_x with probability p and sigma_z with
// probability q applied to Phi_0^+.
inline ChannelOutput channel_to_ensemble(uint8_t n, const Rational& p, const Rational& q) {
    if (p < 0 || p > Rational(1, 2) || q < 0 || q > Rational(1, 2))
        throw std::invalid_argument("flip rates must lie in [0, 1/2]");
    GhzDiagonalEnsemble e(n);
    for (uint32_t u = 0; u < (1u << n); ++u) {
        int flips = __builtin_popcount(u);
        Rational prob = 1;
        for (int i = 0; i < flips; ++i) prob *= p;
        for (int i = flips; i < n; ++i) prob *= (1 - p);
        e.add_weight(GhzLabel::from_pattern(BasisLabel(u, n), Sign::plus), prob);
    }
    Rational even_minus_odd = 1; // (1-2q)^n
    for (int i = 0; i < n; ++i) even_minus_odd *= (1 - 2 * q);
    Rational p1 = (1 - even_minus_odd) / 2;
    return {std::move(e), PhaseEnsemble(1 - p1, p1)};
}

} // namespace ghzpurify
