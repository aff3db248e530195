// Parity-check QND detector models. The coherent probe is abstracted to the
// three-way phase map (HH -> +theta, VV -> -theta, mixed -> 0); the detector
// readout only ever exposes the sign-blind even/odd outcome. A CNOT-based
// detector with identical outcome statistics serves as a cross-validation
// oracle and is never used inside the protocol pipelines.

#pragma once

#include "ghzpurify/state.hpp"

#include <stdexcept>
#include <vector>

namespace ghzpurify {

enum class ParityOutcome : uint8_t { even, odd };

inline char parity_char(ParityOutcome p) { return p == ParityOutcome::even ? 'E' : 'O'; }

struct ProbePhase {
    enum class Shift : uint8_t { plus_theta, minus_theta, zero };
    Shift shift = Shift::zero;

    // The X-quadrature readout cannot tell +theta from -theta; this is the
    // only thing a party learns.
    ParityOutcome parity() const {
        return shift == Shift::zero ? ParityOutcome::odd : ParityOutcome::even;
    }
};

inline ProbePhase probe_phase(const BasisLabel& pair) {
    if (pair.n != 2) throw std::invalid_argument("probe_phase expects a two-photon label");
    if (!pair.bit(0) && !pair.bit(1)) return {ProbePhase::Shift::plus_theta};  // HH
    if (pair.bit(0) && pair.bit(1)) return {ProbePhase::Shift::minus_theta};   // VV
    return {ProbePhase::Shift::zero};                                          // HV / VH
}

template <class Num>
struct ParityBranch {
    ParityOutcome outcome;
    typename NumTraits<Num>::Prob probability;
    BasicPureState<Num> post;
};

// Projects onto the even span {HH, VV} / odd span {HV, VH} of two designated
// photons. Coherence within each span is preserved and no photon is removed.
template <class Num>
std::vector<ParityBranch<Num>> parity_project(const BasicPureState<Num>& state,
                                              const PhotonTag& a, const PhotonTag& b) {
    using Traits = NumTraits<Num>;
    if (a == b) throw std::invalid_argument("parity check needs two distinct photons");
    size_t i = state.photon_register().index_of(a);
    size_t j = state.photon_register().index_of(b);
    std::vector<ParityBranch<Num>> out;
    for (ParityOutcome want : {ParityOutcome::even, ParityOutcome::odd}) {
        typename Traits::Prob p{};
        typename BasicPureState<Num>::TermMap kept;
        for (const auto& [label, amp] : state.terms()) {
            bool even = label.bit(static_cast<unsigned>(i)) == label.bit(static_cast<unsigned>(j));
            if (even != (want == ParityOutcome::even)) continue;
            p = p + Traits::squared(amp);
            kept[label] = amp;
        }
        if (kept.empty() || Traits::negligible_prob(p)) continue;
        if (!Traits::prob_is_one(p))
            for (auto& [label, amp] : kept) amp = Traits::renormalize(amp, p);
        out.push_back({want, p, BasicPureState<Num>(state.photon_register(), std::move(kept))});
    }
    return out;
}

// CNOT-based parity oracle: CNOT(control, target), Z-projection of the target
// (kept in the register), and a compensating bit flip on the target when the
// outcome is odd. Outcome statistics match parity_project exactly; the post
// states agree up to the applied local operations.
template <class Num>
std::vector<ParityBranch<Num>> parity_via_cnot(const BasicPureState<Num>& state,
                                               const PhotonTag& control, const PhotonTag& target) {
    using Traits = NumTraits<Num>;
    if (control == target) throw std::invalid_argument("parity check needs two distinct photons");
    auto after = state.apply_cnot(control, target);
    size_t t = after.photon_register().index_of(target);
    std::vector<ParityBranch<Num>> out;
    for (ParityOutcome want : {ParityOutcome::even, ParityOutcome::odd}) {
        bool bit = want == ParityOutcome::odd; // target carries control XOR target
        typename Traits::Prob p{};
        typename BasicPureState<Num>::TermMap kept;
        for (const auto& [label, amp] : after.terms()) {
            if (label.bit(static_cast<unsigned>(t)) != bit) continue;
            p = p + Traits::squared(amp);
            kept[label] = amp;
        }
        if (kept.empty() || Traits::negligible_prob(p)) continue;
        if (!Traits::prob_is_one(p))
            for (auto& [label, amp] : kept) amp = Traits::renormalize(amp, p);
        BasicPureState<Num> post(after.photon_register(), std::move(kept));
        if (want == ParityOutcome::odd) post = post.apply_pauli(target, Pauli::x);
        out.push_back({want, p, std::move(post)});
    }
    return out;
}

// Ideal detector wrapper. The readout error rate is a stub that must stay at
// exact zero; the channel is modeled lossless and noiseless.
struct ParityDetector {
    Rational readout_error{0};

    template <class Num>
    std::vector<ParityBranch<Num>> measure(const BasicPureState<Num>& state, const PhotonTag& a,
                                           const PhotonTag& b) const {
        if (readout_error != 0)
            throw std::invalid_argument("nonzero detector readout error is not modeled");
        return parity_project(state, a, b);
    }
};

} // namespace ghzpurify
