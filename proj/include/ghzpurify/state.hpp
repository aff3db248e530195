// Sparse pure states over polarization registers, templated on the amplitude
// ring: Sqrt2Rat for the exact engines, double for the Monte Carlo mirror.
// All operations are pure functions on immutable values; every constructed
// state is checked to have squared-amplitude sum exactly one (or within
// tolerance in the floating mirror).

#pragma once

#include "ghzpurify/labels.hpp"
#include "ghzpurify/register.hpp"
#include "ghzpurify/sqrt2.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace ghzpurify {

enum class Pauli : uint8_t { x, z };
enum class MeasureBasis : uint8_t { Z, X };

template <class Num>
class BasicPureState {
public:
    using Traits = NumTraits<Num>;
    using Prob = typename Traits::Prob;
    using TermMap = std::map<BasisLabel, Num>;

    BasicPureState(PhotonRegister reg, TermMap terms)
        : reg_(std::move(reg)), terms_(std::move(terms)) {
        prune();
        check_normalized();
    }

    const PhotonRegister& photon_register() const { return reg_; }
    const TermMap& terms() const { return terms_; }
    uint8_t n() const { return static_cast<uint8_t>(reg_.size()); }

    // (|m> ± |m̄>)/sqrt(2) on a fresh register, parties first_party.. ,
    // all photons tagged with the given copy index.
    static BasicPureState make_ghz(uint8_t n, const GhzLabel& label, uint8_t copy = 1,
                                   char first_party = 'A') {
        return make_ghz_on(PhotonRegister::party_run(n, copy, first_party), label);
    }

    static BasicPureState make_ghz_on(PhotonRegister reg, const GhzLabel& label) {
        if (label.n != reg.size()) throw std::invalid_argument("label size mismatch");
        BasisLabel m = label.pattern();
        TermMap t;
        Num amp = Traits::div_sqrt2(Traits::one());
        t[m] = amp;
        t[m.complement()] = label.sign == Sign::plus ? amp : -amp;
        return BasicPureState(std::move(reg), std::move(t));
    }

    static BasicPureState basis_state(PhotonRegister reg, BasisLabel label) {
        if (label.n != reg.size()) throw std::invalid_argument("label size mismatch");
        TermMap t;
        t[label] = Traits::one();
        return BasicPureState(std::move(reg), std::move(t));
    }

    BasicPureState apply_pauli(const PhotonTag& photon, Pauli which) const {
        size_t i = reg_.index_of(photon);
        TermMap t;
        for (const auto& [label, amp] : terms_) {
            if (which == Pauli::x)
                t[label.with_flip(static_cast<unsigned>(i))] = amp;
            else
                t[label] = label.bit(static_cast<unsigned>(i)) ? -amp : amp;
        }
        return BasicPureState(reg_, std::move(t));
    }

    // H -> (H+V)/sqrt(2), V -> (H-V)/sqrt(2) on one photon.
    BasicPureState apply_hadamard(const PhotonTag& photon) const {
        size_t i = reg_.index_of(photon);
        TermMap t;
        for (const auto& [label, amp] : terms_) {
            Num half = Traits::div_sqrt2(amp);
            BasisLabel l0 = label.bit(static_cast<unsigned>(i)) ? label.with_flip(static_cast<unsigned>(i)) : label;
            BasisLabel l1 = l0.with_flip(static_cast<unsigned>(i));
            add_term(t, l0, half);
            add_term(t, l1, label.bit(static_cast<unsigned>(i)) ? -half : half);
        }
        return BasicPureState(reg_, std::move(t));
    }

    BasicPureState apply_hadamard_all() const {
        BasicPureState s = *this;
        for (const auto& tag : reg_.photons()) s = s.apply_hadamard(tag);
        return s;
    }

    BasicPureState apply_cnot(const PhotonTag& control, const PhotonTag& target) const {
        size_t c = reg_.index_of(control), t = reg_.index_of(target);
        if (c == t) throw std::invalid_argument("control and target must differ");
        TermMap out;
        for (const auto& [label, amp] : terms_) {
            BasisLabel l = label.bit(static_cast<unsigned>(c)) ? label.with_flip(static_cast<unsigned>(t)) : label;
            out[l] = amp;
        }
        return BasicPureState(reg_, std::move(out));
    }

    struct MeasureBranch {
        char outcome; // 'H'/'V' for Z, '+'/'-' for X
        Prob probability;
        BasicPureState post;
    };

    // All outcome branches with exact probabilities summing to one; the
    // measured photon leaves the register. X is Hadamard-then-Z internally.
    std::vector<MeasureBranch> measure_single(const PhotonTag& photon, MeasureBasis basis) const {
        if (basis == MeasureBasis::X) {
            auto branches = apply_hadamard(photon).measure_single(photon, MeasureBasis::Z);
            for (auto& b : branches) b.outcome = (b.outcome == 'H') ? '+' : '-';
            return branches;
        }
        size_t i = reg_.index_of(photon);
        std::vector<MeasureBranch> out;
        for (bool v : {false, true}) {
            Prob p{};
            TermMap kept;
            for (const auto& [label, amp] : terms_) {
                if (label.bit(static_cast<unsigned>(i)) != v) continue;
                p = p + Traits::squared(amp);
                kept[label.without(static_cast<unsigned>(i))] = amp;
            }
            if (kept.empty() || Traits::negligible_prob(p)) continue;
            if (!Traits::prob_is_one(p))
                for (auto& [label, amp] : kept) amp = Traits::renormalize(amp, p);
            out.push_back(MeasureBranch{v ? 'V' : 'H', p, BasicPureState(reg_.without(i), std::move(kept))});
        }
        return out;
    }

    // Rebuilds the state with photons listed in `order` (a permutation of the
    // current register), renumbering every basis label accordingly.
    BasicPureState reordered(const std::vector<PhotonTag>& order) const {
        if (order.size() != reg_.size()) throw std::invalid_argument("bad photon order");
        std::vector<size_t> src;
        src.reserve(order.size());
        for (const auto& t : order) src.push_back(reg_.index_of(t));
        TermMap out;
        for (const auto& [label, amp] : terms_) {
            uint32_t bits = 0;
            for (size_t j = 0; j < src.size(); ++j)
                if (label.bit(static_cast<unsigned>(src[j]))) bits |= 1u << j;
            out[BasisLabel(bits, label.n)] = amp;
        }
        return BasicPureState(PhotonRegister(order), std::move(out));
    }

    std::string ket_string() const {
        std::string s;
        bool first = true;
        for (const auto& [label, amp] : terms_) {
            std::string a = Traits::str(amp);
            bool negative = !a.empty() && a[0] == '-';
            if (negative) a = a.substr(1);
            if (first)
                s += negative ? "-" : "";
            else
                s += negative ? " - " : " + ";
            if (a != "1") s += a + " ";
            s += "|" + label.str() + "\xE2\x9F\xA9";
            first = false;
        }
        return s.empty() ? "0" : s;
    }

    friend bool operator==(const BasicPureState& x, const BasicPureState& y) {
        return x.reg_ == y.reg_ && x.terms_ == y.terms_;
    }

private:
    static void add_term(TermMap& t, const BasisLabel& l, const Num& amp) {
        auto it = t.find(l);
        if (it == t.end()) {
            t.emplace(l, amp);
        } else {
            it->second += amp;
            if (Traits::is_zero(it->second)) t.erase(it);
        }
    }

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = Traits::is_zero(it->second) ? terms_.erase(it) : std::next(it);
    }

    void check_normalized() const {
        if (terms_.empty()) throw std::logic_error("state has no terms");
        Prob p{};
        for (const auto& [label, amp] : terms_) {
            if (label.n != reg_.size()) throw std::logic_error("label width mismatch");
            p = p + Traits::squared(amp);
        }
        if (!Traits::prob_is_one(p)) throw std::logic_error("state is not normalized");
    }

    PhotonRegister reg_;
    TermMap terms_;
};

using PureState = BasicPureState<Sqrt2Rat>;
using PureStateF = BasicPureState<double>;

template <class Num>
BasicPureState<Num> tensor(const BasicPureState<Num>& x, const BasicPureState<Num>& y) {
    auto reg = PhotonRegister::concatenated(x.photon_register(), y.photon_register());
    typename BasicPureState<Num>::TermMap t;
    for (const auto& [lx, ax] : x.terms())
        for (const auto& [ly, ay] : y.terms()) {
            uint32_t bits = lx.bits | (ly.bits << lx.n);
            t[BasisLabel(bits, static_cast<uint8_t>(lx.n + ly.n))] = ax * ay;
        }
    return BasicPureState<Num>(std::move(reg), std::move(t));
}

namespace detail {
inline bool overlap_close_to_one(double o) { return o > 1.0 - 1e-12; }
} // namespace detail

// Returns the GHZ label whose basis state has squared overlap one with the
// given state (exactly in the exact ring, within 1e-12 for doubles).
template <class Num>
std::optional<GhzLabel> classify_ghz(const BasicPureState<Num>& state) {
    using Traits = NumTraits<Num>;
    if (state.n() < 2 || state.terms().size() != 2) return std::nullopt;
    auto it = state.terms().begin();
    const auto& [l0, a0] = *it;
    const auto& [l1, a1] = *std::next(it);
    if (!(l1 == l0.complement())) return std::nullopt;
    // overlap with (|l0> ± |l1>)/sqrt(2): |(a0 ± a1)/sqrt(2)|^2
    for (Sign s : {Sign::plus, Sign::minus}) {
        Num combo = (s == Sign::plus) ? a0 + a1 : a0 - a1;
        auto overlap = Traits::squared(Traits::div_sqrt2(combo));
        if (Traits::prob_to_double(overlap) <= 0.5) continue;
        bool exact_one = Traits::prob_is_one(overlap);
        if constexpr (std::is_same_v<Num, double>) {
            if (!detail::overlap_close_to_one(overlap)) continue;
        } else {
            if (!exact_one) continue;
        }
        // (|l0> + s|l1>) matches; from_pattern folds to the canonical
        // representative (a complement fold only changes the global phase).
        return GhzLabel::from_pattern(l0, s);
    }
    return std::nullopt;
}

template <class Num>
std::optional<BellLabel> classify_bell(const BasicPureState<Num>& state) {
    if (state.n() != 2) return std::nullopt;
    auto g = classify_ghz(state);
    if (!g) return std::nullopt;
    return BellLabel::from_ghz(*g);
}

} // namespace ghzpurify
