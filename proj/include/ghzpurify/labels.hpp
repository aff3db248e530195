// Basis labels for polarization registers (0 = H, 1 = V) and the canonical
// labels of the GHZ and Bell bases. A GHZ basis state (|m> ± |m̄>)/sqrt(2) is
// identified by the flip mask of photons 2..N relative to photon 1; the
// representative with photon 1 unflipped is the canonical one, so a mask is
// an (N-1)-bit integer and the complement ambiguity never appears.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ghzpurify {

enum class Sign : uint8_t { plus, minus };

inline char sign_char(Sign s) { return s == Sign::plus ? '+' : '-'; }
inline Sign sign_mul(Sign x, Sign y) { return x == y ? Sign::plus : Sign::minus; }
inline Sign sign_flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }

// One computational basis label of an n-photon register. Bit i (LSB = photon
// 0 in register order) is 1 when that photon is V.
struct BasisLabel {
    uint32_t bits = 0;
    uint8_t n = 0;

    BasisLabel() = default;
    BasisLabel(uint32_t b, uint8_t count) : bits(b), n(count) {
        if (count > 31) throw std::invalid_argument("register too large");
        if (b >> count) throw std::invalid_argument("label bits exceed register size");
    }

    bool bit(unsigned i) const { return (bits >> i) & 1u; }
    uint32_t all_ones() const { return (n == 0) ? 0 : ((1u << n) - 1); }
    BasisLabel complement() const { return {bits ^ all_ones(), n}; }
    BasisLabel with_flip(unsigned i) const { return {bits ^ (1u << i), n}; }

    // Drops photon i; higher photons shift down one slot.
    BasisLabel without(unsigned i) const {
        uint32_t low = bits & ((1u << i) - 1);
        uint32_t high = (bits >> (i + 1)) << i;
        return {low | high, static_cast<uint8_t>(n - 1)};
    }

    int popcount() const { return __builtin_popcount(bits); }

    std::string str() const {
        std::string s(n, 'H');
        for (unsigned i = 0; i < n; ++i)
            if (bit(i)) s[i] = 'V';
        return s;
    }

    friend bool operator==(const BasisLabel& x, const BasisLabel& y) {
        return x.n == y.n && x.bits == y.bits;
    }
    friend bool operator<(const BasisLabel& x, const BasisLabel& y) {
        return x.n != y.n ? x.n < y.n : x.bits < y.bits;
    }
};

// Canonical label of an n-photon GHZ basis state. The paper's four-photon
// Phi_m indexing coincides with `mask`; for three photons the error-position
// indexing of the main text maps through ghz3_mask_from_error_index below.
struct GhzLabel {
    uint8_t n = 2;
    uint32_t mask = 0; // (n-1)-bit flip pattern of photons 2..n, MSB = photon 2
    Sign sign = Sign::plus;

    GhzLabel() = default;
    GhzLabel(uint8_t photons, uint32_t m, Sign s) : n(photons), mask(m), sign(s) {
        if (photons < 2) throw std::invalid_argument("GHZ label needs at least 2 photons");
        if (photons > 31) throw std::invalid_argument("register too large");
        if (m >> (photons - 1))
            throw std::invalid_argument("non-canonical GHZ mask (photon 1 must be unflipped)");
    }

    // Canonical representative with photon 1 = H.
    BasisLabel pattern() const {
        uint32_t bits = 0;
        for (unsigned j = 1; j < n; ++j)
            if ((mask >> (n - 1 - j)) & 1u) bits |= 1u << j;
        return {bits, n};
    }

    static GhzLabel from_pattern(BasisLabel p, Sign s) {
        if (p.n < 2) throw std::invalid_argument("GHZ label needs at least 2 photons");
        if (p.bit(0)) p = p.complement();
        uint32_t m = 0;
        for (unsigned j = 1; j < p.n; ++j)
            if (p.bit(j)) m |= 1u << (p.n - 1 - j);
        return {p.n, m, s};
    }

    std::string mask_string() const {
        std::string s(static_cast<size_t>(n - 1), '0');
        for (unsigned i = 0; i + 1 < n; ++i)
            if ((mask >> (n - 2 - i)) & 1u) s[i] = '1';
        return s;
    }

    std::string str() const { return mask_string() + ":" + sign_char(sign); }

    friend bool operator==(const GhzLabel& x, const GhzLabel& y) {
        return x.n == y.n && x.mask == y.mask && x.sign == y.sign;
    }
    friend bool operator<(const GhzLabel& x, const GhzLabel& y) {
        if (x.n != y.n) return x.n < y.n;
        if (x.mask != y.mask) return x.mask < y.mask;
        return x.sign < y.sign;
    }
};

inline GhzLabel parse_ghz_label(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos || colon + 2 != text.size())
        throw std::invalid_argument("bad label: " + text);
    char sc = text[colon + 1];
    if (sc != '+' && sc != '-') throw std::invalid_argument("bad label sign: " + text);
    std::string maskbits = text.substr(0, colon);
    uint32_t m = 0;
    for (char c : maskbits) {
        if (c != '0' && c != '1') throw std::invalid_argument("bad label mask: " + text);
        m = (m << 1) | static_cast<uint32_t>(c - '0');
    }
    return {static_cast<uint8_t>(maskbits.size() + 1), m, sc == '+' ? Sign::plus : Sign::minus};
}

// The four Bell states as the two-photon GHZ special case.
struct BellLabel {
    enum class Kind : uint8_t { phi, psi };
    Kind kind = Kind::phi;
    Sign sign = Sign::plus;

    BellLabel() = default;
    BellLabel(Kind k, Sign s) : kind(k), sign(s) {}

    GhzLabel ghz() const { return {2, kind == Kind::psi ? 1u : 0u, sign}; }
    static BellLabel from_ghz(const GhzLabel& g) {
        if (g.n != 2) throw std::invalid_argument("not a two-photon label");
        return {g.mask ? Kind::psi : Kind::phi, g.sign};
    }

    std::string str() const {
        return std::string(kind == Kind::phi ? "phi" : "psi") + sign_char(sign);
    }

    friend bool operator==(const BellLabel& x, const BellLabel& y) {
        return x.kind == y.kind && x.sign == y.sign;
    }
    friend bool operator<(const BellLabel& x, const BellLabel& y) {
        if (x.kind != y.kind) return x.kind < y.kind;
        return x.sign < y.sign;
    }
};

inline BellLabel bell_phi_plus() { return {BellLabel::Kind::phi, Sign::plus}; }
inline BellLabel bell_phi_minus() { return {BellLabel::Kind::phi, Sign::minus}; }
inline BellLabel bell_psi_plus() { return {BellLabel::Kind::psi, Sign::plus}; }
inline BellLabel bell_psi_minus() { return {BellLabel::Kind::psi, Sign::minus}; }

// Three-photon indexing of the main text: Phi_i means a bit flip on photon i.
// Phi_1's canonical representative is HVV (mask 11b), Phi_2 -> HVH, Phi_3 -> HHV.
inline uint32_t ghz3_mask_from_error_index(int i) {
    switch (i) {
        case 0: return 0;
        case 1: return 3;
        case 2: return 2;
        case 3: return 1;
        default: throw std::invalid_argument("three-photon index must be 0..3");
    }
}

inline int ghz3_error_index_from_mask(uint32_t mask) {
    switch (mask) {
        case 0: return 0;
        case 3: return 1;
        case 2: return 2;
        case 1: return 3;
        default: throw std::invalid_argument("three-photon mask must be 0..3");
    }
}

} // namespace ghzpurify
