// GHZ-diagonal and Bell-diagonal ensembles with exact rational weights.
// Unnormalized ensembles are first class (recycling output tables are stated
// without normalization); the flag plus total_weight() carry the bookkeeping.
//
// Text format (one ensemble per stream):
//   n=<count> normalized=<bool>
//   label=<mask>:<sign> weight=<p/q>
// with <mask> the (n-1)-bit flip pattern of photons 2..n.

#pragma once

#include "ghzpurify/labels.hpp"
#include "ghzpurify/rational.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghzpurify {

class GhzDiagonalEnsemble {
public:
    explicit GhzDiagonalEnsemble(uint8_t n, bool normalized = true)
        : n_(n), normalized_(normalized), parties_(default_parties(n)) {
        if (n < 2) throw std::invalid_argument("ensemble needs at least 2 photons");
    }

    GhzDiagonalEnsemble(uint8_t n, std::vector<char> parties, bool normalized = true)
        : n_(n), normalized_(normalized), parties_(std::move(parties)) {
        if (parties_.size() != n_) throw std::invalid_argument("party list size mismatch");
    }

    static std::vector<char> default_parties(uint8_t n) {
        std::vector<char> p;
        for (uint8_t i = 0; i < n; ++i) p.push_back(static_cast<char>('A' + i));
        return p;
    }

    uint8_t n() const { return n_; }
    const std::vector<char>& parties() const { return parties_; }
    bool is_normalized_flagged() const { return normalized_; }
    const std::map<GhzLabel, Rational>& weights() const { return weights_; }

    Rational weight(const GhzLabel& l) const {
        auto it = weights_.find(l);
        return it == weights_.end() ? Rational(0) : it->second;
    }

    void set_weight(const GhzLabel& l, Rational w) {
        if (l.n != n_) throw std::invalid_argument("label size mismatch");
        if (w < 0) throw std::invalid_argument("negative ensemble weight");
        if (w == 0)
            weights_.erase(l);
        else
            weights_[l] = std::move(w);
    }

    void add_weight(const GhzLabel& l, const Rational& w) { set_weight(l, weight(l) + w); }

    Rational total_weight() const {
        Rational t = 0;
        for (const auto& [l, w] : weights_) t += w;
        return t;
    }

    bool empty() const { return weights_.empty(); }

    void check_normalized() const {
        if (!normalized_ || total_weight() != 1)
            throw std::invalid_argument("ensemble is not normalized");
    }

    GhzDiagonalEnsemble normalized() const {
        Rational t = total_weight();
        if (t == 0) throw std::invalid_argument("cannot normalize an empty ensemble");
        GhzDiagonalEnsemble out(n_, parties_, true);
        for (const auto& [l, w] : weights_) out.set_weight(l, w / t);
        return out;
    }

    // Weight of the target label Phi_0^+ (fidelity when normalized).
    Rational fidelity() const { return weight(GhzLabel(n_, 0, Sign::plus)); }

    friend bool operator==(const GhzDiagonalEnsemble& x, const GhzDiagonalEnsemble& y) {
        return x.n_ == y.n_ && x.weights_ == y.weights_;
    }

private:
    uint8_t n_;
    bool normalized_;
    std::vector<char> parties_;
    std::map<GhzLabel, Rational> weights_;
};

class BellDiagonalEnsemble {
public:
    BellDiagonalEnsemble(char party_a, char party_b, bool normalized = true)
        : parties_{party_a, party_b}, normalized_(normalized) {}

    const std::pair<char, char>& parties() const { return parties_; }
    bool is_normalized_flagged() const { return normalized_; }
    const std::map<BellLabel, Rational>& weights() const { return weights_; }

    Rational weight(const BellLabel& l) const {
        auto it = weights_.find(l);
        return it == weights_.end() ? Rational(0) : it->second;
    }

    void set_weight(const BellLabel& l, Rational w) {
        if (w < 0) throw std::invalid_argument("negative ensemble weight");
        if (w == 0)
            weights_.erase(l);
        else
            weights_[l] = std::move(w);
    }

    void add_weight(const BellLabel& l, const Rational& w) { set_weight(l, weight(l) + w); }

    Rational total_weight() const {
        Rational t = 0;
        for (const auto& [l, w] : weights_) t += w;
        return t;
    }

    bool empty() const { return weights_.empty(); }

    BellDiagonalEnsemble normalized() const {
        Rational t = total_weight();
        if (t == 0) throw std::invalid_argument("cannot normalize an empty ensemble");
        BellDiagonalEnsemble out(parties_.first, parties_.second, true);
        for (const auto& [l, w] : weights_) out.set_weight(l, w / t);
        return out;
    }

    GhzDiagonalEnsemble ghz() const {
        GhzDiagonalEnsemble g(2, {parties_.first, parties_.second}, normalized_);
        for (const auto& [l, w] : weights_) g.set_weight(l.ghz(), w);
        return g;
    }

    static BellDiagonalEnsemble from_ghz(const GhzDiagonalEnsemble& g) {
        if (g.n() != 2) throw std::invalid_argument("not a two-photon ensemble");
        BellDiagonalEnsemble out(g.parties()[0], g.parties()[1], g.is_normalized_flagged());
        for (const auto& [l, w] : g.weights()) out.set_weight(BellLabel::from_ghz(l), w);
        return out;
    }

    friend bool operator==(const BellDiagonalEnsemble& x, const BellDiagonalEnsemble& y) {
        return x.weights_ == y.weights_;
    }

private:
    std::pair<char, char> parties_;
    bool normalized_;
    std::map<BellLabel, Rational> weights_;
};

// Probabilities of Psi+ / Psi- (equivalently Phi_0^± after the basis change).
struct PhaseEnsemble {
    Rational p0{1};
    Rational p1{0};

    PhaseEnsemble() = default;
    PhaseEnsemble(Rational q0, Rational q1) : p0(std::move(q0)), p1(std::move(q1)) {
        if (p0 < 0 || p1 < 0 || p0 + p1 != 1)
            throw std::invalid_argument("phase ensemble must have p0 + p1 = 1");
    }
    explicit PhaseEnsemble(const Rational& q0) : PhaseEnsemble(q0, 1 - q0) {}

    friend bool operator==(const PhaseEnsemble& x, const PhaseEnsemble& y) {
        return x.p0 == y.p0 && x.p1 == y.p1;
    }
};

// Symmetric channel noise: F1 = F2 = F3 = (1 - F0)/3.
struct SymmetricNoiseParams {
    Rational f0{1};

    SymmetricNoiseParams() = default;
    explicit SymmetricNoiseParams(Rational f) : f0(std::move(f)) {
        if (f0 < 0 || f0 > 1) throw std::invalid_argument("F0 must lie in [0, 1]");
    }

    Rational f_other() const { return (1 - f0) / 3; }

    GhzDiagonalEnsemble ensemble(uint8_t n = 3) const {
        GhzDiagonalEnsemble e(n);
        uint32_t labels = 1u << (n - 1);
        e.set_weight(GhzLabel(n, 0, Sign::plus), f0);
        Rational rest = labels > 1 ? (1 - f0) / (labels - 1) : Rational(0);
        for (uint32_t m = 1; m < labels; ++m) e.set_weight(GhzLabel(n, m, Sign::plus), rest);
        return e;
    }
};

// Three-photon ensemble from the main text's (F0, F1, F2, F3) with F_i the
// probability of a bit flip on photon i.
inline GhzDiagonalEnsemble ghz3_from_error_weights(const std::vector<Rational>& f,
                                                   bool normalized = true) {
    if (f.size() != 4) throw std::invalid_argument("expected four weights");
    GhzDiagonalEnsemble e(3, normalized);
    for (int i = 0; i < 4; ++i)
        e.set_weight(GhzLabel(3, ghz3_mask_from_error_index(i), Sign::plus), f[i]);
    return e;
}

// Four-photon ensemble from the appendix's f''_m vector (mask order).
inline GhzDiagonalEnsemble ghz4_from_mask_weights(const std::vector<Rational>& f,
                                                  bool normalized = true) {
    if (f.size() != 8) throw std::invalid_argument("expected eight weights");
    GhzDiagonalEnsemble e(4, normalized);
    for (uint32_t m = 0; m < 8; ++m) e.set_weight(GhzLabel(4, m, Sign::plus), f[m]);
    return e;
}

inline void write_ensemble(std::ostream& os, const GhzDiagonalEnsemble& e) {
    os << "n=" << static_cast<int>(e.n()) << " normalized=" << (e.is_normalized_flagged() ? "true" : "false")
       << "\n";
    for (const auto& [l, w] : e.weights())
        os << "label=" << l.str() << " weight=" << rational_string(w) << "\n";
}

inline std::string ensemble_string(const GhzDiagonalEnsemble& e) {
    std::ostringstream os;
    write_ensemble(os, e);
    return os.str();
}

inline GhzDiagonalEnsemble read_ensemble(std::istream& is) {
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("ensemble line " + std::to_string(lineno) + ": " + why);
    };
    int n = -1;
    bool normalized = true;
    GhzDiagonalEnsemble out(2);
    bool have_header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        if (!have_header) {
            std::string norm_tok;
            ls >> tok >> norm_tok;
            if (tok.rfind("n=", 0) != 0 || norm_tok.rfind("normalized=", 0) != 0)
                fail("expected 'n=<count> normalized=<bool>'");
            n = std::stoi(tok.substr(2));
            std::string b = norm_tok.substr(11);
            if (b != "true" && b != "false") fail("bad normalized flag '" + b + "'");
            normalized = b == "true";
            if (n < 2 || n > 31) fail("photon count out of range");
            out = GhzDiagonalEnsemble(static_cast<uint8_t>(n), normalized);
            have_header = true;
            continue;
        }
        std::string wtok;
        ls >> tok >> wtok;
        if (tok.rfind("label=", 0) != 0 || wtok.rfind("weight=", 0) != 0)
            fail("expected 'label=<mask>:<sign> weight=<p/q>'");
        GhzLabel l = parse_ghz_label(tok.substr(6));
        if (l.n != n) fail("label width does not match n");
        Rational w = parse_rational(wtok.substr(7));
        if (w < 0) fail("negative weight");
        out.add_weight(l, w);
    }
    if (!have_header) throw std::invalid_argument("ensemble stream has no header line");
    if (normalized && out.total_weight() != 1)
        throw std::invalid_argument("ensemble flagged normalized but weights sum to " +
                                    rational_string(out.total_weight()));
    return out;
}

inline GhzDiagonalEnsemble parse_ensemble(const std::string& text) {
    std::istringstream is(text);
    return read_ensemble(is);
}

} // namespace ghzpurify
