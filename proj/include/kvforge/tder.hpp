#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kvforge/assoc.hpp"
#include "kvforge/bch.hpp"
#include "kvforge/config.hpp"
#include "kvforge/cyclic.hpp"
#include "kvforge/io.hpp"
#include "kvforge/lie.hpp"
#include "kvforge/rational.hpp"

namespace kvforge {

// Coefficients of the central abelian part a_n: what canonicalization
// strips off the single-letter diagonal of a tuple.
struct APart {
    std::vector<Rat> coefficients;

    explicit APart(int n) : coefficients(n, Rat(0)) {}

    bool is_zero() const {
        for (const auto& c : coefficients)
            if (!kvforge::is_zero(c)) return false;
        return true;
    }
};

// A tangential derivation in tuple form: x_k -> [x_k, a_k]. Stored as
// the canonical quotient representative, with the coefficient of the
// single-letter word x_k stripped from slot k (that direction acts
// trivially and spans the a_n kernel).
class TangentialDerivation {
  public:
    TangentialDerivation(TruncationConfig config, std::vector<LieSeries> tuple,
                         APart* stripped = nullptr)
        : config_(std::move(config)), tuple_(std::move(tuple)) {
        if (static_cast<int>(tuple_.size()) != config_.n_generators)
            throw std::invalid_argument("tuple arity must match strand count");
        for (const auto& entry : tuple_) require_same_config(config_, entry.config());
        if (stripped) *stripped = APart(config_.n_generators);
        for (int k = 0; k < config_.n_generators; ++k) {
            Rat c = tuple_[k].coefficient(Word{k});
            if (kvforge::is_zero(c)) continue;
            if (stripped) stripped->coefficients[k] = c;
            tuple_[k].add_term(Word{k}, -c);
        }
    }

    static TangentialDerivation zero(const TruncationConfig& config) {
        return TangentialDerivation(config,
                                    std::vector<LieSeries>(config.n_generators, LieSeries::zero(config)));
    }

    const TruncationConfig& config() const { return config_; }
    const std::vector<LieSeries>& tuple() const { return tuple_; }
    const LieSeries& entry(int k) const { return tuple_.at(k); }
    bool is_zero() const {
        for (const auto& e : tuple_)
            if (!e.is_zero()) return false;
        return true;
    }

    // Minimal entry degree; applying the derivation raises degree by at
    // least this much.
    int min_degree() const {
        int m = config_.max_degree + 1;
        for (const auto& e : tuple_) m = std::min(m, e.min_degree());
        return m;
    }

    TangentialDerivation degree_part(int d) const {
        std::vector<LieSeries> t;
        t.reserve(tuple_.size());
        for (const auto& e : tuple_) t.push_back(e.degree_part(d));
        return TangentialDerivation(config_, std::move(t));
    }

    long term_count_at(int d) const {
        long c = 0;
        for (const auto& e : tuple_)
            for (const auto& [w, q] : e.terms())
                if (static_cast<int>(w.size()) == d) ++c;
        return c;
    }

    TangentialDerivation truncated(int new_max_degree) const {
        TruncationConfig c(config_.n_generators, new_max_degree, config_.generator_names);
        std::vector<LieSeries> t;
        t.reserve(tuple_.size());
        for (const auto& e : tuple_) t.push_back(e.truncated(new_max_degree));
        return TangentialDerivation(c, std::move(t));
    }

    TangentialDerivation& operator+=(const TangentialDerivation& o) {
        require_same_config(config_, o.config_);
        for (int k = 0; k < config_.n_generators; ++k) tuple_[k] += o.tuple_[k];
        return *this;
    }
    TangentialDerivation& operator-=(const TangentialDerivation& o) {
        require_same_config(config_, o.config_);
        for (int k = 0; k < config_.n_generators; ++k) tuple_[k] -= o.tuple_[k];
        return *this;
    }
    TangentialDerivation& operator*=(const Rat& c) {
        for (auto& e : tuple_) e *= c;
        return *this;
    }

    friend TangentialDerivation operator+(TangentialDerivation a, const TangentialDerivation& b) {
        return a += b;
    }
    friend TangentialDerivation operator-(TangentialDerivation a, const TangentialDerivation& b) {
        return a -= b;
    }
    friend TangentialDerivation operator*(TangentialDerivation a, const Rat& c) { return a *= c; }
    friend TangentialDerivation operator*(const Rat& c, TangentialDerivation a) { return a *= c; }
    friend TangentialDerivation operator-(TangentialDerivation a) { return a *= Rat(-1); }

    bool operator==(const TangentialDerivation& o) const {
        return config_ == o.config_ && tuple_ == o.tuple_;
    }
    bool operator!=(const TangentialDerivation& o) const { return !(*this == o); }

  private:
    TruncationConfig config_;
    std::vector<LieSeries> tuple_;
};

// t^{i,j}: x_j in slot i, x_i in slot j (1-based, i < j).
inline TangentialDerivation t_embed(const TruncationConfig& config, int i, int j) {
    if (i < 1 || j <= i || j > config.n_generators)
        throw std::invalid_argument("t_embed requires 1 <= i < j <= n");
    std::vector<LieSeries> tuple(config.n_generators, LieSeries::zero(config));
    tuple[i - 1] = LieSeries::generator(config, j - 1);
    tuple[j - 1] = LieSeries::generator(config, i - 1);
    return TangentialDerivation(config, std::move(tuple));
}

// Leibniz extension of the derivation to the free associative algebra:
// one letter at a time is replaced by [x_i, a_i].
inline AssocSeries apply_assoc(const TangentialDerivation& u, const AssocSeries& a) {
    require_same_config(u.config(), a.config());
    const int n = u.config().n_generators;
    std::vector<AssocSeries> images;  // embed([x_i, a_i])
    images.reserve(n);
    for (int i = 0; i < n; ++i) {
        AssocSeries xi = AssocSeries::generator(u.config(), i);
        AssocSeries ai = embed(u.entry(i));
        images.push_back(xi * ai - ai * xi);
    }
    AssocSeries out(a.config());
    for (const auto& [w, c] : a.terms()) {
        for (std::size_t pos = 0; pos < w.size(); ++pos) {
            const AssocSeries& mid = images[w[pos]];
            if (mid.is_zero()) continue;
            Word prefix(w.begin(), w.begin() + pos);
            Word suffix(w.begin() + pos + 1, w.end());
            for (const auto& [m, q] : mid.terms()) {
                Word word = prefix;
                word.insert(word.end(), m.begin(), m.end());
                word.insert(word.end(), suffix.begin(), suffix.end());
                out.add_term(word, c * q);
            }
        }
    }
    return out;
}

inline LieSeries apply(const TangentialDerivation& u, const LieSeries& a) {
    require_same_config(u.config(), a.config());
    return lie_from_assoc(apply_assoc(u, embed(a)));
}

// Action on cyclic words, computed on representatives; commutes with
// trace by the Leibniz rule.
inline CyclicSeries apply_cyc(const TangentialDerivation& u, const CyclicSeries& c) {
    require_same_config(u.config(), c.config());
    AssocSeries rep(c.config());
    for (const auto& [w, q] : c.terms()) rep.add_term(w, q);
    CyclicSeries out = trace(apply_assoc(u, rep));
    return c.mod_linear() ? quotient_linear(out) : out;
}

// [u,v](x_k) = u(v(x_k)) - v(u(x_k)); in tuple form the k-th entry is
// u(b_k) - v(a_k) + [a_k, b_k], re-canonicalized.
inline TangentialDerivation tder_bracket(const TangentialDerivation& u,
                                         const TangentialDerivation& v) {
    require_same_config(u.config(), v.config());
    std::vector<LieSeries> tuple;
    tuple.reserve(u.config().n_generators);
    for (int k = 0; k < u.config().n_generators; ++k)
        tuple.push_back(apply(u, v.entry(k)) - apply(v, u.entry(k)) +
                        bracket(u.entry(k), v.entry(k)));
    return TangentialDerivation(u.config(), std::move(tuple));
}

// Strand insertion and doubling. The descriptor is the paper-style
// superscript: one comma-separated token per old strand, e.g. "2,3"
// (insert an empty strand first), "1,23" (double the second strand).
// Doubling substitutes the sum of the two new generators everywhere.
inline TangentialDerivation coface(const TangentialDerivation& u, const std::string& spec) {
    const int n = u.config().n_generators;
    const int m = n + 1;
    if (n > 9) throw std::invalid_argument("coface descriptors support up to 9 strands");
    auto tokens = io::split_on(spec, ',');
    if (static_cast<int>(tokens.size()) != n)
        throw std::invalid_argument("coface descriptor needs one token per strand: " + spec);

    std::vector<std::vector<int>> token_indices(n);  // 1-based new indices
    std::vector<int> covered;
    int doubled_tokens = 0;
    for (int k = 0; k < n; ++k) {
        const std::string& t = tokens[k];
        if (t.empty() || t.size() > 2) throw std::invalid_argument("bad coface token: " + t);
        for (char ch : t) {
            if (!std::isdigit(static_cast<unsigned char>(ch)))
                throw std::invalid_argument("bad coface token: " + t);
            int idx = ch - '0';
            if (idx < 1 || idx > m) throw std::invalid_argument("coface index out of range: " + t);
            token_indices[k].push_back(idx);
            covered.push_back(idx);
        }
        if (t.size() == 2) {
            ++doubled_tokens;
            if (token_indices[k][1] != token_indices[k][0] + 1)
                throw std::invalid_argument("doubled strands must be adjacent: " + t);
        }
    }
    for (std::size_t i = 1; i < covered.size(); ++i)
        if (covered[i] <= covered[i - 1])
            throw std::invalid_argument("coface indices must be strictly increasing: " + spec);
    const bool doubling = doubled_tokens == 1 && static_cast<int>(covered.size()) == m;
    const bool insertion = doubled_tokens == 0 && static_cast<int>(covered.size()) == n;
    if (!doubling && !insertion)
        throw std::invalid_argument("coface descriptor must insert or double exactly one strand: " +
                                    spec);

    TruncationConfig big(m, u.config().max_degree);
    // old generator j goes to the sum of its token's new generators
    std::vector<LieSeries> args;
    args.reserve(n);
    for (int j = 0; j < n; ++j) {
        LieSeries s = LieSeries::zero(big);
        for (int idx : token_indices[j]) s += LieSeries::generator(big, idx - 1);
        args.push_back(std::move(s));
    }
    std::vector<LieSeries> tuple(m, LieSeries::zero(big));
    for (int k = 0; k < n; ++k) {
        if (u.entry(k).is_zero()) continue;
        LieSeries moved = substitute(u.entry(k), args);
        for (int idx : token_indices[k]) tuple[idx - 1] = moved;
    }
    return TangentialDerivation(big, std::move(tuple));
}

// Group element of TAut_n = exp(tder_n), stored by its truncated log.
class TAutElement {
  public:
    explicit TAutElement(TangentialDerivation log_part) : log_(std::move(log_part)) {}

    static TAutElement identity(const TruncationConfig& config) {
        return TAutElement(TangentialDerivation::zero(config));
    }

    static TAutElement exp(TangentialDerivation u) { return TAutElement(std::move(u)); }

    const TruncationConfig& config() const { return log_.config(); }
    const TangentialDerivation& log() const { return log_; }
    bool is_identity() const { return log_.is_zero(); }

    bool operator==(const TAutElement& o) const { return log_ == o.log_; }
    bool operator!=(const TAutElement& o) const { return !(*this == o); }

  private:
    TangentialDerivation log_;
};

inline LieSeries exp_apply(const TAutElement& f, const LieSeries& a) {
    require_same_config(f.config(), a.config());
    LieSeries result = a;
    LieSeries term = a;
    Rat factorial(1);
    for (int k = 1; k <= f.config().max_degree; ++k) {
        term = apply(f.log(), term);
        if (term.is_zero()) break;
        factorial *= k;
        result += term * (Rat(1) / factorial);
    }
    return result;
}

inline AssocSeries exp_apply_assoc(const TAutElement& f, const AssocSeries& a) {
    require_same_config(f.config(), a.config());
    AssocSeries result = a;
    AssocSeries term = a;
    Rat factorial(1);
    for (int k = 1; k <= f.config().max_degree; ++k) {
        term = apply_assoc(f.log(), term);
        if (term.is_zero()) break;
        factorial *= k;
        result += term * (Rat(1) / factorial);
    }
    return result;
}

inline CyclicSeries exp_apply_cyc(const TAutElement& f, const CyclicSeries& c) {
    require_same_config(f.config(), c.config());
    CyclicSeries result = c;
    CyclicSeries term = c;
    Rat factorial(1);
    for (int k = 1; k <= f.config().max_degree; ++k) {
        term = apply_cyc(f.log(), term);
        if (term.is_zero()) break;
        factorial *= k;
        result += term * (Rat(1) / factorial);
    }
    return result;
}

// compose(F, G) applies G first, then F; the log is bch in tder_n.
inline TAutElement compose(const TAutElement& f, const TAutElement& g) {
    require_same_config(f.config(), g.config());
    if (f.is_identity()) return g;
    if (g.is_identity()) return f;
    auto br = [](const TangentialDerivation& a, const TangentialDerivation& b) {
        return tder_bracket(a, b);
    };
    return TAutElement(bch_in(f.config().max_degree, f.log(), g.log(), br,
                              TangentialDerivation::zero(f.config())));
}

inline TAutElement inverse(const TAutElement& f) { return TAutElement(-f.log()); }

inline std::string to_text(const TangentialDerivation& u) {
    std::ostringstream out;
    out << "tder n=" << u.config().n_generators << " N=" << u.config().max_degree << "\n";
    for (int k = 0; k < u.config().n_generators; ++k) {
        out << "slot " << (k + 1) << "\n";
        out << to_text(u.entry(k));
    }
    return out.str();
}

inline TangentialDerivation parse_tder(io::LineCursor& in) {
    auto tokens = io::split_ws(in.next());
    if (tokens.empty() || tokens[0] != "tder") throw parse_error("expected `tder` header");
    int n = io::parse_int(io::header_field(tokens, "n"));
    int max_degree = io::parse_int(io::header_field(tokens, "N"));
    TruncationConfig config(n, max_degree);
    std::vector<LieSeries> tuple;
    tuple.reserve(n);
    for (int k = 1; k <= n; ++k) {
        auto slot_tokens = io::split_ws(in.next());
        if (slot_tokens.size() != 2 || slot_tokens[0] != "slot" ||
            io::parse_int(slot_tokens[1]) != k)
            throw parse_error("expected `slot " + std::to_string(k) + "`");
        LieSeries entry = parse_lie(in);
        if (entry.config() != config) throw parse_error("slot config mismatch in tder payload");
        tuple.push_back(std::move(entry));
    }
    return TangentialDerivation(config, std::move(tuple));
}

}  // namespace kvforge
