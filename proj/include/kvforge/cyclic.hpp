#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "kvforge/assoc.hpp"
#include "kvforge/bch.hpp"
#include "kvforge/config.hpp"
#include "kvforge/lie.hpp"
#include "kvforge/rational.hpp"
#include "kvforge/words.hpp"

namespace kvforge {

// Cyclic words: the free associative algebra modulo commutators. Terms
// are keyed by the rotation-minimal representative of each necklace.
// The degree-0 part is discarded by trace. When mod_linear is set the
// series lives in cyc_n modulo its degree-1 component (the cap model).
class CyclicSeries {
  public:
    using TermMap = std::map<Word, Rat, GradedLex>;

    explicit CyclicSeries(TruncationConfig config, bool mod_linear = false)
        : config_(std::move(config)), mod_linear_(mod_linear) {}

    static CyclicSeries zero(const TruncationConfig& config, bool mod_linear = false) {
        return CyclicSeries(config, mod_linear);
    }

    const TruncationConfig& config() const { return config_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool mod_linear() const { return mod_linear_; }

    Rat coefficient(const Word& w) const {
        auto it = terms_.find(min_rotation(w));
        return it == terms_.end() ? Rat(0) : it->second;
    }

    // Adds c times the necklace of w (any rotation accepted).
    void add_term(const Word& w, const Rat& c) {
        if (w.empty()) throw std::invalid_argument("cyclic terms have degree >= 1");
        if (static_cast<int>(w.size()) > config_.max_degree) return;
        if (mod_linear_ && w.size() == 1) return;
        if (kvforge::is_zero(c)) return;
        Word rep = min_rotation(w);
        for (int l : rep)
            if (l < 0 || l >= config_.n_generators)
                throw std::invalid_argument("letter out of range");
        auto [it, inserted] = terms_.emplace(std::move(rep), c);
        if (!inserted) {
            it->second += c;
            if (kvforge::is_zero(it->second)) terms_.erase(it);
        }
    }

    CyclicSeries& operator+=(const CyclicSeries& o) {
        require_same_config(config_, o.config_);
        if (mod_linear_ != o.mod_linear_)
            throw std::invalid_argument("cyclic quotient flag mismatch");
        for (const auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    CyclicSeries& operator-=(const CyclicSeries& o) {
        require_same_config(config_, o.config_);
        if (mod_linear_ != o.mod_linear_)
            throw std::invalid_argument("cyclic quotient flag mismatch");
        for (const auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }
    CyclicSeries& operator*=(const Rat& c) {
        if (kvforge::is_zero(c)) {
            terms_.clear();
            return *this;
        }
        for (auto& [w, q] : terms_) q *= c;
        return *this;
    }

    friend CyclicSeries operator+(CyclicSeries a, const CyclicSeries& b) { return a += b; }
    friend CyclicSeries operator-(CyclicSeries a, const CyclicSeries& b) { return a -= b; }
    friend CyclicSeries operator*(CyclicSeries a, const Rat& c) { return a *= c; }
    friend CyclicSeries operator*(const Rat& c, CyclicSeries a) { return a *= c; }
    friend CyclicSeries operator-(CyclicSeries a) { return a *= Rat(-1); }

    bool operator==(const CyclicSeries& o) const {
        return config_ == o.config_ && mod_linear_ == o.mod_linear_ && terms_ == o.terms_;
    }
    bool operator!=(const CyclicSeries& o) const { return !(*this == o); }

    CyclicSeries degree_part(int d) const {
        CyclicSeries out(config_, mod_linear_);
        for (const auto& [w, c] : terms_)
            if (static_cast<int>(w.size()) == d) out.add_term(w, c);
        return out;
    }

    CyclicSeries truncated(int new_max_degree) const {
        if (new_max_degree > config_.max_degree)
            throw std::invalid_argument("cannot refine truncation upwards");
        TruncationConfig c(config_.n_generators, new_max_degree, config_.generator_names);
        CyclicSeries out(c, mod_linear_);
        for (const auto& [w, q] : terms_) out.add_term(w, q);
        return out;
    }

  private:
    TruncationConfig config_;
    bool mod_linear_;
    TermMap terms_;
};

// Natural projection onto cyclic words; the scalar part is dropped.
inline CyclicSeries trace(const AssocSeries& a) {
    CyclicSeries out(a.config());
    for (const auto& [w, c] : a.terms())
        if (!w.empty()) out.add_term(w, c);
    return out;
}

// Kills the degree-1 component and marks the series as living in the
// quotient cyc_n / cyc_n^1.
inline CyclicSeries quotient_linear(const CyclicSeries& c) {
    CyclicSeries out(c.config(), true);
    for (const auto& [w, q] : c.terms())
        if (w.size() > 1) out.add_term(w, q);
    return out;
}

// One-variable power series in u^2 Q[[u]]: no constant, linear term, or
// terms beyond the truncation degree.
class OneVarSeries {
  public:
    explicit OneVarSeries(int max_degree) : max_degree_(max_degree) {
        if (max_degree < 1) throw std::invalid_argument("truncation degree must be >= 1");
    }

    static OneVarSeries zero(int max_degree) { return OneVarSeries(max_degree); }

    static OneVarSeries monomial(int max_degree, int d, const Rat& c = Rat(1)) {
        OneVarSeries s(max_degree);
        s.set(d, c);
        return s;
    }

    int max_degree() const { return max_degree_; }
    const std::map<int, Rat>& coefficients() const { return coeff_; }
    bool is_zero() const { return coeff_.empty(); }

    Rat coefficient(int d) const {
        auto it = coeff_.find(d);
        return it == coeff_.end() ? Rat(0) : it->second;
    }

    void set(int d, const Rat& c) {
        if (d < 2) throw std::invalid_argument("one-variable series start at degree 2");
        if (d > max_degree_) return;
        if (kvforge::is_zero(c))
            coeff_.erase(d);
        else
            coeff_[d] = c;
    }

    OneVarSeries& operator+=(const OneVarSeries& o) {
        if (max_degree_ != o.max_degree_) throw std::invalid_argument("truncation mismatch");
        for (const auto& [d, c] : o.coeff_) set(d, coefficient(d) + c);
        return *this;
    }
    OneVarSeries& operator-=(const OneVarSeries& o) {
        if (max_degree_ != o.max_degree_) throw std::invalid_argument("truncation mismatch");
        for (const auto& [d, c] : o.coeff_) set(d, coefficient(d) - c);
        return *this;
    }
    OneVarSeries& operator*=(const Rat& c) {
        if (kvforge::is_zero(c)) {
            coeff_.clear();
            return *this;
        }
        for (auto& [d, q] : coeff_) q *= c;
        return *this;
    }

    friend OneVarSeries operator+(OneVarSeries a, const OneVarSeries& b) { return a += b; }
    friend OneVarSeries operator-(OneVarSeries a, const OneVarSeries& b) { return a -= b; }
    friend OneVarSeries operator*(OneVarSeries a, const Rat& c) { return a *= c; }
    friend OneVarSeries operator*(const Rat& c, OneVarSeries a) { return a *= c; }
    friend OneVarSeries operator-(OneVarSeries a) { return a *= Rat(-1); }

    bool operator==(const OneVarSeries& o) const {
        return max_degree_ == o.max_degree_ && coeff_ == o.coeff_;
    }
    bool operator!=(const OneVarSeries& o) const { return !(*this == o); }

  private:
    int max_degree_;
    std::map<int, Rat> coeff_;
};

// Substitutes an augmentation-ideal element into the power series.
inline AssocSeries eval_series(const OneVarSeries& r, const AssocSeries& arg) {
    if (!is_zero(arg.scalar_part()))
        throw std::domain_error("eval_series requires zero scalar part");
    AssocSeries out(arg.config());
    if (r.is_zero()) return out;
    AssocSeries power = AssocSeries::one(arg.config());
    int current = 0;
    for (const auto& [d, c] : r.coefficients()) {
        while (current < d) {
            power = power * arg;
            ++current;
            if (power.is_zero()) return out;
        }
        out += c * power;
    }
    return out;
}

// tr(r(x+y) - r(x) - r(y)) in cyc_2: the right-hand side of the SolKV and
// KRV divergence equations.
inline CyclicSeries duflo_combination(const OneVarSeries& r, const TruncationConfig& config) {
    if (config.n_generators != 2)
        throw std::invalid_argument("duflo_combination lives in cyc_2");
    AssocSeries x = AssocSeries::generator(config, 0);
    AssocSeries y = AssocSeries::generator(config, 1);
    return trace(eval_series(r, x + y) - eval_series(r, x) - eval_series(r, y));
}

// tr(sigma(bch(x,y)) - sigma(x) - sigma(y)): the KV-group variant.
inline CyclicSeries bch_combination(const OneVarSeries& sigma, const TruncationConfig& config) {
    if (config.n_generators != 2)
        throw std::invalid_argument("bch_combination lives in cyc_2");
    AssocSeries x = AssocSeries::generator(config, 0);
    AssocSeries y = AssocSeries::generator(config, 1);
    LieSeries xl = LieSeries::generator(config, 0);
    LieSeries yl = LieSeries::generator(config, 1);
    AssocSeries z = embed(bch(xl, yl));
    return trace(eval_series(sigma, z) - eval_series(sigma, x) - eval_series(sigma, y));
}

inline std::string to_text(const CyclicSeries& a) {
    std::ostringstream out;
    out << "cyc n=" << a.config().n_generators << " N=" << a.config().max_degree;
    if (a.mod_linear()) out << " modlinear";
    out << "\n";
    for (const auto& [w, c] : a.terms())
        out << w.size() << " " << rat_to_string(c) << " " << word_to_text(a.config(), w) << "\n";
    return out.str();
}

inline CyclicSeries parse_cyc(io::LineCursor& in) {
    auto tokens = io::split_ws(in.next());
    if (tokens.empty() || tokens[0] != "cyc") throw parse_error("expected `cyc` header");
    int n = io::parse_int(io::header_field(tokens, "n"));
    int max_degree = io::parse_int(io::header_field(tokens, "N"));
    bool mod_linear = false;
    for (const auto& t : tokens)
        if (t == "modlinear") mod_linear = true;
    TruncationConfig config(n, max_degree);
    CyclicSeries a(config, mod_linear);
    while (!in.done() && io::looks_like_term(in.peek())) {
        io::RawTerm t = io::parse_term_line(in.next());
        Word w = word_from_text(config, t.word);
        if (w.empty() || static_cast<int>(w.size()) != t.degree)
            throw parse_error("degree does not match word length: " + t.word);
        if (w != min_rotation(w))
            throw parse_error("necklace not in minimal rotation: " + t.word);
        if (mod_linear && w.size() == 1)
            throw parse_error("degree-1 term in modlinear payload: " + t.word);
        a.add_term(w, t.coeff);
    }
    return a;
}

inline std::string to_text(const OneVarSeries& r) {
    std::ostringstream out;
    out << "series1 N=" << r.max_degree() << "\n";
    for (const auto& [d, c] : r.coefficients()) out << d << " " << rat_to_string(c) << "\n";
    return out.str();
}

inline OneVarSeries parse_series1(io::LineCursor& in) {
    auto tokens = io::split_ws(in.next());
    if (tokens.empty() || tokens[0] != "series1") throw parse_error("expected `series1` header");
    OneVarSeries r(io::parse_int(io::header_field(tokens, "N")));
    while (!in.done() && io::looks_like_term(in.peek())) {
        auto fields = io::split_ws(in.next());
        if (fields.size() != 2) throw parse_error("malformed series1 term");
        int d = io::parse_int(fields[0]);
        if (d < 2) throw parse_error("series1 terms start at degree 2");
        if (d > r.max_degree()) throw parse_error("series1 term exceeds truncation");
        r.set(d, rat_from_string(fields[1]));
    }
    return r;
}

}  // namespace kvforge
