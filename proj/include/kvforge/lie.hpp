#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kvforge/assoc.hpp"
#include "kvforge/config.hpp"
#include "kvforge/io.hpp"
#include "kvforge/rational.hpp"
#include "kvforge/words.hpp"

namespace kvforge {

namespace detail {

using ExpansionMap = std::map<Word, Rat, GradedLex>;

inline ExpansionMap mul_expansions(const ExpansionMap& a, const ExpansionMap& b) {
    ExpansionMap out;
    for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) {
            Word w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            auto [it, inserted] = out.emplace(std::move(w), ca * cb);
            if (!inserted) {
                it->second += ca * cb;
                if (is_zero(it->second)) out.erase(it);
            }
        }
    return out;
}

// Commutator expansion of the standard (right-normed) bracketing of a
// Lyndon word. Memoised process-wide: the expansion depends only on the
// word itself. Key fact used by the rewriter below: the expansion is the
// word itself plus lexicographically greater words of the same length.
inline std::shared_ptr<const ExpansionMap> lyndon_expansion(const Word& w) {
    static std::mutex mu;
    static std::map<Word, std::shared_ptr<const ExpansionMap>, GradedLex> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(w);
        if (it != cache.end()) return it->second;
    }
    std::shared_ptr<const ExpansionMap> result;
    if (w.size() == 1) {
        ExpansionMap m;
        m.emplace(w, Rat(1));
        result = std::make_shared<const ExpansionMap>(std::move(m));
    } else {
        auto [u, v] = standard_factorization(w);
        auto eu = lyndon_expansion(u);
        auto ev = lyndon_expansion(v);
        ExpansionMap m = mul_expansions(*eu, *ev);
        for (const auto& [word, c] : mul_expansions(*ev, *eu)) {
            auto [it, inserted] = m.emplace(word, -c);
            if (!inserted) {
                it->second -= c;
                if (is_zero(it->second)) m.erase(it);
            }
        }
        result = std::make_shared<const ExpansionMap>(std::move(m));
    }
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(w, result);
    return it->second;
}

}  // namespace detail

// Sparse element of the truncated free Lie algebra in the Lyndon basis:
// a Lyndon word stands for its standard right-normed bracketing.
class LieSeries {
  public:
    using TermMap = std::map<Word, Rat, GradedLex>;

    explicit LieSeries(TruncationConfig config) : config_(std::move(config)) {}

    static LieSeries zero(const TruncationConfig& config) { return LieSeries(config); }

    static LieSeries generator(const TruncationConfig& config, int i) {
        if (i < 0 || i >= config.n_generators)
            throw std::invalid_argument("generator index out of range");
        LieSeries s(config);
        s.add_term(Word{i}, Rat(1));
        return s;
    }

    static LieSeries basis_element(const TruncationConfig& config, const Word& w) {
        LieSeries s(config);
        s.add_term(w, Rat(1));
        return s;
    }

    const TruncationConfig& config() const { return config_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rat coefficient(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(const Word& w, const Rat& c) {
        if (static_cast<int>(w.size()) > config_.max_degree) return;
        if (kvforge::is_zero(c)) return;
        if (!is_lyndon(w)) throw std::invalid_argument("not a Lyndon word");
        for (int l : w)
            if (l < 0 || l >= config_.n_generators)
                throw std::invalid_argument("letter out of range");
        auto [it, inserted] = terms_.emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (kvforge::is_zero(it->second)) terms_.erase(it);
        }
    }

    LieSeries& operator+=(const LieSeries& o) {
        require_same_config(config_, o.config_);
        for (const auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    LieSeries& operator-=(const LieSeries& o) {
        require_same_config(config_, o.config_);
        for (const auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }
    LieSeries& operator*=(const Rat& c) {
        if (kvforge::is_zero(c)) {
            terms_.clear();
            return *this;
        }
        for (auto& [w, q] : terms_) q *= c;
        return *this;
    }

    friend LieSeries operator+(LieSeries a, const LieSeries& b) { return a += b; }
    friend LieSeries operator-(LieSeries a, const LieSeries& b) { return a -= b; }
    friend LieSeries operator*(LieSeries a, const Rat& c) { return a *= c; }
    friend LieSeries operator*(const Rat& c, LieSeries a) { return a *= c; }
    friend LieSeries operator-(LieSeries a) { return a *= Rat(-1); }

    bool operator==(const LieSeries& o) const { return config_ == o.config_ && terms_ == o.terms_; }
    bool operator!=(const LieSeries& o) const { return !(*this == o); }

    LieSeries degree_part(int d) const {
        LieSeries out(config_);
        for (const auto& [w, c] : terms_)
            if (static_cast<int>(w.size()) == d) out.add_term(w, c);
        return out;
    }

    int min_degree() const {
        return terms_.empty() ? config_.max_degree + 1
                              : static_cast<int>(terms_.begin()->first.size());
    }

    LieSeries truncated(int new_max_degree) const {
        if (new_max_degree > config_.max_degree)
            throw std::invalid_argument("cannot refine truncation upwards");
        TruncationConfig c(config_.n_generators, new_max_degree, config_.generator_names);
        LieSeries out(c);
        for (const auto& [w, q] : terms_) out.add_term(w, q);
        return out;
    }

  private:
    TruncationConfig config_;
    TermMap terms_;
};

// Ordered degree-d slice of the Lyndon basis; the count matches the Witt
// dimension (cross-checked in tests against brute-force enumeration).
inline std::vector<Word> lyndon_basis(const TruncationConfig& config, int d) {
    if (d < 1 || d > config.max_degree)
        throw std::invalid_argument("lyndon_basis: degree out of range");
    return lyndon_words_of_degree(config.n_generators, d);
}

// Expansion into the universal enveloping algebra: Lyndon basis words
// expand as iterated commutators.
inline AssocSeries embed(const LieSeries& a) {
    AssocSeries out(a.config());
    for (const auto& [w, c] : a.terms()) {
        auto expansion = detail::lyndon_expansion(w);
        for (const auto& [word, q] : *expansion) out.add_term(word, c * q);
    }
    return out;
}

// Rewrites an associative series known to be a Lie element into Lyndon
// coordinates. Walks the support in graded-lex order: the least word of
// any Lie element is Lyndon and its expansion only adds greater words,
// so subtraction is unitriangular. Throws if the input is not Lie.
inline LieSeries lie_from_assoc(const AssocSeries& a) {
    if (!is_zero(a.scalar_part()))
        throw std::domain_error("lie_from_assoc: nonzero scalar part");
    AssocSeries residual = a;
    LieSeries out(a.config());
    while (!residual.is_zero()) {
        Word w = residual.terms().begin()->first;
        Rat coeff = residual.terms().begin()->second;
        if (!is_lyndon(w))
            throw std::domain_error("lie_from_assoc: input is not a Lie element");
        out.add_term(w, coeff);
        auto expansion = detail::lyndon_expansion(w);
        for (const auto& [word, q] : *expansion) residual.add_term(word, -coeff * q);
    }
    return out;
}

// Lie bracket, computed as a commutator in the enveloping algebra and
// rewritten into the basis. Self-oracling against hand-rolled
// straightening: embed is the ground truth.
inline LieSeries bracket(const LieSeries& a, const LieSeries& b) {
    require_same_config(a.config(), b.config());
    AssocSeries ea = embed(a);
    AssocSeries eb = embed(b);
    return lie_from_assoc(ea * eb - eb * ea);
}

// Dynkin map: each degree-d word is left-to-right bracketed and divided
// by d. Acts as the identity on embedded Lie elements, so composing with
// embed gives the Dynkin idempotent.
inline LieSeries dynkin_project(const AssocSeries& a) {
    if (!is_zero(a.scalar_part()))
        throw std::domain_error("dynkin_project: nonzero scalar part");
    AssocSeries acc(a.config());
    for (const auto& [w, c] : a.terms()) {
        const int d = static_cast<int>(w.size());
        // iterated commutator [[..[l1,l2],..],ld] in associative form
        detail::ExpansionMap m;
        m.emplace(Word{w[0]}, Rat(1));
        for (int k = 1; k < d; ++k) {
            detail::ExpansionMap letter;
            letter.emplace(Word{w[k]}, Rat(1));
            detail::ExpansionMap left = detail::mul_expansions(m, letter);
            for (const auto& [word, q] : detail::mul_expansions(letter, m)) {
                auto [it, inserted] = left.emplace(word, -q);
                if (!inserted) {
                    it->second -= q;
                    if (is_zero(it->second)) left.erase(it);
                }
            }
            m = std::move(left);
        }
        Rat scale = c / d;
        for (const auto& [word, q] : m) acc.add_term(word, scale * q);
    }
    return lie_from_assoc(acc);
}

// Evaluates a Lie series under generator -> args[i], with brackets taken
// by `br` in the target. T needs value semantics, += and *= Rat.
template <class T, class BracketFn>
T eval_lie_series(const LieSeries& s, const std::vector<T>& args, BracketFn&& br, T zero) {
    if (static_cast<int>(args.size()) != s.config().n_generators)
        throw std::invalid_argument("eval_lie_series: arity mismatch");
    std::map<Word, T, GradedLex> memo;
    auto eval_word = [&](auto&& self, const Word& w) -> const T& {
        auto it = memo.find(w);
        if (it != memo.end()) return it->second;
        T value = zero;
        if (w.size() == 1) {
            value = args[w[0]];
        } else {
            auto [u, v] = standard_factorization(w);
            value = br(self(self, u), self(self, v));
        }
        return memo.emplace(w, std::move(value)).first->second;
    };
    T result = zero;
    for (const auto& [w, c] : s.terms()) {
        T term = eval_word(eval_word, w);
        term *= c;
        result += term;
    }
    return result;
}

// The unique Lie-algebra-map extension sending generator i to args[i].
inline LieSeries substitute(const LieSeries& word, const std::vector<LieSeries>& args) {
    if (args.empty()) throw std::invalid_argument("substitute: no arguments");
    for (std::size_t i = 1; i < args.size(); ++i) require_same_config(args[0].config(), args[i].config());
    return eval_lie_series(
        word, args, [](const LieSeries& a, const LieSeries& b) { return bracket(a, b); },
        LieSeries::zero(args[0].config()));
}

inline std::string to_text(const LieSeries& a) {
    std::ostringstream out;
    out << "lie n=" << a.config().n_generators << " N=" << a.config().max_degree << "\n";
    for (const auto& [w, c] : a.terms())
        out << w.size() << " " << rat_to_string(c) << " " << word_to_text(a.config(), w) << "\n";
    return out.str();
}

inline LieSeries parse_lie(io::LineCursor& in) {
    TruncationConfig config = io::parse_series_header(in, "lie");
    LieSeries a(config);
    while (!in.done() && io::looks_like_term(in.peek())) {
        io::RawTerm t = io::parse_term_line(in.next());
        Word w = word_from_text(config, t.word);
        if (w.empty() || static_cast<int>(w.size()) != t.degree)
            throw parse_error("degree does not match word length: " + t.word);
        if (static_cast<int>(w.size()) > config.max_degree)
            throw parse_error("word exceeds truncation: " + t.word);
        if (!is_lyndon(w)) throw parse_error("non-Lyndon word in lie payload: " + t.word);
        a.add_term(w, t.coeff);
    }
    return a;
}

}  // namespace kvforge
