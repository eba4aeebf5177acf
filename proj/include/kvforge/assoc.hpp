#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "kvforge/config.hpp"
#include "kvforge/io.hpp"
#include "kvforge/rational.hpp"
#include "kvforge/words.hpp"

namespace kvforge {

// Sparse element of the degree-truncated free associative algebra.
// Words longer than the truncation degree are dropped on construction
// and after every product; zero coefficients are never stored.
class AssocSeries {
  public:
    using TermMap = std::map<Word, Rat, GradedLex>;

    explicit AssocSeries(TruncationConfig config) : config_(std::move(config)) {}

    static AssocSeries zero(const TruncationConfig& config) { return AssocSeries(config); }

    static AssocSeries scalar(const TruncationConfig& config, const Rat& c) {
        AssocSeries s(config);
        s.add_term(Word{}, c);
        return s;
    }

    static AssocSeries one(const TruncationConfig& config) { return scalar(config, Rat(1)); }

    static AssocSeries generator(const TruncationConfig& config, int i) {
        if (i < 0 || i >= config.n_generators)
            throw std::invalid_argument("generator index out of range");
        AssocSeries s(config);
        s.add_term(Word{i}, Rat(1));
        return s;
    }

    const TruncationConfig& config() const { return config_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rat coefficient(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    Rat scalar_part() const { return coefficient(Word{}); }

    // Adds c * w, dropping overweight words and killed coefficients.
    void add_term(const Word& w, const Rat& c) {
        if (static_cast<int>(w.size()) > config_.max_degree) return;
        for (int l : w)
            if (l < 0 || l >= config_.n_generators)
                throw std::invalid_argument("letter out of range");
        if (kvforge::is_zero(c)) return;
        auto [it, inserted] = terms_.emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (kvforge::is_zero(it->second)) terms_.erase(it);
        }
    }

    AssocSeries& operator+=(const AssocSeries& o) {
        require_same_config(config_, o.config_);
        for (const auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    AssocSeries& operator-=(const AssocSeries& o) {
        require_same_config(config_, o.config_);
        for (const auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }
    AssocSeries& operator*=(const Rat& c) {
        if (kvforge::is_zero(c)) {
            terms_.clear();
            return *this;
        }
        for (auto& [w, q] : terms_) q *= c;
        return *this;
    }

    friend AssocSeries operator+(AssocSeries a, const AssocSeries& b) { return a += b; }
    friend AssocSeries operator-(AssocSeries a, const AssocSeries& b) { return a -= b; }
    friend AssocSeries operator*(AssocSeries a, const Rat& c) { return a *= c; }
    friend AssocSeries operator*(const Rat& c, AssocSeries a) { return a *= c; }
    friend AssocSeries operator-(AssocSeries a) { return a *= Rat(-1); }

    friend AssocSeries operator*(const AssocSeries& a, const AssocSeries& b) {
        require_same_config(a.config_, b.config_);
        AssocSeries out(a.config_);
        const int n = a.config_.max_degree;
        for (const auto& [wa, ca] : a.terms_) {
            if (static_cast<int>(wa.size()) > n) continue;
            for (const auto& [wb, cb] : b.terms_) {
                if (static_cast<int>(wa.size() + wb.size()) > n) break;  // graded order
                Word w = wa;
                w.insert(w.end(), wb.begin(), wb.end());
                out.add_term(w, ca * cb);
            }
        }
        return out;
    }

    bool operator==(const AssocSeries& o) const {
        return config_ == o.config_ && terms_ == o.terms_;
    }
    bool operator!=(const AssocSeries& o) const { return !(*this == o); }

    AssocSeries degree_part(int d) const {
        AssocSeries out(config_);
        for (const auto& [w, c] : terms_)
            if (static_cast<int>(w.size()) == d) out.add_term(w, c);
        return out;
    }

    int min_degree() const {
        return terms_.empty() ? config_.max_degree + 1
                              : static_cast<int>(terms_.begin()->first.size());
    }

    // Explicit re-truncation to a coarser degree bound; the arithmetic
    // itself never mixes truncations.
    AssocSeries truncated(int new_max_degree) const {
        if (new_max_degree > config_.max_degree)
            throw std::invalid_argument("cannot refine truncation upwards");
        TruncationConfig c(config_.n_generators, new_max_degree, config_.generator_names);
        AssocSeries out(c);
        for (const auto& [w, q] : terms_) out.add_term(w, q);
        return out;
    }

  private:
    TruncationConfig config_;
    TermMap terms_;
};

// exp on the augmentation ideal: sum_k a^k / k!, truncated.
inline AssocSeries exp_trunc(const AssocSeries& a) {
    if (!is_zero(a.scalar_part()))
        throw std::domain_error("exp_trunc requires zero scalar part");
    AssocSeries result = AssocSeries::one(a.config());
    AssocSeries power = AssocSeries::one(a.config());
    for (int k = 1; k <= a.config().max_degree; ++k) {
        power = power * a;
        power *= Rat(1, k);
        if (power.is_zero()) break;
        result += power;
    }
    return result;
}

// log at scalar part exactly 1: sum_k (-1)^{k+1} (g-1)^k / k, truncated.
inline AssocSeries log_trunc(const AssocSeries& g) {
    if (g.scalar_part() != Rat(1))
        throw std::domain_error("log_trunc requires scalar part exactly 1");
    AssocSeries u = g - AssocSeries::one(g.config());
    AssocSeries result = AssocSeries::zero(g.config());
    AssocSeries power = AssocSeries::one(g.config());
    for (int k = 1; k <= g.config().max_degree; ++k) {
        power = power * u;
        if (power.is_zero()) break;
        result += power * rat(k % 2 == 1 ? 1 : -1, k);
    }
    return result;
}

// The i-th right decomposition slot: keeps words ending in x_i, with that
// last letter removed. a == scalar(a) + sum_i partial_i(a) * x_i.
inline AssocSeries partial_i(const AssocSeries& a, int i) {
    if (i < 0 || i >= a.config().n_generators)
        throw std::invalid_argument("partial_i: generator index out of range");
    AssocSeries out(a.config());
    for (const auto& [w, c] : a.terms()) {
        if (w.empty() || w.back() != i) continue;
        out.add_term(Word(w.begin(), w.end() - 1), c);
    }
    return out;
}

inline std::string word_to_text(const TruncationConfig& config, const Word& w) {
    if (w.empty()) return "-";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s.push_back('.');
        s += config.name(w[i]);
    }
    return s;
}

inline Word word_from_text(const TruncationConfig& config, const std::string& text) {
    if (text == "-") return Word{};
    Word w;
    for (const auto& name : io::split_on(text, '.')) {
        if (name.empty()) throw parse_error("empty letter in word: " + text);
        w.push_back(config.generator_index(name));
    }
    return w;
}

inline std::string to_text(const AssocSeries& a) {
    std::ostringstream out;
    out << "assoc n=" << a.config().n_generators << " N=" << a.config().max_degree << "\n";
    for (const auto& [w, c] : a.terms())
        out << w.size() << " " << rat_to_string(c) << " " << word_to_text(a.config(), w) << "\n";
    return out.str();
}

namespace io {

inline TruncationConfig parse_series_header(LineCursor& in, const std::string& kind) {
    auto tokens = split_ws(in.next());
    if (tokens.empty() || tokens[0] != kind) throw parse_error("expected `" + kind + "` header");
    int n = parse_int(header_field(tokens, "n"));
    int max_degree = parse_int(header_field(tokens, "N"));
    if (n < 1 || max_degree < 1) throw parse_error("bad header bounds in `" + kind + "`");
    return TruncationConfig(n, max_degree);
}

// A term line is "<degree> <num>/<den> <word>"; anything else ends the
// payload (next header, etc).
inline bool looks_like_term(const std::string& line) {
    return !line.empty() && std::isdigit(static_cast<unsigned char>(line[0]));
}

struct RawTerm {
    int degree;
    Rat coeff;
    std::string word;
};

inline RawTerm parse_term_line(const std::string& line) {
    auto tokens = split_ws(line);
    if (tokens.size() != 3) throw parse_error("malformed term line: " + line);
    RawTerm t{parse_int(tokens[0]), rat_from_string(tokens[1]), tokens[2]};
    return t;
}

}  // namespace io

inline AssocSeries parse_assoc(io::LineCursor& in) {
    TruncationConfig config = io::parse_series_header(in, "assoc");
    AssocSeries a(config);
    while (!in.done() && io::looks_like_term(in.peek())) {
        io::RawTerm t = io::parse_term_line(in.next());
        Word w = word_from_text(config, t.word);
        if (static_cast<int>(w.size()) != t.degree)
            throw parse_error("degree does not match word length: " + t.word);
        if (static_cast<int>(w.size()) > config.max_degree)
            throw parse_error("word exceeds truncation: " + t.word);
        a.add_term(w, t.coeff);
    }
    return a;
}

}  // namespace kvforge
