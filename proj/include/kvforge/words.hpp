#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace kvforge {

// A word over generator indices 0..n-1. The empty word is the scalar slot
// of the free associative algebra.
using Word = std::vector<int>;

// Degree-first ordering: shorter words precede longer ones, ties broken
// lexicographically. All sparse series maps use this order so per-degree
// slices are contiguous and output order is canonical.
struct GradedLex {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

// A word is Lyndon iff it is strictly smaller than each of its proper
// rotations (equivalently, than each of its proper suffixes).
inline bool is_lyndon(const Word& w) {
    if (w.empty()) return false;
    const std::size_t n = w.size();
    for (std::size_t i = 1; i < n; ++i) {
        // compare w with its rotation starting at i
        for (std::size_t j = 0; j < n; ++j) {
            int a = w[j];
            int b = w[(i + j) % n];
            if (a < b) break;
            if (a > b) return false;
            if (j + 1 == n) return false;  // rotation equal -> periodic, not Lyndon
        }
    }
    return true;
}

// Duval's algorithm: all Lyndon words of length exactly d over n letters,
// in lexicographic order.
inline std::vector<Word> lyndon_words_of_degree(int n_letters, int d) {
    if (n_letters < 1 || d < 1) throw std::invalid_argument("lyndon_words_of_degree: bad arguments");
    std::vector<Word> out;
    Word w{-1};
    while (!w.empty()) {
        ++w.back();
        if (static_cast<int>(w.size()) == d) out.push_back(w);
        std::size_t m = w.size();
        while (static_cast<int>(w.size()) < d) w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == n_letters - 1) w.pop_back();
    }
    return out;
}

// Witt dimension (1/d) * sum_{e | d} mu(d/e) n^e of the degree-d part of
// the free Lie algebra on n generators.
inline std::int64_t witt_dimension(int n_letters, int d) {
    auto mobius = [](int m) {
        int result = 1;
        for (int p = 2; p * p <= m; ++p) {
            if (m % p == 0) {
                m /= p;
                if (m % p == 0) return 0;
                result = -result;
            }
        }
        if (m > 1) result = -result;
        return result;
    };
    std::int64_t total = 0;
    for (int e = 1; e <= d; ++e) {
        if (d % e != 0) continue;
        std::int64_t pw = 1;
        for (int k = 0; k < e; ++k) pw *= n_letters;
        total += mobius(d / e) * pw;
    }
    return total / d;
}

// Standard factorization of a Lyndon word of length >= 2: w = uv with v
// its lexicographically least proper suffix; u and v are Lyndon again and
// the right-normed bracketing [b(u), b(v)] gives the basis element.
inline std::pair<Word, Word> standard_factorization(const Word& w) {
    if (w.size() < 2) throw std::invalid_argument("standard_factorization: word too short");
    std::size_t best = 1;
    for (std::size_t i = 2; i < w.size(); ++i) {
        if (std::lexicographical_compare(w.begin() + i, w.end(), w.begin() + best, w.end()))
            best = i;
    }
    return {Word(w.begin(), w.begin() + best), Word(w.begin() + best, w.end())};
}

// Lexicographically minimal rotation; canonical representative of a
// necklace (cyclic word). Naive O(len^2), fine at desk scale.
inline Word min_rotation(const Word& w) {
    if (w.empty()) throw std::invalid_argument("min_rotation: empty word");
    Word best = w;
    Word rot = w;
    for (std::size_t i = 1; i < w.size(); ++i) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    return best;
}

inline int count_letter(const Word& w, int letter) {
    int c = 0;
    for (int l : w)
        if (l == letter) ++c;
    return c;
}

}  // namespace kvforge
