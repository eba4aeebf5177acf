#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "kvforge/lie.hpp"
#include "kvforge/rational.hpp"

namespace kvforge {

namespace detail {

// Bernoulli numbers B_0..B_m with B_1 = -1/2, via the defining recurrence
// sum_{j<=m} C(m+1, j) B_j = 0.
inline std::vector<Rat> bernoulli_numbers(int m) {
    std::vector<Rat> b(m + 1, Rat(0));
    b[0] = Rat(1);
    std::vector<std::vector<Rat>> choose(m + 2, std::vector<Rat>(m + 2, Rat(0)));
    for (int i = 0; i <= m + 1; ++i) {
        choose[i][0] = Rat(1);
        for (int j = 1; j <= i; ++j)
            choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : Rat(0));
    }
    for (int k = 1; k <= m; ++k) {
        Rat acc(0);
        for (int j = 0; j < k; ++j) acc += choose[k + 1][j] * b[j];
        b[k] = -acc / choose[k + 1][k];
    }
    return b;
}

// log(e^x e^{ty}) solves dZ/dt = phi(ad_Z)(y) with phi(z) = z/(1-e^{-z})
// = 1 + z/2 + sum_{k even} B_k z^k / k!. Since every y carries a t, the
// t-grading is the y-letter count, and the coefficient extraction below
// integrates the ODE degree by degree using only basis brackets. This is
// deliberately a different route from the associative log + Dynkin
// projection, which serves as its oracle in the tests.
inline LieSeries compute_bch_generators(const TruncationConfig& config) {
    const int max_degree = config.max_degree;
    const std::vector<Rat> bernoulli = bernoulli_numbers(max_degree);
    std::vector<Rat> phi(max_degree + 1, Rat(0));  // phi[k] = coeff of z^k
    phi[0] = Rat(1);
    if (max_degree >= 1) phi[1] = Rat(1, 2);
    Rat factorial(1);
    for (int k = 2; k <= max_degree; ++k) {
        factorial *= k;
        if (k % 2 == 0) phi[k] = bernoulli[k] / factorial;
    }

    const LieSeries y = LieSeries::generator(config, 1);
    LieSeries z = LieSeries::generator(config, 0);  // Z(0) = x
    auto y_part = [&](const LieSeries& s, int count) {
        LieSeries out(config);
        for (const auto& [w, c] : s.terms())
            if (count_letter(w, 1) == count) out.add_term(w, c);
        return out;
    };
    for (int m = 0; m + 1 <= max_degree; ++m) {
        // rhs = phi(ad_Z)(y) with the current partial sum for Z
        LieSeries rhs(config);
        LieSeries power = y;
        for (int k = 0; k <= max_degree; ++k) {
            if (!is_zero(phi[k])) rhs += phi[k] * power;
            power = bracket(z, power);
            if (power.is_zero()) break;
        }
        LieSeries z_next = y_part(rhs, m + 1);
        z_next *= Rat(1, m + 1);
        z += z_next;
    }
    return z;
}

}  // namespace detail

// The universal BCH series log(e^x e^y) over two generators, truncated.
// Cached per truncation degree.
inline const LieSeries& bch_generators(int max_degree) {
    static std::mutex mu;
    static std::map<int, LieSeries> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(max_degree);
    if (it == cache.end()) {
        TruncationConfig config(2, max_degree);
        it = cache.emplace(max_degree, detail::compute_bch_generators(config)).first;
    }
    return it->second;
}

// bch(a, b) = log(e^a e^b) for series of degree >= 1; evaluating the
// universal series is exact under truncation because a word of length k
// only produces terms of degree >= k.
inline LieSeries bch(const LieSeries& a, const LieSeries& b) {
    require_same_config(a.config(), b.config());
    if (a.min_degree() < 1 || b.min_degree() < 1)
        throw std::domain_error("bch arguments must have degree >= 1");
    return substitute(bch_generators(a.config().max_degree), {a, b});
}

// Same series evaluated in an arbitrary Lie algebra (e.g. tangential
// derivations under their bracket).
template <class T, class BracketFn>
T bch_in(int max_degree, const T& a, const T& b, BracketFn&& br, T zero) {
    return eval_lie_series(bch_generators(max_degree), std::vector<T>{a, b}, br, std::move(zero));
}

}  // namespace kvforge
