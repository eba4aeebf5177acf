#pragma once

#include <utility>

#include "kvforge/assoc.hpp"
#include "kvforge/cyclic.hpp"
#include "kvforge/lie.hpp"
#include "kvforge/rational.hpp"
#include "kvforge/tder.hpp"

namespace kvforge {

// Non-commutative divergence j(u) = tr(sum_i partial_i(a_i) x_i), a
// 1-cocycle of tder_n with values in cyc_n.
inline CyclicSeries divergence(const TangentialDerivation& u) {
    AssocSeries acc(u.config());
    for (int i = 0; i < u.config().n_generators; ++i) {
        AssocSeries ai = embed(u.entry(i));
        acc += partial_i(ai, i) * AssocSeries::generator(u.config(), i);
    }
    return trace(acc);
}

// Group cocycle J integrating the divergence: the defining conditions
// J(1) = 0 and d/dt|_0 J(e^{tu} g) = j(u) + u . J(g) pin the closed
// series J(e^u) = sum_k u^k(j(u)) / (k+1)!; the cocycle property
// J(gh) = J(g) + g . J(h) is validated in the tests.
inline CyclicSeries jacobian(const TAutElement& f) {
    const TangentialDerivation& u = f.log();
    CyclicSeries term = divergence(u);
    CyclicSeries result = term;  // k = 0 contribution j(u)/1!
    Rat factorial(1);            // (k+1)!
    for (int k = 1; k <= f.config().max_degree; ++k) {
        term = apply_cyc(u, term);
        if (term.is_zero()) break;
        factorial *= k;
        result += term * (Rat(1) / (factorial * (k + 1)));
    }
    return result;
}

// Group-like element of exp(cyc_n). The group is abelian, so it is just
// the additive group of logs; fractional powers scale the log.
struct GroupLikeCyc {
    CyclicSeries log;

    explicit GroupLikeCyc(CyclicSeries l) : log(std::move(l)) {}

    bool operator==(const GroupLikeCyc& o) const { return log == o.log; }
    bool operator!=(const GroupLikeCyc& o) const { return !(*this == o); }
};

// The exponential Jacobian of F, as a group-like element.
inline GroupLikeCyc jac_exp(const TAutElement& f) { return GroupLikeCyc(jacobian(f)); }

inline GroupLikeCyc cyc_group_power(const GroupLikeCyc& g, const Rat& q) {
    return GroupLikeCyc(g.log * q);
}

inline GroupLikeCyc cyc_group_mul(const GroupLikeCyc& a, const GroupLikeCyc& b) {
    return GroupLikeCyc(a.log + b.log);
}

}  // namespace kvforge
