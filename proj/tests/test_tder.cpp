#include <catch2/catch_amalgamated.hpp>

#include "kvforge/divjac.hpp"
#include "kvforge/linalg.hpp"
#include "kvforge/tder.hpp"

using namespace kvforge;

namespace {

TangentialDerivation tuple2(const TruncationConfig& c, LieSeries a1, LieSeries a2) {
    return TangentialDerivation(c, {std::move(a1), std::move(a2)});
}

// Solves for a conjugator c with exp_apply(F, x_i) = log(e^{-c} e^{x_i} e^c)
// degree by degree, then confirms the match; existence is the
// basis-conjugating property of single exponentials.
void check_conjugator(const TAutElement& f, int generator) {
    const TruncationConfig& cfg = f.config();
    LieSeries x = LieSeries::generator(cfg, generator);
    LieSeries target = exp_apply(f, x);

    auto conj = [&](const LieSeries& c) {
        // log(e^{-c} e^x e^c) = e^{-ad_c}(x)
        LieSeries result = x;
        LieSeries term = x;
        Rat factorial(1);
        for (int k = 1; k <= cfg.max_degree; ++k) {
            term = bracket(c, term) * Rat(-1);
            if (term.is_zero()) break;
            factorial *= k;
            result += term * (Rat(1) / factorial);
        }
        return result;
    };

    LieSeries c = LieSeries::zero(cfg);
    for (int d = 1; d < cfg.max_degree; ++d) {
        LieSeries residual = target - conj(c);
        LieSeries goal = residual.degree_part(d + 1);
        auto basis = lyndon_basis(cfg, d);
        auto rows = lyndon_basis(cfg, d + 1);
        RatMatrix m(rows.size(), basis.size());
        for (std::size_t col = 0; col < basis.size(); ++col) {
            LieSeries column = -bracket(LieSeries::basis_element(cfg, basis[col]), x);
            for (std::size_t r = 0; r < rows.size(); ++r) m.at(r, col) = column.coefficient(rows[r]);
        }
        std::vector<Rat> rhs(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) rhs[r] = goal.coefficient(rows[r]);
        auto sol = solve_affine(m, rhs);
        REQUIRE(sol.has_value());
        for (std::size_t col = 0; col < basis.size(); ++col)
            c.add_term(basis[col], sol->particular[col]);
    }
    REQUIRE(conj(c) == target);
}

}  // namespace

TEST_CASE("tangential derivations act by x_i -> [x_i, a_i]") {
    TruncationConfig c(2, 4);
    auto x = LieSeries::generator(c, 0);
    auto y = LieSeries::generator(c, 1);
    TangentialDerivation t12 = t_embed(c, 1, 2);

    REQUIRE(t12.entry(0) == y);
    REQUIRE(t12.entry(1) == x);
    REQUIRE(apply(t12, x) == bracket(x, y));
    REQUIRE(apply(t12, y) == bracket(y, x));
    REQUIRE(apply(TangentialDerivation::zero(c), x + bracket(x, y)).is_zero());

    // derivation property
    REQUIRE(apply(t12, bracket(x, y)) ==
            bracket(apply(t12, x), y) + bracket(x, apply(t12, y)));

    // u = (y, 0) kills tr(xy)
    TangentialDerivation u = tuple2(c, y, LieSeries::zero(c));
    AssocSeries xy(c);
    xy.add_term({0, 1}, Rat(1));
    REQUIRE(apply_cyc(u, trace(xy)).is_zero());

    // trace compatibility: apply_cyc(u, tr(a)) = tr(apply_assoc(u, a))
    AssocSeries a(c);
    a.add_term({0, 1, 1}, Rat(2));
    a.add_term({1, 0}, Rat(-1, 3));
    REQUIRE(apply_cyc(u, trace(a)) == trace(apply_assoc(u, a)));
    REQUIRE(apply_cyc(t12, trace(a)) == trace(apply_assoc(t12, a)));
}

TEST_CASE("canonicalization strips the a_n kernel without changing the action") {
    TruncationConfig c(2, 4);
    auto x = LieSeries::generator(c, 0);
    auto y = LieSeries::generator(c, 1);

    APart stripped(2);
    TangentialDerivation u(c, {x + y, Rat(3) * x}, &stripped);
    REQUIRE(stripped.coefficients[0] == Rat(1));
    REQUIRE(stripped.coefficients[1] == Rat(0));
    REQUIRE(u.entry(0) == y);

    // the stripped tuples act identically: (x, 0) and (0, y) are the
    // kernel directions
    TangentialDerivation raw_action = tuple2(c, x, LieSeries::zero(c));
    REQUIRE(raw_action.is_zero());
    for (const auto& probe : {x, y, bracket(x, y)}) {
        TangentialDerivation full = tuple2(c, x + y, Rat(3) * y);
        TangentialDerivation plain = tuple2(c, y, LieSeries::zero(c));
        REQUIRE(apply(full, probe) == apply(plain, probe));
    }
}

TEST_CASE("tder bracket satisfies the defining property and the t_n relations") {
    TruncationConfig c2(2, 5);
    auto x = LieSeries::generator(c2, 0);
    auto y = LieSeries::generator(c2, 1);
    TangentialDerivation t12 = t_embed(c2, 1, 2);
    TangentialDerivation u = tuple2(c2, bracket(x, y), y);

    REQUIRE(tder_bracket(u, u).is_zero());
    for (int k = 0; k < 2; ++k) {
        LieSeries gen = LieSeries::generator(c2, k);
        REQUIRE(apply(tder_bracket(t12, u), gen) ==
                apply(t12, apply(u, gen)) - apply(u, apply(t12, gen)));
    }

    TruncationConfig c3(3, 5);
    REQUIRE(tder_bracket(t_embed(c3, 1, 2), t_embed(c3, 1, 3) + t_embed(c3, 2, 3)).is_zero());

    TruncationConfig c4(4, 4);
    REQUIRE(tder_bracket(t_embed(c4, 1, 2), t_embed(c4, 3, 4)).is_zero());
    // full t_4 relation families
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j)
            for (int k = 1; k <= 4; ++k) {
                if (k == i || k == j) continue;
                auto tij = t_embed(c4, i, j);
                auto tik = t_embed(c4, std::min(i, k), std::max(i, k));
                auto tkj = t_embed(c4, std::min(k, j), std::max(k, j));
                REQUIRE(tder_bracket(tij, tik + tkj).is_zero());
                for (int l = k + 1; l <= 4; ++l) {
                    if (l == i || l == j) continue;
                    REQUIRE(tder_bracket(tij, t_embed(c4, k, l)).is_zero());
                }
            }
}

TEST_CASE("tder bracket satisfies Jacobi on low-degree tuples") {
    TruncationConfig c(2, 6);
    std::vector<TangentialDerivation> elems;
    for (int d = 1; d <= 2; ++d)
        for (int slot = 0; slot < 2; ++slot)
            for (const auto& w : lyndon_basis(c, d)) {
                std::vector<LieSeries> tuple(2, LieSeries::zero(c));
                tuple[slot] = LieSeries::basis_element(c, w);
                TangentialDerivation u(c, std::move(tuple));
                if (!u.is_zero()) elems.push_back(std::move(u));
            }
    REQUIRE(elems.size() == 4);
    for (const auto& a : elems)
        for (const auto& b : elems)
            for (const auto& z : elems) {
                TangentialDerivation jac = tder_bracket(a, tder_bracket(b, z)) +
                                           tder_bracket(b, tder_bracket(z, a)) +
                                           tder_bracket(z, tder_bracket(a, b));
                REQUIRE(jac.is_zero());
            }
}

TEST_CASE("coface maps insert and double strands") {
    TruncationConfig c2(2, 4);
    auto x = LieSeries::generator(c2, 0);
    auto y = LieSeries::generator(c2, 1);
    TangentialDerivation u = tuple2(c2, bracket(x, y), x);

    TruncationConfig c3(3, 4);
    auto x3 = LieSeries::generator(c3, 0);
    auto y3 = LieSeries::generator(c3, 1);
    auto z3 = LieSeries::generator(c3, 2);

    SECTION("insertion u^{2,3}") {
        TangentialDerivation v = coface(u, "2,3");
        REQUIRE(v.config().n_generators == 3);
        REQUIRE(v.entry(0).is_zero());
        REQUIRE(v.entry(1) == bracket(y3, z3));
        REQUIRE(v.entry(2) == y3);
    }
    SECTION("doubling u^{1,23}") {
        TangentialDerivation v = coface(u, "1,23");
        REQUIRE(v.entry(0) == bracket(x3, y3 + z3));
        REQUIRE(v.entry(1) == x3);
        REQUIRE(v.entry(2) == x3);
    }
    SECTION("zero maps to zero") {
        REQUIRE(coface(TangentialDerivation::zero(c2), "1,23").is_zero());
        REQUIRE(coface(TangentialDerivation::zero(c2), "1,2").is_zero());
    }
    SECTION("malformed descriptors") {
        REQUIRE_THROWS_AS(coface(u, "1"), std::invalid_argument);
        REQUIRE_THROWS_AS(coface(u, "2,1"), std::invalid_argument);
        REQUIRE_THROWS_AS(coface(u, "13,2"), std::invalid_argument);
        REQUIRE_THROWS_AS(coface(u, "1,24"), std::invalid_argument);
    }
    SECTION("coface is a Lie algebra homomorphism") {
        TangentialDerivation v = tuple2(c2, y, bracket(x, y));
        for (const char* spec : {"2,3", "1,3", "1,2", "1,23", "12,3"}) {
            REQUIRE(coface(tder_bracket(u, v), spec) ==
                    tder_bracket(coface(u, spec), coface(v, spec)));
        }
    }
}

TEST_CASE("exponentiated derivations are basis-conjugating automorphisms") {
    TruncationConfig c(2, 4);
    auto x = LieSeries::generator(c, 0);
    auto y = LieSeries::generator(c, 1);
    TAutElement id = TAutElement::identity(c);
    REQUIRE(exp_apply(id, x) == x);

    TAutElement f = TAutElement::exp(t_embed(c, 1, 2));
    REQUIRE(exp_apply(f, bracket(x, y)) ==
            bracket(exp_apply(f, x), exp_apply(f, y)));
    LieSeries ab = x + bracket(x, y);
    LieSeries cd = y - Rat(2) * bracket(x, bracket(x, y));
    REQUIRE(exp_apply(f, bracket(ab, cd)) ==
            bracket(exp_apply(f, ab), exp_apply(f, cd)));

    // e^u fixes x_i up to degree deg(u) + 1
    TangentialDerivation u = tuple2(c, bracket(x, y), LieSeries::zero(c));
    TAutElement g = TAutElement::exp(u);
    REQUIRE((exp_apply(g, x) - x).min_degree() >= 3);

    check_conjugator(f, 0);
    check_conjugator(f, 1);
    check_conjugator(g, 0);
}

TEST_CASE("composition follows bch and inverts exactly") {
    TruncationConfig c(2, 5);
    auto x = LieSeries::generator(c, 0);
    auto y = LieSeries::generator(c, 1);
    TangentialDerivation u = tuple2(c, y, bracket(x, y));
    TAutElement f = TAutElement::exp(u);
    TAutElement id = TAutElement::identity(c);

    REQUIRE(compose(f, id) == f);
    REQUIRE(compose(f, inverse(f)) == id);

    TAutElement g = TAutElement::exp(tuple2(c, bracket(x, y), x));
    for (const auto& probe : {x, y, x + bracket(x, y)})
        REQUIRE(exp_apply(compose(f, g), probe) == exp_apply(f, exp_apply(g, probe)));

    TruncationConfig c3(3, 5);
    TAutElement f12 = TAutElement::exp(t_embed(c3, 1, 2));
    TAutElement f13 = TAutElement::exp(t_embed(c3, 1, 3));
    TangentialDerivation log_fg = compose(f12, f13).log();
    REQUIRE(log_fg.degree_part(2) ==
            Rat(1, 2) * tder_bracket(t_embed(c3, 1, 2), t_embed(c3, 1, 3)));
}

TEST_CASE("t_embed validates indices and annihilates other strands") {
    TruncationConfig c3(3, 4);
    REQUIRE(apply(t_embed(c3, 1, 3), LieSeries::generator(c3, 1)).is_zero());
    REQUIRE_THROWS_AS(t_embed(c3, 2, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(t_embed(c3, 1, 4), std::invalid_argument);
    REQUIRE_THROWS_AS(t_embed(c3, 0, 2), std::invalid_argument);
}

TEST_CASE("tder serialization round-trips") {
    TruncationConfig c(2, 4);
    auto x = LieSeries::generator(c, 0);
    auto y = LieSeries::generator(c, 1);
    TangentialDerivation u = tuple2(c, y - Rat(5, 2) * bracket(x, y), bracket(x, bracket(x, y)));
    io::LineCursor in(to_text(u));
    REQUIRE(parse_tder(in) == u);

    io::LineCursor bad("tder n=2 N=4\nslot 2\nlie n=2 N=4\n");
    REQUIRE_THROWS_AS(parse_tder(bad), parse_error);
}

TEST_CASE("mixed configs are rejected") {
    TruncationConfig c4(2, 4), c5(2, 5);
    TangentialDerivation a = TangentialDerivation::zero(c4);
    TangentialDerivation b = TangentialDerivation::zero(c5);
    REQUIRE_THROWS_AS(tder_bracket(a, b), std::invalid_argument);
    REQUIRE_THROWS_AS(apply(a, LieSeries::generator(c5, 0)), std::invalid_argument);
    REQUIRE_THROWS_AS(compose(TAutElement::exp(a), TAutElement::exp(b)), std::invalid_argument);
}
