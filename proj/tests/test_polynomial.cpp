#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "msos/polynomial.hpp"

using namespace msos;

namespace {

Polynomial motzkin() {
    // x1^4 x2^2 + x1^2 x2^4 - 3 x1^2 x2^2 + 1
    Polynomial p(2);
    p.add_term({4, 2}, 1.0);
    p.add_term({2, 4}, 1.0);
    p.add_term({2, 2}, -3.0);
    p.add_term({0, 0}, 1.0);
    return p;
}

Polynomial random_poly(int d, int deg, std::mt19937& rng) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    Polynomial p(d);
    const auto basis = monomial_basis(d, deg);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(basis.size()) - 1);
    for (int t = 0; t < 6; ++t) p.add_term(basis[pick(rng)], coeff(rng));
    return p;
}

}  // namespace

TEST_CASE("monomial basis ordering and sizes") {
    const auto b21 = monomial_basis(2, 1);
    REQUIRE(b21.size() == 3);
    CHECK(b21[0] == Exponent{0, 0});
    CHECK(b21[1] == Exponent{1, 0});
    CHECK(b21[2] == Exponent{0, 1});

    CHECK(monomial_basis(2, 2).size() == 6);

    // Independent oracle: enumerate |alpha| <= 4 in three variables by
    // brute force.
    std::set<Exponent> brute;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4 - a; ++b)
            for (int c = 0; c <= 4 - a - b; ++c) brute.insert({a, b, c});
    const auto b34 = monomial_basis(3, 4);
    CHECK(b34.size() == 35);
    CHECK(brute.size() == 35);
    CHECK(std::set<Exponent>(b34.begin(), b34.end()) == brute);
    CHECK(static_cast<std::int64_t>(b34.size()) == basis_size(3, 4));
}

TEST_CASE("monomial basis is graded and prefix-closed") {
    for (int d = 1; d <= 3; ++d) {
        for (int k = 1; k <= 4; ++k) {
            const auto lo = monomial_basis(d, k - 1);
            const auto hi = monomial_basis(d, k);
            REQUIRE(std::equal(lo.begin(), lo.end(), hi.begin()));
            for (std::size_t i = 1; i < hi.size(); ++i) {
                CHECK(grlex_less(hi[i - 1], hi[i]));
            }
        }
    }
}

TEST_CASE("basis index lookup") {
    MonomialBasis basis(2, 4);
    for (int i = 0; i < basis.size(); ++i) {
        CHECK(basis.index_of(basis[i]) == i);
    }
    CHECK_THROWS_AS(basis.index_of({5, 0}), std::out_of_range);
    CHECK_THROWS_AS(basis.index_of({1, 1, 1}), std::invalid_argument);
}

TEST_CASE("polynomial evaluation") {
    Polynomial p(1);
    p.add_term({0}, 1.0);
    p.add_term({2}, 1.0);
    const double x2[] = {2.0};
    CHECK(p.eval(x2) == doctest::Approx(5.0));

    const Polynomial zero(1);
    CHECK(zero.eval(x2) == 0.0);
    CHECK(zero.degree() == 0);

    Polynomial q(2);
    q.add_term({1, 1}, 1.0);
    q.add_term({0, 0}, -3.0);
    const double x25[] = {2.0, 5.0};
    CHECK(q.eval(x25) == doctest::Approx(7.0));  // 2*5 - 3

    const double wrong[] = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(q.eval(wrong), std::invalid_argument);
}

TEST_CASE("eval is linear in the polynomial") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(-1.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        const Polynomial p = random_poly(2, 3, rng);
        const Polynomial q = random_poly(2, 3, rng);
        const double a = unif(rng), b = unif(rng);
        const double pt[] = {unif(rng), unif(rng)};
        Polynomial combo = a * p + b * q;
        CHECK(combo.eval(pt) ==
              doctest::Approx(a * p.eval(pt) + b * q.eval(pt)).epsilon(1e-12));
    }
}

TEST_CASE("homogenization") {
    Polynomial f(1);
    f.add_term({2}, 1.0);
    f.add_term({0}, -1.0);
    const Polynomial h = f.homogenized(1);  // x1^2 - x0^2
    CHECK(h.num_vars() == 2);
    CHECK(h.coefficient({0, 2}) == 1.0);
    CHECK(h.coefficient({2, 0}) == -1.0);

    Polynomial g(1);
    g.add_term({1}, 1.0);
    g.add_term({0}, 1.0);
    const Polynomial hg = g.homogenized(1);  // x0 x1 + x0^2
    CHECK(hg.coefficient({1, 1}) == 1.0);
    CHECK(hg.coefficient({2, 0}) == 1.0);

    const Polynomial hm = motzkin().homogenized(3);
    CHECK(hm.coefficient({0, 4, 2}) == 1.0);
    CHECK(hm.coefficient({0, 2, 4}) == 1.0);
    CHECK(hm.coefficient({2, 2, 2}) == -3.0);
    CHECK(hm.coefficient({6, 0, 0}) == 1.0);
    CHECK(hm.terms().size() == 4);

    Polynomial too_big(1);
    too_big.add_term({3}, 1.0);
    CHECK_THROWS_AS(too_big.homogenized(1), std::invalid_argument);
}

TEST_CASE("homogenize then set x0=1 is the identity; output is homogeneous") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const Polynomial p = random_poly(2, 4, rng);
        const Polynomial h = p.homogenized(2);
        for (const auto& [e, c] : h.terms()) {
            CHECK(total_degree(e) == 4);
            (void)c;
        }
        const Polynomial back = h.dehomogenized();
        CHECK(back.terms().size() == p.terms().size());
        for (const auto& [e, c] : p.terms()) {
            CHECK(back.coefficient(e) == c);
        }
    }
}

TEST_CASE("polynomial arithmetic and derivative") {
    Polynomial p = Polynomial::variable(2, 0) * Polynomial::variable(2, 1);
    p += Polynomial::constant(2, 2.0);
    const double at[] = {3.0, 4.0};
    CHECK(p.eval(at) == doctest::Approx(14.0));
    CHECK(p.derivative(0).eval(at) == doctest::Approx(4.0));
    CHECK(p.derivative(1).eval(at) == doctest::Approx(3.0));

    // Cancellation drops the stored term entirely.
    Polynomial q = p - p;
    CHECK(q.is_zero());
}

TEST_CASE("pop degree bookkeeping") {
    Polynomial f(2);
    f.add_term({2, 0}, 1.0);
    f.add_term({0, 2}, 1.0);
    Polynomial g(2);
    g.add_term({1, 0}, 1.0);
    g.add_term({0, 1}, 1.0);
    g.add_term({0, 0}, -1.0);

    const Pop qcqp(f, {g});
    CHECK(qcqp.objective_half_degree() == 1);
    CHECK(qcqp.max_constraint_half_degree() == 1);
    CHECK(qcqp.min_relaxation_order() == 1);

    Polynomial cubic(2);
    cubic.add_term({3, 0}, 1.0);
    const Pop with_cubic(f, {cubic});
    CHECK(with_cubic.constraint_half_degree(0) == 2);
    CHECK(with_cubic.max_constraint_half_degree() == 2);

    const Pop uncons(motzkin(), {});
    CHECK(uncons.unconstrained());
    CHECK(uncons.max_constraint_half_degree() == 1);  // placeholder, never consulted
    CHECK(uncons.min_relaxation_order() == 3);

    Polynomial other_dim(3);
    other_dim.add_term({1, 0, 0}, 1.0);
    CHECK_THROWS_AS(Pop(f, {other_dim}), std::invalid_argument);
}

TEST_CASE("to_string round trips visually") {
    Polynomial p(2);
    p.add_term({2, 0}, 1.0);
    p.add_term({0, 0}, -1.0);
    CHECK(p.to_string() == "-1 + x1^2");
}
