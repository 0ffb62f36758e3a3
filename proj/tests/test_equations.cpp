#include <gtest/gtest.h>

#include "wnev/equations.hpp"

using namespace wnev;

namespace {

wilson_difference_polynomial single(polynomial coeff, std::vector<int> exps) {
    wilson_difference_polynomial P;
    P.terms = {{std::move(coeff), std::move(exps)}};
    return P;
}

} // namespace

TEST(Wdp, IdentityTerm) {
    auto f = [](cplx x) { return std::exp(x); };
    cplx x(0.4, 1.2);
    EXPECT_NEAR(std::abs(wdp_evaluate(single({1.0}, {1}), f, x) - f(x)), 0.0, 1e-15);
}

TEST(Wdp, SquaredDifferenceOfLinear) {
    auto f = [](cplx x) { return x; };
    EXPECT_NEAR(std::abs(wdp_evaluate(single({1.0}, {0, 2}), f, cplx(2.0, 1.0)) - 1.0), 0.0, 1e-13);
}

TEST(Wdp, MixedTerms) {
    auto f = [](cplx x) { return x * x; };
    wilson_difference_polynomial P;
    P.terms = {{{0.0, 1.0}, {0, 1}}, {{1.0}, {0, 0, 1}}};
    for (cplx x : {cplx(1.5), cplx(-2.0, 3.0)}) {
        cplx expect = x * (2.0 * x - 0.5) + 2.0;
        EXPECT_NEAR(std::abs(wdp_evaluate(P, f, x) - expect), 0.0, 1e-11 * std::abs(expect)) << x;
    }
}

TEST(Wdp, Linearity) {
    auto f = [](cplx x) { return std::exp(0.3 * x); };
    auto g = [](cplx x) { return x * x * x; };
    auto P = single({1.0}, {0, 1});
    cplx x(1.1, 0.6);
    cplx lhs = wdp_evaluate(P, [&](cplx y) { return 2.0 * f(y) - g(y); }, x);
    cplx rhs = 2.0 * wdp_evaluate(P, f, x) - wdp_evaluate(P, g, x);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12 * std::abs(rhs));
}

TEST(Wdp, Degrees) {
    wilson_difference_polynomial P;
    P.terms = {{{1.0}, {2, 1}}, {{1.0}, {0, 0, 1}}};
    EXPECT_EQ(P.degree_over_f(), 3);
    EXPECT_EQ(P.max_order(), 2);
}

TEST(Wdp, NegativeExponentRejected) {
    EXPECT_THROW(wdp_evaluate(single({1.0}, {-1}), [](cplx x) { return x; }, 1.0), error);
}

TEST(Clunie, QuadraticFixture) {
    auto rep = clunie_growth_check(clunie_fixture_quadratic(), log_grid(10.0, 1e4, 8));
    EXPECT_LT(rep.identity_residual, 1e-10);
    EXPECT_TRUE(rep.pass);
    EXPECT_LE(rep.exponent, rep.bound);
}

TEST(Clunie, UnitProximityVanishes) {
    auto rep = clunie_growth_check(clunie_fixture_unit(model_exp(), 1.0), log_grid(10.0, 1e4, 8));
    EXPECT_TRUE(rep.proximity_vanishes);
    EXPECT_TRUE(rep.pass);
}

TEST(Clunie, DegreeHypothesisEnforced) {
    EXPECT_THROW(clunie_growth_check(clunie_fixture_exp(), log_grid(10.0, 1e4, 8)), error);
}

TEST(Clunie, ViolatedIdentityRejected) {
    auto fx = clunie_fixture_quadratic();
    fx.Q.terms = {{{3.0}, {1}}};
    try {
        clunie_growth_check(fx, log_grid(10.0, 1e4, 8));
        FAIL() << "expected an identity error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::identity);
    }
}

TEST(Interpolation, ZeroSolution) {
    auto r = interp_residual(period_equation(), model_constant(0.0), cplx(1.3, 0.2));
    EXPECT_EQ(r.relative, 0.0);
}

TEST(Interpolation, NeedsTwoTerms) {
    interpolation_equation eq;
    eq.terms = {polynomial_term(0, {1.0})};
    EXPECT_THROW(eq.validate(), error);
}

TEST(Interpolation, AllZeroCoefficientsRejected) {
    interpolation_equation eq;
    eq.terms = {polynomial_term(1, {0.0}), polynomial_term(-1, {0.0})};
    EXPECT_THROW(interp_residual(eq, model_exp(), 1.0), error);
}

TEST(Interpolation, PeriodSolution) {
    for (cplx x : {cplx(0.3), cplx(2.0), cplx(-4.0, 1.0)})
        EXPECT_LT(interp_residual(period_equation(), period_solution(), x).relative, 1e-12) << x;
}

TEST(Interpolation, SymmetrizedGammaSolutionResidual) {
    // Nonzero: the symmetrized solution does not satisfy this shift equation.
    auto r = interp_residual(ghyp_equation(), model_ghyp_solution(), 0.3);
    EXPECT_NEAR(std::abs(r.residual), 6.717296246566144407, 1e-8);
}

TEST(OrderBound, PeriodEquation) {
    auto rep = order_bound_report(period_equation(), period_solution(), log_grid(1e2, 1e5, 10));
    EXPECT_NEAR(rep.sigma_y, 0.5, 0.05);
    EXPECT_EQ(rep.sigma_l, 0.0);
    EXPECT_NEAR(rep.margin, 0.0, 0.05);
    EXPECT_TRUE(rep.pass);
}

TEST(OrderBound, NonSolutionRefused) {
    try {
        order_bound_report(ghyp_equation(), model_ghyp_solution(), log_grid(1e2, 1e5, 10));
        FAIL() << "expected an identity error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::identity);
    }
}
