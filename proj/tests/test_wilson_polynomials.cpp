#include <gtest/gtest.h>

#include "wnev/wilson_polynomials.hpp"

using namespace wnev;

namespace {

const wilson_params base{1.0, 1.5, 2.0, 2.5};

} // namespace

TEST(WilsonPoly, DegreeThreeValue) {
    cplx v = wilson_poly(3, base, 0.7);
    EXPECT_NEAR(v.real(), 37041.5925, 1e-9);
    EXPECT_NEAR(v.imag(), 0.0, 1e-9);
}

TEST(WilsonPoly, DegreeOneVanishes) {
    cplx v = wilson_poly(1, {1.0, 2.0, 3.0, 4.0}, 5.0);
    EXPECT_NEAR(std::abs(v), 0.0, 1e-12);
}

TEST(WilsonPoly, DegreeZeroIsOne) { EXPECT_EQ(wilson_poly(0, base, cplx(3.0, -1.0)), cplx(1.0)); }

TEST(WilsonPoly, NegativeDegreeRejected) { EXPECT_THROW(wilson_poly(-1, base, 0.0), error); }

TEST(WilsonPoly, LargeDegreeStaysFinite) {
    cplx v = wilson_poly(40, base, 100.0);
    EXPECT_TRUE(std::isfinite(std::abs(v)));
}

TEST(Lowering, ResidualSmall) {
    for (int n = 1; n <= 5; ++n)
        for (cplx x : {cplx(0.7), cplx(2.0, 1.0), cplx(-3.0, 0.5)})
            EXPECT_LT(lowering_residual(n, base, x).relative, 1e-11) << n << " " << x;
}

TEST(Lowering, AtOrigin) { EXPECT_LT(lowering_residual(2, base, 0.0).relative, 1e-10); }

TEST(Lowering, DegreeZeroRejected) { EXPECT_THROW(lowering_residual(0, base, 1.0), error); }

TEST(Weight, UnitParameters) {
    cplx v = weight_mu(1.0, {1.0, 1.0, 1.0, 1.0});
    EXPECT_NEAR(v.real(), 0.93338859861973515, 1e-12);
    EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(SturmLiouville, MeasureFormExact) {
    const wilson_params p{0.3, 0.7, 1.1, 1.4};
    for (int n = 1; n <= 4; ++n)
        for (cplx x : {cplx(0.8), cplx(2.5, 0.7), cplx(4.0, -1.5)})
            EXPECT_LT(sturm_liouville_residual(n, p, x).relative, 1e-9) << n << " " << x;
}

TEST(SturmLiouville, LiteralFormIsNotAnEigenrelation) {
    const wilson_params p{0.3, 0.7, 1.1, 1.4};
    EXPECT_GT(sturm_liouville_residual(2, p, cplx(2.5, 0.7), weight_form::literal).relative, 1e-3);
}

TEST(SturmLiouville, EigenOperator) {
    const wilson_params p{0.3, 0.7, 1.1, 1.4};
    for (int n = 0; n <= 3; ++n) EXPECT_LT(lw_eigen_residual(n, p, cplx(1.7, 0.4)).relative, 1e-9) << n;
}

TEST(Physics, EigensolutionShape) {
    EXPECT_EQ(physics_eigensolution(0, 3.0), cplx(1.0));
    EXPECT_NEAR(std::abs(physics_eigensolution(2, 0.25)), 0.0, 1e-14);
}

TEST(Physics, ResidualIsReported) {
    // The c = 1 relation does not close with these weights; only the value is recorded.
    auto r = physics_eigen_check(1, 1.9);
    EXPECT_TRUE(std::isfinite(r.relative));
    EXPECT_GT(r.scale, 0.0);
}

TEST(Physics, NegativeDegreeRejected) { EXPECT_THROW(physics_eigen_check(-1, 1.0), error); }
