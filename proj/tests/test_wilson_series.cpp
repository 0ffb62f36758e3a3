#include <gtest/gtest.h>

#include "wnev/wilson_core.hpp"
#include "wnev/wilson_series.hpp"

using namespace wnev;

TEST(Tau, Values) {
    EXPECT_EQ(tau(0, 0.3, 5.0), cplx(1.0));
    EXPECT_NEAR(std::abs(tau(2, 1.0, cplx(1.0, 1.0) * cplx(1.0, 1.0))), 0.0, 1e-14);
    cplx v = tau(3, 0.5, 2.0);
    EXPECT_NEAR(v.real(), -24.171875, 1e-13);
    EXPECT_NEAR(v.imag(), 19.6875, 1e-13);
}

TEST(Expand, BasisElementIsUnitVector) {
    cplx a(0.3, 0.2);
    auto s = expand([&](cplx x) { return tau(2, a, x); }, a, 5, false);
    for (int k = 0; k <= 5; ++k) EXPECT_NEAR(std::abs(s.coefficients[k] - (k == 2 ? 1.0 : 0.0)), 0.0, 1e-12) << k;
}

TEST(Expand, QuadraticRoundTrip) {
    auto f = [](cplx x) { return x * x - 3.0 * x + 1.0; };
    auto s = expand(f, 0.5, 2, false);
    for (cplx x : {cplx(0.0), cplx(2.0, -1.0), cplx(-7.0, 4.0)}) EXPECT_NEAR(std::abs(reconstruct(s, x) - f(x)), 0.0, 1e-10);
}

TEST(Expand, CoshRootConverges) {
    auto f = [](cplx x) { return std::cosh(sqrt_with_cut(x)); };
    auto s = expand(f, 0.0, 40);
    EXPECT_TRUE(s.gate_checked);
    EXPECT_GT(s.gate_margin, 0.0);
    double worst = 0.0;
    for (int k = 0; k < 32; ++k) {
        cplx x = std::polar(10.0 * (k % 4 + 1) / 4.0, 2.0 * pi * (k + 0.5) / 32.0);
        worst = std::max(worst, std::abs(reconstruct(s, x) - f(x)) / std::max(1.0, std::abs(f(x))));
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(Gate, SignsAroundThreshold) {
    EXPECT_GT(growth_gate([](cplx x) { return std::cosh(sqrt_with_cut(x)); }), 0.0);
    EXPECT_LT(growth_gate([](cplx x) { return std::cosh(pi * sqrt_with_cut(x)); }), 0.0);
}

TEST(Gate, ConstantFunction) {
    EXPECT_NEAR(growth_gate([](cplx) { return cplx(1.0); }), 2.0 * std::log(2.0), 1e-14);
}

TEST(Reconstruct, EmptySeries) {
    wilson_series s;
    EXPECT_EQ(reconstruct(s, 3.0), cplx(0.0));
}

TEST(Expand, Triangular) {
    // Leading coefficients do not depend on the truncation.
    auto f = [](cplx x) { return std::exp(0.1 * x); };
    auto s5 = expand(f, 0.4, 5, false);
    auto s9 = expand(f, 0.4, 9, false);
    for (int k = 0; k <= 5; ++k) EXPECT_EQ(s5.coefficients[k], s9.coefficients[k]);
}

TEST(Expand, NegativeTruncationRejected) {
    EXPECT_THROW(expand([](cplx) { return cplx(1.0); }, 0.0, -1), error);
}

TEST(Expand, CoincidentNodesSingular) {
    // a = -i/2 makes nodes 0 and 1 coincide.
    EXPECT_THROW(expand([](cplx x) { return x; }, cplx(0.0, -0.5), 3, false), error);
}
