#include <gtest/gtest.h>

#include <random>

#include "wnev/wilson_core.hpp"

using namespace wnev;

TEST(SqrtWithCut, BranchOnTheCut) {
    EXPECT_EQ(sqrt_with_cut(-1.0), I);
    EXPECT_EQ(sqrt_with_cut(-4.0), 2.0 * I);
    EXPECT_EQ(sqrt_with_cut(0.0), cplx(0.0));
}

TEST(SqrtWithCut, RightHalfPlane) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int j = 0; j < 100; ++j) {
        cplx x(u(rng), u(rng));
        cplx z = sqrt_with_cut(x);
        EXPECT_GE(z.real(), 0.0);
        EXPECT_NEAR(std::abs(z * z - x), 0.0, 1e-12 * std::abs(x));
    }
}

TEST(SqrtWithCut, GeneralShiftDirection) {
    cplx c(1.0, 1.0);
    cplx z = sqrt_with_cut(cplx(0.0, 3.0), c);
    EXPECT_NEAR(std::abs(z * z - cplx(0.0, 3.0)), 0.0, 1e-13);
    EXPECT_GE((z / (c / I)).real(), -1e-15);
    EXPECT_THROW(sqrt_with_cut(1.0, 0.0), error);
}

TEST(Lattice, ShiftsAreExactTranslations) {
    auto p = lattice_coord::from_x(cplx(2.0, 1.0));
    EXPECT_EQ(p.plus().z(), p.z() + 0.5 * I);
    EXPECT_EQ(p.shifted(4).z(), p.z() + 2.0 * I);
    EXPECT_NEAR(std::abs(p.plus().minus().z() - p.z()), 0.0, 1e-15);
}

TEST(WilsonOperator, SquareFixture) {
    cplx x(2.0, 1.0);
    cplx v = apply_DW([](cplx t) { return t * t; }, x);
    EXPECT_NEAR(std::abs(v - (2.0 * x - 0.5)), 0.0, 1e-14);
}

TEST(WilsonOperator, ConstantsAndLinear) {
    cplx x(-3.0, 0.5);
    EXPECT_EQ(apply_DW([](cplx) { return cplx(7.0); }, x), cplx(0.0));
    EXPECT_NEAR(std::abs(apply_DW([](cplx t) { return t; }, x) - 1.0), 0.0, 1e-15);
}

TEST(WilsonOperator, KernelElementDoublePrecision) {
    auto f = [](cplx x) { return std::cosh(2.0 * pi * sqrt_with_cut(x)); };
    for (cplx x : {cplx(0.3), cplx(4.0, 2.0), cplx(-20.0, 5.0)})
        EXPECT_LT(std::abs(apply_DW(f, x)), 1e-13 * std::max(1.0, std::abs(f(x))));
}

TEST(WilsonOperator, OriginNeedsDerivativeRule) {
    EXPECT_THROW(apply_DW([](cplx t) { return t; }, cplx(0.0)), error);
    cplx d = apply_DW_origin([](cplx t) { return t * t * t; });
    EXPECT_NEAR(std::abs(d - 3.0 * 0.0625), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(apply_DW_origin_exact([](cplx t) { return 2.0 * t; }) + 0.5), 0.0, 1e-15);
}

TEST(WilsonOperator, OriginRejectsKink) {
    EXPECT_THROW(apply_DW_origin([](cplx t) { return cplx(std::abs((t + 0.25).real()), 0.0); }), error);
}

TEST(WilsonOperator, PoleOnStencil) {
    const cplx pole(0.75, 1.0);  // (1 + i/2)^2
    auto f = [&](cplx t) { return t == pole ? cplx(INFINITY, 0.0) : 1.0 / (t - pole); };
    EXPECT_THROW(apply_DW(f, cplx(1.0)), error);
}

TEST(WilsonOperator, AveragingOperator) {
    cplx x(1.5, -0.5);
    cplx v = apply_AW([](cplx t) { return t; }, x);
    EXPECT_NEAR(std::abs(v - (x - 0.25)), 0.0, 1e-14);
}

TEST(WilsonOperator, IteratesMatchNested) {
    auto f = [](cplx t) { return std::exp(0.3 * t); };
    cplx x(2.0, 0.7);
    cplx nested = apply_DW([&](cplx y) { return apply_DW(f, y); }, x);
    EXPECT_NEAR(std::abs(apply_DW_iter(f, x, 2) - nested), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(apply_DW_iter([](cplx t) { return t * t; }, x, 2) - 2.0), 0.0, 1e-12);
    EXPECT_EQ(apply_DW_iter(f, x, 0), f(x));
}

TEST(WilsonOperator, CShiftSquareFixture) {
    for (cplx c : {cplx(0.3), cplx(0.2, 0.7)}) {
        cplx x(2.0, 1.0);
        cplx v = apply_DW([](cplx t) { return t * t; }, lattice_coord::from_x(x, c));
        EXPECT_NEAR(std::abs(v - 2.0 * x - 0.5 * c * c), 0.0, 1e-14);
    }
}

TEST(WilsonOperator, CShiftLimitOrder) {
    auto rep = cshift_limit_check([](cplx t) { return std::exp(t); }, [](cplx t) { return std::exp(t); }, cplx(1.3, 0.4),
                                  {0.2, 0.1, 0.05, 0.025});
    EXPECT_GT(rep.order, 1.9);
}

TEST(LogSpace, DiffAndSum) {
    cplx a = std::log(cplx(3.0, 1.0)), b = std::log(cplx(1.0, -2.0));
    EXPECT_NEAR(std::abs(std::exp(log_diff_exp(a, b)) - cplx(2.0, 3.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(std::exp(log_sum_exp(a, b)) - cplx(4.0, -1.0)), 0.0, 1e-14);
}

TEST(LogSpace, WilsonQuotientOfExp) {
    cplx z(3.0, 1.0);
    cplx l = log_apply_DW([](cplx w) { return w * w; }, z);
    cplx direct = apply_DW([](cplx t) { return std::exp(t); }, z * z);
    EXPECT_NEAR(std::abs(std::exp(l) - direct), 0.0, 1e-12 * std::abs(direct));
}
