#include <gtest/gtest.h>

#include "wnev/nevanlinna.hpp"

using namespace wnev;

TEST(CircleMean, Trigonometric) {
    auto v = circle_mean([](double t) { return std::cos(t) * std::cos(t); }, quad_tolerance{1e-12, 0.0});
    EXPECT_NEAR(v.value, 0.5, 1e-12);
}

TEST(Proximity, ExpIsROverPi) {
    auto f = model_exp();
    for (double r : {10.0, 1e3, 1e5}) EXPECT_NEAR(proximity(f, r).value, r / pi, std::max(1e-7, 2e-6 * r / pi)) << r;
    EXPECT_NEAR(proximity_signed(f, 1e3, -1).value, 1e3 / pi, 1e-6);
}

TEST(Proximity, ConstantModel) {
    auto row = characteristic(model_constant(5.0), 100.0);
    EXPECT_NEAR(row.T, std::log(5.0), 1e-12);
    EXPECT_NEAR(characteristic(model_constant(0.2), 100.0).T, 0.0, 1e-15);
}

TEST(Counting, GhypPoleSum) {
    auto f = model_ghyp_solution();
    EXPECT_NEAR(counting_integrated(f.poles, 100.0), 49.1186991254751735, 1e-11);
    EXPECT_EQ(counting_unintegrated(f.poles, 100.0), 55);
}

TEST(Counting, OriginDivisor) {
    auto s = divisor_stream::from_list({{cplx(0.0), 2, divisor_kind::pole}});
    EXPECT_NEAR(counting_integrated(s, 10.0), 2.0 * std::log(10.0), 1e-15);
}

TEST(Characteristic, NudgedRadius) {
    auto row = characteristic(model_g_iii(2, 1), 4.0);
    EXPECT_GT(row.r, 4.0);
    EXPECT_LT(row.r, 4.0 * 1.0001);
}

TEST(FirstFundamental, BoundedResidual) {
    auto grid = log_grid(1e2, 1e4, 10);
    auto rep = fft_residual(model_product_i(1.0), extended_value::finite(0.0), grid);
    EXPECT_TRUE(rep.bounded) << rep.slope;
    auto c = fft_residual(model_constant(2.0), extended_value::finite(1.0), grid);
    EXPECT_TRUE(c.bounded);
    EXPECT_THROW(fft_residual(model_constant(2.0), extended_value::finite(2.0), grid), error);
    EXPECT_THROW(fft_residual(model_exp(), extended_value::finite(3.0), grid), error);
}

TEST(LogWilsonProximity, ExpAsymptotic) {
    double r = 1e6;
    double v = log_wilson_proximity(model_exp(), r).value;
    EXPECT_NEAR(v / (2.0 * std::sqrt(r) / pi), 1.0, 0.02);
}

TEST(LogWilsonProximity, ConstantVanishes) { EXPECT_EQ(log_wilson_proximity(model_constant(3.0), 50.0).value, 0.0); }

TEST(LogWilsonQuotient, MatchesDirectQuotient) {
    auto f = model_product_i(1.0);
    cplx x(3.0, 2.0);
    cplx direct = apply_DW(f.as_function(), x) / f.evaluate(x).value;
    EXPECT_NEAR(std::abs(std::exp(log_wilson_quotient(f, x)) - direct), 0.0, 1e-10 * std::abs(direct));
}

TEST(PointwiseProbe, ExpRayMostlyWithinBound) {
    auto rep = pointwise_logdiff_probe(model_exp(), 0.3, log_grid(10.0, 1e5, 10), 0.1);
    EXPECT_GT(rep.tested, 0u);
    EXPECT_LE(rep.fraction, 0.1);
}

TEST(Grid, LogGridShape) {
    auto g = log_grid(1e2, 1e6, 25);
    EXPECT_EQ(g.size(), 101u);
    EXPECT_EQ(g.front(), 1e2);
    EXPECT_EQ(g.back(), 1e6);
    EXPECT_EQ(top_decade(g).size(), 26u);
    EXPECT_THROW(log_grid(10.0, 1.0), error);
}

TEST(Nudge, SoftPointsDoNotBlock) {
    int nudges = 0;
    std::vector<cplx> dense;
    for (int k = -100; k <= 100; ++k) dense.push_back(std::polar(100.0 * (1.0 + 1e-6 * k), 0.3 * k));
    double r = nudge_radius(100.0, {}, nudges, dense);
    EXPECT_EQ(nudges, 3);
    EXPECT_GT(r, 100.0);
    EXPECT_THROW(nudge_radius(100.0, dense, nudges), error);
}

TEST(Proximity, DenseZerosOfGhyp) {
    auto f = model_ghyp_solution();
    auto m = log_wilson_proximity(f, 1e5);
    EXPECT_TRUE(std::isfinite(m.value));
    EXPECT_GE(m.value, 0.0);
}
