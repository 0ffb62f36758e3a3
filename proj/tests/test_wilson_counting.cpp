#include <gtest/gtest.h>

#include "wnev/io.hpp"
#include "wnev/wilson_counting.hpp"

using namespace wnev;

namespace {

std::vector<divisor> figure_poles() {
    return io::load_synthetic(std::string(WNEV_DATA_DIR) + "/figure_dataset.json").divisors;
}

} // namespace

TEST(OrderRule, DistinctMultiplicities) {
    auto o = dw_order_rule(2, 1);
    ASSERT_TRUE(o);
    EXPECT_EQ(*o, 1);
    EXPECT_EQ(tilde_contribution(2, *o), 1);

    o = dw_order_rule(1, 0);
    ASSERT_TRUE(o);
    EXPECT_EQ(*o, 0);
    EXPECT_EQ(tilde_contribution(1, *o), 1);

    o = dw_order_rule(1, 3);
    ASSERT_TRUE(o);
    EXPECT_EQ(*o, 1);
    EXPECT_EQ(tilde_contribution(1, *o), 0);
}

TEST(OrderRule, EqualMultiplicitiesUndetermined) { EXPECT_FALSE(dw_order_rule(2, 2)); }

TEST(OrderRule, AmbiguousWithoutEvaluator) {
    auto s = dw_vanishing_order_at_shift(nullptr, extended_value::infinity(), cplx(1.0, 0.3), 2, 2);
    EXPECT_TRUE(s.ambiguous);
    EXPECT_EQ(s.order, 2);
}

TEST(Counts, ProductZerosAreAllChained) {
    auto f = model_product_i(1.0);
    for (double r : {50.0, 400.0, 3000.0}) {
        auto row = wilson_counts(f, extended_value::finite(0.0), r);
        EXPECT_LE(row.n_W_tilde, 1) << r;
        EXPECT_GE(row.n_W, 0);
    }
}

TEST(Counts, GiiiTildeGrowsLikeHalfRoot) {
    auto f = model_g_iii(2, 1);
    auto grid = log_grid(1e3, 1e5, 5);
    auto rows = wilson_count_sweep(f, extended_value::finite(0.0), grid);
    const auto& last = rows.back();
    EXPECT_NEAR(double(last.n_W_tilde) / std::sqrt(last.r), 0.5, 0.05);
}

TEST(Counts, IntegratedCountsAreMonotone) {
    auto f = model_g_iii(2, 1);
    auto rows = wilson_count_sweep(f, extended_value::finite(0.0), log_grid(10.0, 1e4, 5));
    for (std::size_t k = 1; k < rows.size(); ++k) {
        EXPECT_GE(rows[k].N_W_tilde, rows[k - 1].N_W_tilde);
        EXPECT_GE(rows[k].n_W_tilde, rows[k - 1].n_W_tilde);
    }
}

TEST(Counts, MissingDivisorForOtherValues) {
    EXPECT_THROW(wilson_counts(model_exp(), extended_value::finite(2.0), 10.0), error);
}

TEST(Chains, ProductZerosFormOneChain) {
    auto rep = detect_chains(model_product_i(1.0), extended_value::finite(0.0), I, 400.0);
    ASSERT_EQ(rep.chains.size(), 1u);
    EXPECT_NEAR(std::abs(rep.chains[0].start - cplx(1.0)), 0.0, 1e-12);
    EXPECT_TRUE(rep.residual.empty());
}

TEST(Chains, EmptyDivisor) {
    auto rep = detect_chains(std::vector<divisor>{}, extended_value::infinity(), I, 100.0);
    EXPECT_TRUE(rep.chains.empty());
    EXPECT_TRUE(rep.residual.empty());
}

TEST(Chains, FigureDataset) {
    auto poles = figure_poles();
    auto rep = detect_chains(poles, extended_value::infinity(), I, 300.0);
    EXPECT_EQ(rep.chains.size(), 3u);
    EXPECT_EQ(ew_set(poles, extended_value::infinity(), I, 300.0).size(), 5u);
}

TEST(Verdict, ProductZerosCandidate) {
    EXPECT_TRUE(exceptional_value_verdict(model_product_i(1.0), extended_value::finite(0.0), 1e3).candidate);
}

TEST(Verdict, GiiiNotCandidate) {
    EXPECT_FALSE(exceptional_value_verdict(model_g_iii(2, 1), extended_value::finite(0.0), 1e3).candidate);
}

TEST(Verdict, RationalPolesCandidate) {
    auto f = model_rational({{cplx(2.0, 1.0), 1, divisor_kind::pole}, {cplx(-3.0), 2, divisor_kind::pole}});
    auto v = exceptional_value_verdict(f, extended_value::infinity(), 1e3);
    EXPECT_TRUE(v.candidate);
    EXPECT_EQ(v.checkpoints.size(), 5u);
}

TEST(Defects, RangesForGiii) {
    auto d = estimate_defects(model_g_iii(2, 1), extended_value::finite(0.0), log_grid(10.0, 1e4, 8));
    EXPECT_GE(d.theta_W, 0.0);
    EXPECT_LE(d.theta_W, 1.0);
    EXPECT_GE(d.delta, 0.0);
    EXPECT_LE(d.delta, 1.0);
    EXPECT_GE(d.vartheta_W, 0.0);
}

TEST(Defects, ShortGridRejected) {
    EXPECT_THROW(estimate_defects(model_exp(), extended_value::finite(0.0), log_grid(10.0, 100.0, 8)), error);
}

TEST(Defects, ExpOmitsZeroAndInfinity) {
    auto rep = defect_sum_check(model_exp(), {extended_value::finite(0.0), extended_value::infinity()},
                                log_grid(10.0, 1e4, 8));
    EXPECT_NEAR(rep.sum, 2.0, 1e-9);
    EXPECT_TRUE(rep.sum_ok);
}

TEST(Ramification, NonNegativeForGiii) {
    for (double r : {20.0, 200.0}) EXPECT_GE(ramification_term(model_g_iii(2, 1), r), -1e-6) << r;
}

TEST(Ramification, ConstantRejected) { EXPECT_THROW(ramification_term(model_constant(2.0), 10.0), error); }

TEST(Sharing, SameDivisorShares) {
    auto f = model_product_i(1.0).zeros.enumerate(2e3);
    auto rep = share_im_wilson(f, f, extended_value::finite(0.0), log_grid(10.0, 1e3, 5));
    EXPECT_TRUE(rep.shared);
}

TEST(Sharing, ExtraIsolatedPointStillShares) {
    auto f = model_product_i(1.0).zeros.enumerate(2e3);
    auto g = f;
    g.push_back({cplx(7.3, 2.1), 1, divisor_kind::zero});
    g = normalize_divisors(g);
    auto rep = share_im_wilson(f, g, extended_value::finite(0.0), log_grid(10.0, 1e3, 5));
    EXPECT_TRUE(rep.shared);
}

TEST(Sharing, DifferentFamiliesDoNot) {
    auto f = model_g_iii(2, 1).zeros.enumerate(2e3);
    auto g = model_product_i(1.0).zeros.enumerate(2e3);
    auto rep = share_im_wilson(f, g, extended_value::finite(0.0), log_grid(10.0, 1e3, 5));
    EXPECT_FALSE(rep.shared);
}
