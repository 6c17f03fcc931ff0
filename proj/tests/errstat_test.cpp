#include "apxradar/errstat.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace apxradar;
using errstat::ErrorMetrics;
using errstat::EvalMode;
using fxp::AdderModel;
using fxp::MultModel;

namespace {

void expect_equal_to_oracle_adder(const AdderModel& model, int width,
                                  std::int64_t (*ref)(std::int64_t, std::int64_t, int, int),
                                  int param) {
    const ErrorMetrics m = errstat::eval_adder_metrics(model, width, EvalMode::exhaustive);
    const oracle::MetricAggregates agg = oracle::enumerate_metrics(
        width, [&](std::int64_t a, std::int64_t b) { return oracle::add_acc(a, b, width); },
        [&](std::int64_t a, std::int64_t b) { return ref(a, b, param, width); });
    EXPECT_EQ(m.pairs_evaluated, agg.pairs) << model.spec_string();
    EXPECT_EQ(m.zero_exact_skipped, agg.zero_exact) << model.spec_string();
    EXPECT_EQ(m.ep_pct, agg.ep_pct()) << model.spec_string();
    EXPECT_EQ(m.mae_pct, agg.mae_pct(width + 1)) << model.spec_string();
    EXPECT_EQ(m.wce_pct, agg.wce_pct(width + 1)) << model.spec_string();
    EXPECT_EQ(m.mre_pct, agg.mre_pct()) << model.spec_string();
}

void expect_equal_to_oracle_mult(const MultModel& model, int width,
                                 std::int64_t (*ref)(std::int64_t, std::int64_t, int, int),
                                 int param) {
    const ErrorMetrics m = errstat::eval_mult_metrics(model, width, EvalMode::exhaustive);
    const oracle::MetricAggregates agg = oracle::enumerate_metrics(
        width, [&](std::int64_t a, std::int64_t b) { return oracle::mul_acc(a, b, width); },
        [&](std::int64_t a, std::int64_t b) { return ref(a, b, param, width); });
    EXPECT_EQ(m.pairs_evaluated, agg.pairs) << model.spec_string();
    EXPECT_EQ(m.zero_exact_skipped, agg.zero_exact) << model.spec_string();
    EXPECT_EQ(m.ep_pct, agg.ep_pct()) << model.spec_string();
    EXPECT_EQ(m.mae_pct, agg.mae_pct(2 * width)) << model.spec_string();
    EXPECT_EQ(m.wce_pct, agg.wce_pct(2 * width)) << model.spec_string();
    EXPECT_EQ(m.mre_pct, agg.mre_pct()) << model.spec_string();
}

}  // namespace

TEST(Exhaustive, AccurateModelsAreErrorFree) {
    for (const int width : {4, 8}) {
        const ErrorMetrics a =
            errstat::eval_adder_metrics(AdderModel::acc(), width, EvalMode::exhaustive);
        EXPECT_EQ(a.ep_pct, 0.0);
        EXPECT_EQ(a.mae_pct, 0.0);
        EXPECT_EQ(a.wce_pct, 0.0);
        EXPECT_EQ(a.mre_pct, 0.0);
        EXPECT_EQ(a.pairs_evaluated, std::uint64_t{1} << (2 * width));
        EXPECT_EQ(a.mode, EvalMode::exhaustive);
        EXPECT_FALSE(a.seed.has_value());
        const ErrorMetrics m =
            errstat::eval_mult_metrics(MultModel::acc(), width, EvalMode::exhaustive);
        EXPECT_EQ(m.ep_pct, 0.0);
        EXPECT_EQ(m.wce_pct, 0.0);
    }
}

TEST(Exhaustive, MatchesOracleEnumeratorWidth4) {
    expect_equal_to_oracle_adder(AdderModel::loa(1), 4, oracle::add_loa, 1);
    expect_equal_to_oracle_adder(AdderModel::loa(2), 4, oracle::add_loa, 2);
    expect_equal_to_oracle_adder(AdderModel::loa(3), 4, oracle::add_loa, 3);
    expect_equal_to_oracle_adder(AdderModel::tra(1), 4, oracle::add_tra, 1);
    expect_equal_to_oracle_adder(AdderModel::tra(3), 4, oracle::add_tra, 3);
    expect_equal_to_oracle_adder(AdderModel::bcp(1), 4, oracle::add_bcp, 1);
    expect_equal_to_oracle_adder(AdderModel::bcp(2), 4, oracle::add_bcp, 2);
    expect_equal_to_oracle_adder(AdderModel::bcp(4), 4, oracle::add_bcp, 4);
    expect_equal_to_oracle_mult(MultModel::tmul(1), 4, oracle::mul_tmul, 1);
    expect_equal_to_oracle_mult(MultModel::tmul(3), 4, oracle::mul_tmul, 3);
    expect_equal_to_oracle_mult(MultModel::ppp(1), 4, oracle::mul_ppp, 1);
    expect_equal_to_oracle_mult(MultModel::ppp(3), 4, oracle::mul_ppp, 3);
}

TEST(Exhaustive, MatchesOracleEnumeratorWidth8) {
    expect_equal_to_oracle_adder(AdderModel::loa(4), 8, oracle::add_loa, 4);
    expect_equal_to_oracle_adder(AdderModel::tra(4), 8, oracle::add_tra, 4);
    expect_equal_to_oracle_adder(AdderModel::bcp(4), 8, oracle::add_bcp, 4);
    expect_equal_to_oracle_mult(MultModel::tmul(4), 8, oracle::mul_tmul, 4);
    expect_equal_to_oracle_mult(MultModel::ppp(4), 8, oracle::mul_ppp, 4);
}

TEST(Exhaustive, Tra1Width4SpotValues) {
    // sum error is (a&1)+(b&1): P(0)=1/4, so EP 75%; mean |err| 1 over the
    // 5-bit output range 31
    const ErrorMetrics m =
        errstat::eval_adder_metrics(AdderModel::tra(1), 4, EvalMode::exhaustive);
    EXPECT_DOUBLE_EQ(m.ep_pct, 75.0);
    EXPECT_NEAR(m.mae_pct, 100.0 / 31.0, 1e-12);
    EXPECT_NEAR(m.wce_pct, 200.0 / 31.0, 1e-12);
    EXPECT_EQ(m.pairs_evaluated, 256u);
    EXPECT_EQ(m.zero_exact_skipped, 15u);
}

TEST(Exhaustive, RejectsUnsupportedWidths) {
    EXPECT_THROW((void)errstat::eval_adder_metrics(AdderModel::acc(), 5, EvalMode::exhaustive),
                 ParameterError);
    EXPECT_THROW((void)errstat::eval_mult_metrics(MultModel::acc(), 12, EvalMode::exhaustive),
                 ParameterError);
}

TEST(Sampled, DeterministicForAGivenSeed) {
    const AdderModel model = AdderModel::loa(6);
    const ErrorMetrics a =
        errstat::eval_adder_metrics(model, 16, EvalMode::sampled, 42, 200000);
    const ErrorMetrics b =
        errstat::eval_adder_metrics(model, 16, EvalMode::sampled, 42, 200000);
    EXPECT_EQ(a.ep_pct, b.ep_pct);
    EXPECT_EQ(a.mae_pct, b.mae_pct);
    EXPECT_EQ(a.wce_pct, b.wce_pct);
    EXPECT_EQ(a.mre_pct, b.mre_pct);
    EXPECT_EQ(a.pairs_evaluated, 200000u);
    EXPECT_EQ(a.seed, std::optional<std::uint64_t>{42});
    EXPECT_EQ(a.mode, EvalMode::sampled);

    const ErrorMetrics c =
        errstat::eval_adder_metrics(model, 16, EvalMode::sampled, 43, 200000);
    EXPECT_NE(a.mae_pct, c.mae_pct);
}

TEST(Sampled, RequiresSeed) {
    EXPECT_THROW((void)errstat::eval_adder_metrics(AdderModel::loa(2), 16, EvalMode::sampled),
                 ParameterError);
    EXPECT_THROW((void)errstat::eval_mult_metrics(MultModel::ppp(2), 16, EvalMode::sampled),
                 ParameterError);
}

TEST(Sampled, ApproachesExhaustiveTruthAtWidth8) {
    // same distribution, so a large sample lands near the exact EP
    const ErrorMetrics ex =
        errstat::eval_mult_metrics(MultModel::tmul(2), 8, EvalMode::exhaustive);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> dist(-128, 127);
    oracle::MetricAggregates agg;
    for (int i = 0; i < 400000; ++i) {
        const std::int64_t a = dist(rng), b = dist(rng);
        agg.feed(oracle::mul_acc(a, b, 8), oracle::mul_tmul(a, b, 2, 8));
    }
    EXPECT_NEAR(ex.ep_pct, agg.ep_pct(), 0.5);
}

TEST(Fixture, PublishedAdderFigures) {
    const AdderModel m = AdderModel::fixture("add16se_3BD");
    const ErrorMetrics em = errstat::eval_adder_metrics(m, 16, EvalMode::exhaustive);
    EXPECT_DOUBLE_EQ(em.ep_pct, 99.02);
    EXPECT_DOUBLE_EQ(em.mae_pct, 0.046);
    EXPECT_DOUBLE_EQ(em.mre_pct, 0.96);
    EXPECT_TRUE(std::isnan(em.wce_pct));
    EXPECT_EQ(em.mode, EvalMode::fixture);
    EXPECT_EQ(em.pairs_evaluated, 0u);
    EXPECT_FALSE(em.seed.has_value());
}

TEST(Fixture, PublishedMultFigures) {
    const MultModel m = MultModel::fixture("mul16s_HFB");
    const ErrorMetrics em = errstat::eval_mult_metrics(m, 16, EvalMode::sampled, 1);
    EXPECT_DOUBLE_EQ(em.ep_pct, 98.43);
    EXPECT_DOUBLE_EQ(em.mae_pct, 0.002);
    EXPECT_DOUBLE_EQ(em.mre_pct, 0.22);
    EXPECT_TRUE(std::isnan(em.wce_pct));
    EXPECT_EQ(em.mode, EvalMode::fixture);
}

TEST(Fixture, UnknownNameOrReducedWidthRejected) {
    EXPECT_THROW((void)errstat::eval_adder_metrics(AdderModel::fixture("mystery"), 16,
                                                   EvalMode::exhaustive),
                 ParameterError);
    EXPECT_THROW((void)errstat::eval_mult_metrics(MultModel::fixture("mystery"), 16,
                                                  EvalMode::exhaustive),
                 ParameterError);
    EXPECT_THROW((void)errstat::eval_adder_metrics(AdderModel::fixture("add16se_3BD"), 8,
                                                   EvalMode::exhaustive),
                 ParameterError);
}

TEST(Fixture, FixtureModeInvalidForFunctionalModels) {
    EXPECT_THROW((void)errstat::eval_adder_metrics(AdderModel::loa(1), 8, EvalMode::fixture),
                 ParameterError);
}

TEST(ModeName, RoundTrip) {
    EXPECT_EQ(errstat::mode_name(EvalMode::exhaustive), "exhaustive");
    EXPECT_EQ(errstat::mode_name(EvalMode::sampled), "sampled");
    EXPECT_EQ(errstat::mode_name(EvalMode::fixture), "fixture");
}
