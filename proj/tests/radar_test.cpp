#include "apxradar/radar.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "oracles.hpp"

using namespace apxradar;
using radar::EstimatorMode;
using radar::RadarConfig;
using radar::TargetModel;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RadarConfig default_cfg() { return {}; }

}  // namespace

TEST(Config, DefaultsValidate) {
    const RadarConfig cfg = default_cfg();
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_NEAR(cfg.bin_to_m(), 0.3049645, 1e-6);
    EXPECT_NEAR(cfg.max_range_m(), 156.1419, 1e-3);
    EXPECT_NEAR(cfg.elementary_symbol_s(), 1.0417e-6, 1e-9);
}

TEST(Config, Rejections) {
    RadarConfig cfg = default_cfg();
    cfg.n_subcarriers = 16;  // 16 * 16 != 512
    EXPECT_THROW(cfg.validate(), ParameterError);

    cfg = default_cfg();
    cfg.zc_root = 2;
    EXPECT_THROW(cfg.validate(), ParameterError);

    cfg = default_cfg();
    cfg.zc_root = 32;
    EXPECT_THROW(cfg.validate(), ParameterError);

    cfg = default_cfg();
    cfg.twiddle_sign = 2;
    EXPECT_THROW(cfg.validate(), ParameterError);

    cfg = default_cfg();
    cfg.total_symbol_s = 2e-6;  // cp + elementary symbol no longer adds up
    EXPECT_THROW(cfg.validate(), ParameterError);

    cfg = default_cfg();
    cfg.n_ifft = 500;
    EXPECT_THROW(cfg.validate(), ParameterError);
}

TEST(Target, DerivedQuantities) {
    const TargetModel tgt;
    EXPECT_DOUBLE_EQ(tgt.delay_s(), 100.0 / RadarConfig::c_mps);
    EXPECT_NEAR(tgt.delay_s(), 333.56e-9, 0.1e-9);
    const RadarConfig cfg = default_cfg();
    EXPECT_NEAR(tgt.doppler_hz(cfg), 4002.7696, 1e-3);
}

TEST(ZadoffChu, UnitModulusAndExamples) {
    const auto zc = radar::zadoff_chu(32, 1);
    ASSERT_EQ(zc.size(), 32u);
    EXPECT_NEAR(zc[0].real(), 1.0, 1e-15);
    EXPECT_NEAR(zc[0].imag(), 0.0, 1e-15);
    // i=8: phase -pi*64/32 = -2*pi wraps to 1
    EXPECT_NEAR(zc[8].real(), 1.0, 1e-12);
    EXPECT_NEAR(zc[8].imag(), 0.0, 1e-12);
    EXPECT_NEAR(zc[1].real(), 0.995184726672, 1e-9);
    EXPECT_NEAR(zc[1].imag(), -0.098017140330, 1e-9);
    for (const auto& c : zc) EXPECT_NEAR(std::abs(c), 1.0, 1e-12);
}

TEST(ZadoffChu, Rejections) {
    EXPECT_THROW((void)radar::zadoff_chu(31, 1), ParameterError);
    EXPECT_THROW((void)radar::zadoff_chu(0, 1), ParameterError);
    EXPECT_THROW((void)radar::zadoff_chu(32, 2), ParameterError);
    EXPECT_THROW((void)radar::zadoff_chu(32, 0), ParameterError);
    EXPECT_THROW((void)radar::zadoff_chu(32, 32), ParameterError);
}

TEST(Qam4, GrayMapping) {
    constexpr double s = std::numbers::sqrt2 / 2.0;
    EXPECT_EQ(radar::qam4_point(0, 0), std::complex<double>(s, s));
    EXPECT_EQ(radar::qam4_point(0, 1), std::complex<double>(-s, s));
    EXPECT_EQ(radar::qam4_point(1, 1), std::complex<double>(-s, -s));
    EXPECT_EQ(radar::qam4_point(1, 0), std::complex<double>(s, -s));
    for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1)
            EXPECT_DOUBLE_EQ(std::norm(radar::qam4_point(b0, b1)), 1.0);
}

TEST(Frame, DeterministicAndUnitModulus) {
    const RadarConfig cfg = default_cfg();
    const radar::TxFrame a = radar::generate_frame(cfg, 5);
    const radar::TxFrame b = radar::generate_frame(cfg, 5);
    EXPECT_EQ(a.bits, b.bits);
    ASSERT_EQ(a.bits.size(), 2u * 32u * 16u);
    const radar::TxFrame c = radar::generate_frame(cfg, 6);
    EXPECT_NE(a.bits, c.bits);
    for (const auto& q : a.qam) EXPECT_NEAR(std::abs(q), 1.0, 1e-12);
    for (const auto& p : a.precoded.v) EXPECT_NEAR(std::abs(p), 1.0, 1e-12);
    for (int k = 0; k < cfg.n_subcarriers; ++k)
        for (int m = 0; m < cfg.n_symbols; ++m) {
            const std::size_t cell = static_cast<std::size_t>(k + m * cfg.n_subcarriers);
            EXPECT_EQ(a.precoded.at(k, m), a.qam[cell] * a.zc[static_cast<std::size_t>(k)]);
        }
}

TEST(Channel, NoiselessPhaseRamps) {
    const RadarConfig cfg = default_cfg();
    const radar::TxFrame frame = radar::generate_frame(cfg, 1);
    const TargetModel tgt{50.0, 20.0, 1.0};
    const radar::ChannelOutput out = radar::apply_channel(frame, tgt, kInf, cfg, 0);
    EXPECT_TRUE(out.cp_exceeded);  // 333.6 ns delay > 260 ns prefix at defaults
    const double tau = tgt.delay_s();
    const double fd = tgt.doppler_hz(cfg);
    for (int m = 0; m < cfg.n_symbols; ++m)
        for (int k = 0; k < cfg.n_subcarriers; ++k) {
            const double phase = -2.0 * std::numbers::pi * k * cfg.subcarrier_spacing_hz * tau +
                                 2.0 * std::numbers::pi * fd * m * cfg.total_symbol_s;
            const std::complex<double> expect = frame.precoded.at(k, m) * std::polar(1.0, phase);
            EXPECT_NEAR(std::abs(out.rx.at(k, m) - expect), 0.0, 1e-12);
        }
    // per-subcarrier delay step at the defaults
    const std::complex<double> step = out.rx.at(1, 0) * std::conj(frame.precoded.at(1, 0));
    EXPECT_NEAR(std::arg(step), -2.0120112, 1e-4);
}

TEST(Channel, DopplerRotationPerSymbol) {
    const RadarConfig cfg = default_cfg();
    const radar::TxFrame frame = radar::generate_frame(cfg, 1);
    const TargetModel tgt{0.0, 20.0, 1.0};
    const radar::ChannelOutput out = radar::apply_channel(frame, tgt, kInf, cfg, 0);
    EXPECT_FALSE(out.cp_exceeded);
    const std::complex<double> rot = out.rx.at(0, 1) * std::conj(frame.precoded.at(0, 1));
    EXPECT_NEAR(std::arg(rot), 0.0326952, 1e-5);
    EXPECT_NEAR(std::arg(rot),
                2.0 * std::numbers::pi * tgt.doppler_hz(cfg) * cfg.total_symbol_s, 1e-12);
}

TEST(Channel, StationaryTargetAtZeroRangeIsTransparent) {
    const RadarConfig cfg = default_cfg();
    const radar::TxFrame frame = radar::generate_frame(cfg, 2);
    const radar::ChannelOutput out =
        radar::apply_channel(frame, TargetModel{0.0, 0.0, 1.0}, kInf, cfg, 0);
    for (std::size_t i = 0; i < out.rx.v.size(); ++i)
        EXPECT_EQ(out.rx.v[i], frame.precoded.v[i]);
}

TEST(Channel, NoiseIsSeededAndPresent) {
    const RadarConfig cfg = default_cfg();
    const radar::TxFrame frame = radar::generate_frame(cfg, 3);
    const TargetModel tgt;
    const radar::ChannelOutput a = radar::apply_channel(frame, tgt, 10.0, cfg, 7);
    const radar::ChannelOutput b = radar::apply_channel(frame, tgt, 10.0, cfg, 7);
    EXPECT_EQ(a.rx.v, b.rx.v);
    const radar::ChannelOutput c = radar::apply_channel(frame, tgt, 10.0, cfg, 8);
    EXPECT_NE(a.rx.v, c.rx.v);
}

TEST(Channel, BeyondUnambiguousRangeRejected) {
    const RadarConfig cfg = default_cfg();
    const radar::TxFrame frame = radar::generate_frame(cfg, 1);
    EXPECT_THROW((void)radar::apply_channel(frame, TargetModel{157.0, 0.0, 1.0}, kInf, cfg, 0),
                 ParameterError);
    EXPECT_NO_THROW((void)radar::apply_channel(frame, TargetModel{150.0, 0.0, 1.0}, kInf, cfg, 0));
}

TEST(Divide, ConjugateFormAndModulusConservation) {
    const RadarConfig cfg = default_cfg();
    const radar::TxFrame frame = radar::generate_frame(cfg, 4);
    const radar::ChannelOutput out = radar::apply_channel(frame, TargetModel{}, kInf, cfg, 0);
    const radar::Grid d = radar::divide_by_reference(out.rx, frame);
    for (const auto& c : d.v) EXPECT_NEAR(std::abs(c), 1.0, 1e-12);

    radar::Grid wrong(16, 16);
    EXPECT_THROW((void)radar::divide_by_reference(wrong, frame), InvalidSizeError);
}

TEST(Divide, QuantizationSaturates) {
    radar::Grid g(1, 1);
    g.at(0, 0) = {1.5, -2.0};
    const radar::DivGrid q = radar::quantize_grid(g);
    EXPECT_EQ(q.at(0, 0).re.raw, 32767);
    EXPECT_EQ(q.at(0, 0).im.raw, -32768);
}

TEST(Pipeline, NoiselessGoldenZeropadAverage) {
    const RadarConfig cfg = default_cfg();
    const TargetModel tgt;  // 50 m, 20 m/s
    const auto res =
        radar::run_pipeline(fxp::OperatorPair::accurate(), cfg, tgt, kInf, 1);
    EXPECT_EQ(res.estimate.peak_bin, 164);
    EXPECT_NEAR(res.estimate.range_m, 50.0142, 5e-3);
    EXPECT_TRUE(res.cp_exceeded);
    ASSERT_EQ(res.profile.power.size(), 512u);
    EXPECT_DOUBLE_EQ(res.profile.power[164], 1.0);

    // double-precision oracle lands on the same bin
    const radar::TxFrame frame = radar::generate_frame(cfg, derive_seed(1, 1));
    const oracle::RefEstimate ref = oracle::reference_estimate(frame, tgt, cfg);
    EXPECT_EQ(ref.peak_bin, res.estimate.peak_bin);
}

TEST(Pipeline, NoiselessGoldenFlattened) {
    RadarConfig cfg = default_cfg();
    cfg.estimator_mode = EstimatorMode::flattened;
    const TargetModel tgt{50.0, 0.0, 1.0};
    const auto res =
        radar::run_pipeline(fxp::OperatorPair::accurate(), cfg, tgt, kInf, 1);
    EXPECT_EQ(res.estimate.peak_bin, 160);
    EXPECT_NEAR(res.estimate.range_m, 48.794, 5e-3);

    const radar::TxFrame frame = radar::generate_frame(cfg, derive_seed(1, 1));
    const oracle::RefEstimate ref = oracle::reference_estimate(frame, tgt, cfg);
    EXPECT_EQ(ref.peak_bin, 160);
}

TEST(Pipeline, PayloadAndRootInvariance) {
    RadarConfig cfg = default_cfg();
    const TargetModel tgt;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto res =
            radar::run_pipeline(fxp::OperatorPair::accurate(), cfg, tgt, kInf, seed);
        EXPECT_EQ(res.estimate.peak_bin, 164) << "seed " << seed;
    }
    for (const int root : {3, 5, 31}) {
        cfg.zc_root = root;
        const auto res =
            radar::run_pipeline(fxp::OperatorPair::accurate(), cfg, tgt, kInf, 1);
        EXPECT_EQ(res.estimate.peak_bin, 164) << "root " << root;
    }
}

TEST(Pipeline, DopplerInsensitivity) {
    const RadarConfig cfg = default_cfg();
    const auto still = radar::run_pipeline(fxp::OperatorPair::accurate(), cfg,
                                           TargetModel{50.0, 0.0, 1.0}, kInf, 1);
    const auto moving = radar::run_pipeline(fxp::OperatorPair::accurate(), cfg,
                                            TargetModel{50.0, 20.0, 1.0}, kInf, 1);
    EXPECT_EQ(still.estimate.peak_bin, moving.estimate.peak_bin);
}

TEST(Pipeline, TwiddleSignInsensitivity) {
    RadarConfig pos = default_cfg();
    RadarConfig neg = default_cfg();
    neg.twiddle_sign = -1;
    const TargetModel tgt;
    const auto a = radar::run_pipeline(fxp::OperatorPair::accurate(), pos, tgt, kInf, 1);
    const auto b = radar::run_pipeline(fxp::OperatorPair::accurate(), neg, tgt, kInf, 1);
    EXPECT_EQ(a.estimate.peak_bin, b.estimate.peak_bin);
}

TEST(Pipeline, DeterministicUnderNoise) {
    const RadarConfig cfg = default_cfg();
    const auto a = radar::run_pipeline(fxp::OperatorPair::accurate(), cfg, TargetModel{}, 10.0, 9);
    const auto b = radar::run_pipeline(fxp::OperatorPair::accurate(), cfg, TargetModel{}, 10.0, 9);
    EXPECT_EQ(a.estimate.peak_bin, b.estimate.peak_bin);
    EXPECT_EQ(a.estimate.range_m, b.estimate.range_m);
    EXPECT_EQ(a.profile.power, b.profile.power);
}

TEST(Pipeline, AllZeroProfileRejected) {
    const RadarConfig cfg = default_cfg();
    radar::DivGrid zeros;
    zeros.n_sub = cfg.n_subcarriers;
    zeros.n_sym = cfg.n_symbols;
    zeros.v.assign(512, fxp::ComplexFx16{});
    EXPECT_THROW(
        (void)radar::periodogram_estimate(fxp::OperatorPair::accurate(), zeros, cfg),
        DegenerateInputError);

    radar::DivGrid wrong = zeros;
    wrong.n_sub = 16;
    EXPECT_THROW(
        (void)radar::periodogram_estimate(fxp::OperatorPair::accurate(), wrong, cfg),
        InvalidSizeError);
}

TEST(Probe, ZeroSigmaReproducesNoiselessBaseline) {
    const RadarConfig cfg = default_cfg();
    const TargetModel tgt;
    const radar::ProbeResult res =
        radar::resilience_probe(cfg, tgt, radar::ProbeBlock::estimator_input, 0.0, 3, 1);
    EXPECT_EQ(res.runs, 3);
    EXPECT_NEAR(res.mean_abs_error_m, 164 * cfg.bin_to_m() - 50.0, 1e-9);
    EXPECT_LT(res.mean_abs_error_m, 0.05);
    EXPECT_DOUBLE_EQ(res.mean_abs_error_m, res.max_abs_error_m);
}

TEST(Probe, DisturbanceDegradesMonotonically) {
    const RadarConfig cfg = default_cfg();
    const TargetModel tgt;
    const auto quiet =
        radar::resilience_probe(cfg, tgt, radar::ProbeBlock::division_input, 0.0, 20, 2);
    const auto loud =
        radar::resilience_probe(cfg, tgt, radar::ProbeBlock::division_input, 0.5, 20, 2);
    EXPECT_GE(loud.mean_abs_error_m, quiet.mean_abs_error_m);
}

TEST(Probe, Rejections) {
    const RadarConfig cfg = default_cfg();
    EXPECT_THROW((void)radar::resilience_probe(cfg, TargetModel{},
                                               radar::ProbeBlock::division_input, -0.1, 5, 1),
                 ParameterError);
    EXPECT_THROW((void)radar::resilience_probe(cfg, TargetModel{},
                                               radar::ProbeBlock::division_input, 0.1, 0, 1),
                 ParameterError);
}

TEST(Probe, BlockNamesRoundTrip) {
    EXPECT_EQ(radar::probe_block_name(radar::ProbeBlock::division_input), "division_input");
    EXPECT_EQ(radar::parse_probe_block("estimator_input"), radar::ProbeBlock::estimator_input);
    EXPECT_THROW((void)radar::parse_probe_block("nowhere"), ParameterError);
}
