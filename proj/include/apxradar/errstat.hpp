#pragma once

// Error metrics (EP, MAE, WCE, MRE) of an approximate operator against the
// exact one: exhaustive enumeration at reduced widths, seeded sampling at 16
// bits. Comparisons run on raw pre-saturation outputs, so the adder output
// width is width+1 bits and the multiplier output width is 2*width bits;
// MAE/WCE are percent of the full output range (2^W_out - 1).

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string_view>

#include "apxradar/common.hpp"
#include "apxradar/fxp.hpp"

namespace apxradar::errstat {

enum class EvalMode { exhaustive, sampled, fixture };

inline constexpr std::uint64_t kDefaultSamples = 10'000'000;

struct ErrorMetrics {
    double ep_pct = 0.0;   // percent of input pairs with approx != exact
    double mae_pct = 0.0;  // mean |error| / (2^W_out - 1), percent
    double wce_pct = 0.0;  // max |error| / (2^W_out - 1), percent; NaN if unpublished
    double mre_pct = 0.0;  // mean |error| / |exact| over exact != 0, percent
    std::uint64_t pairs_evaluated = 0;
    std::uint64_t zero_exact_skipped = 0;
    EvalMode mode = EvalMode::exhaustive;
    std::optional<std::uint64_t> seed;
};

/// Published error figures for a named external circuit, carried verbatim.
struct PublishedMetrics {
    double ep_pct;
    double mae_pct;
    double mre_pct;
    std::optional<double> wce_pct;
};

[[nodiscard]] inline std::optional<PublishedMetrics> published_adder_metrics(
    std::string_view name) {
    if (name == "add16se_3BD") return PublishedMetrics{99.02, 0.046, 0.96, {}};
    return std::nullopt;
}

[[nodiscard]] inline std::optional<PublishedMetrics> published_mult_metrics(
    std::string_view name) {
    if (name == "mul16s_HFB") return PublishedMetrics{98.43, 0.002, 0.22, {}};
    return std::nullopt;
}

namespace detail {

struct Accumulator {
    std::uint64_t pairs = 0;
    std::uint64_t mismatches = 0;
    std::uint64_t abs_err_sum = 0;
    std::uint64_t abs_err_max = 0;
    std::uint64_t zero_exact = 0;
    long double rel_err_sum = 0.0L;

    constexpr void feed(int64_t exact, int64_t approx) {
        ++pairs;
        const std::uint64_t abs_err =
            static_cast<std::uint64_t>(approx >= exact ? approx - exact : exact - approx);
        if (abs_err != 0) ++mismatches;
        abs_err_sum += abs_err;
        if (abs_err > abs_err_max) abs_err_max = abs_err;
        if (exact == 0) {
            ++zero_exact;
        } else {
            rel_err_sum += static_cast<long double>(abs_err) /
                           static_cast<long double>(exact < 0 ? -exact : exact);
        }
    }

    [[nodiscard]] ErrorMetrics finish(int w_out, EvalMode mode,
                                      std::optional<std::uint64_t> seed) const {
        const long double denom = std::exp2l(w_out) - 1.0L;
        ErrorMetrics m;
        m.pairs_evaluated = pairs;
        m.zero_exact_skipped = zero_exact;
        m.mode = mode;
        m.seed = seed;
        if (pairs == 0) return m;
        m.ep_pct = static_cast<double>(100.0L * mismatches / pairs);
        m.mae_pct = static_cast<double>(100.0L * abs_err_sum / pairs / denom);
        m.wce_pct = static_cast<double>(100.0L * abs_err_max / denom);
        const std::uint64_t nonzero = pairs - zero_exact;
        m.mre_pct = nonzero ? static_cast<double>(100.0L * rel_err_sum / nonzero) : 0.0;
        return m;
    }
};

inline void check_width(int width) {
    if (width != 4 && width != 8 && width != 16)
        throw ParameterError("metrics width must be 4, 8 or 16");
}

// ExactFn/ApproxFn: (int64_t a, int64_t b) -> int64_t raw output.
template <class ExactFn, class ApproxFn>
ErrorMetrics eval(int width, int w_out, EvalMode mode, std::optional<std::uint64_t> seed,
                  std::uint64_t samples, ExactFn&& exact, ApproxFn&& approx) {
    check_width(width);
    const int64_t lo = -(int64_t{1} << (width - 1));
    const int64_t hi = (int64_t{1} << (width - 1)) - 1;
    Accumulator acc;
    if (mode == EvalMode::exhaustive) {
        for (int64_t a = lo; a <= hi; ++a)
            for (int64_t b = lo; b <= hi; ++b) acc.feed(exact(a, b), approx(a, b));
        return acc.finish(w_out, mode, {});
    }
    if (mode == EvalMode::sampled) {
        if (!seed) throw ParameterError("sampled metrics require a seed");
        if (samples == 0) samples = kDefaultSamples;
        std::mt19937_64 rng(*seed);
        std::uniform_int_distribution<int64_t> dist(lo, hi);
        for (std::uint64_t i = 0; i < samples; ++i) {
            const int64_t a = dist(rng);
            const int64_t b = dist(rng);
            acc.feed(exact(a, b), approx(a, b));
        }
        return acc.finish(w_out, mode, seed);
    }
    throw ParameterError("fixture mode is only produced by fixture models");
}

[[nodiscard]] inline ErrorMetrics from_published(const PublishedMetrics& p) {
    ErrorMetrics m;
    m.ep_pct = p.ep_pct;
    m.mae_pct = p.mae_pct;
    m.mre_pct = p.mre_pct;
    m.wce_pct = p.wce_pct.value_or(std::numeric_limits<double>::quiet_NaN());
    m.mode = EvalMode::fixture;
    return m;
}

}  // namespace detail

[[nodiscard]] inline ErrorMetrics eval_adder_metrics(const fxp::AdderModel& model, int width,
                                                     EvalMode mode,
                                                     std::optional<std::uint64_t> seed = {},
                                                     std::uint64_t samples = 0) {
    if (!model.functional()) {
        if (width != 16) throw ParameterError("published fixture metrics are 16-bit only");
        if (auto p = published_adder_metrics(model.fixture_name)) return detail::from_published(*p);
        throw ParameterError("no published metrics for fixture adder '" + model.fixture_name +
                             "'");
    }
    return detail::eval(
        width, width + 1, mode, seed, samples, [](int64_t a, int64_t b) { return a + b; },
        [&](int64_t a, int64_t b) { return fxp::adder_raw(model, a, b, width); });
}

[[nodiscard]] inline ErrorMetrics eval_mult_metrics(const fxp::MultModel& model, int width,
                                                    EvalMode mode,
                                                    std::optional<std::uint64_t> seed = {},
                                                    std::uint64_t samples = 0) {
    if (!model.functional()) {
        if (width != 16) throw ParameterError("published fixture metrics are 16-bit only");
        if (auto p = published_mult_metrics(model.fixture_name)) return detail::from_published(*p);
        throw ParameterError("no published metrics for fixture multiplier '" +
                             model.fixture_name + "'");
    }
    return detail::eval(
        width, 2 * width, mode, seed, samples, [](int64_t a, int64_t b) { return a * b; },
        [&](int64_t a, int64_t b) { return fxp::mult_raw(model, a, b, width); });
}

[[nodiscard]] constexpr std::string_view mode_name(EvalMode m) {
    switch (m) {
        case EvalMode::exhaustive: return "exhaustive";
        case EvalMode::sampled: return "sampled";
        case EvalMode::fixture: return "fixture";
    }
    return {};
}

}  // namespace apxradar::errstat
