#pragma once

// Q1.15 fixed-point numeric core: the universal 16-bit signed signal word,
// exact and approximate adder/multiplier behavioral models, and complex
// arithmetic built from an injected operator pair.
//
// Approximate families (parameter 0 resp. full block width is the exact case):
//   LOA(k)  lower-OR adder: low k result bits are the bitwise OR of the
//           operands' low bits, upper part added exactly with carry-in 0
//   TRA(k)  truncation adder: low k result bits forced to 0
//   BCP(b)  block-carry-prediction adder: b-bit blocks added independently,
//           every inter-block carry predicted 0
//   TMUL(k) operand-truncation multiplier: low k magnitude bits of both
//           operands zeroed before an exact multiply
//   PPP(r)  partial-product perforation: the r least-significant rows of the
//           unsigned array multiply are dropped (rows come from the second
//           operand), sign reapplied
//
// FIXTURE operators name external circuits for which only published error
// and cost figures exist; they carry no functional model and refuse to
// compute.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>

#include "apxradar/common.hpp"

namespace apxradar::fxp {

inline constexpr int16_t kRawMax = 32767;
inline constexpr int16_t kRawMin = -32768;
inline constexpr double kScale = 32768.0;  // 2^15

/// Q1.15 sample: value = raw / 2^15, range [-1, 1 - 2^-15].
struct Fx16 {
    int16_t raw = 0;

    constexpr Fx16() = default;
    constexpr explicit Fx16(int16_t r) : raw(r) {}

    [[nodiscard]] constexpr double value() const { return raw / kScale; }

    friend constexpr bool operator==(Fx16, Fx16) = default;
};

struct ComplexFx16 {
    Fx16 re;
    Fx16 im;

    friend constexpr bool operator==(ComplexFx16, ComplexFx16) = default;
};

[[nodiscard]] constexpr int16_t saturate16(int64_t raw) {
    if (raw > kRawMax) return kRawMax;
    if (raw < kRawMin) return kRawMin;
    return static_cast<int16_t>(raw);
}

/// Round-to-nearest-even into Q1.15; out-of-range values saturate.
[[nodiscard]] inline Fx16 quantize(double x) {
    const double r = std::nearbyint(x * kScale);
    if (r > kRawMax) return Fx16(kRawMax);
    if (r < kRawMin) return Fx16(kRawMin);
    return Fx16(static_cast<int16_t>(r));
}

/// 16-bit two's-complement negation; INT16_MIN wraps to itself as in hardware.
[[nodiscard]] constexpr Fx16 negate(Fx16 x) {
    return Fx16(x.raw == kRawMin ? kRawMin : static_cast<int16_t>(-x.raw));
}

// ---------------------------------------------------------------------------
// Operator models

enum class AdderFamily { acc, loa, tra, bcp, fixture };
enum class MultFamily { acc, tmul, ppp, fixture };

struct AdderModel {
    AdderFamily family = AdderFamily::acc;
    int param = 0;             // loa/tra: low-bit count k; bcp: block width b
    std::string fixture_name;  // family == fixture only

    static AdderModel acc() { return {}; }
    static AdderModel loa(int k) { return checked({AdderFamily::loa, k, {}}); }
    static AdderModel tra(int k) { return checked({AdderFamily::tra, k, {}}); }
    static AdderModel bcp(int b) { return checked({AdderFamily::bcp, b, {}}); }
    static AdderModel fixture(std::string name) {
        return {AdderFamily::fixture, 0, std::move(name)};
    }

    [[nodiscard]] bool functional() const { return family != AdderFamily::fixture; }

    [[nodiscard]] std::string spec_string() const {
        switch (family) {
            case AdderFamily::acc: return "acc";
            case AdderFamily::loa: return "loa" + std::to_string(param);
            case AdderFamily::tra: return "tra" + std::to_string(param);
            case AdderFamily::bcp: return "bcp" + std::to_string(param);
            case AdderFamily::fixture: return fixture_name;
        }
        return {};
    }

  private:
    static AdderModel checked(AdderModel m) {
        if (m.family == AdderFamily::bcp) {
            if (m.param < 1 || 16 % m.param != 0)
                throw ParameterError("bcp block width must divide 16, got " +
                                     std::to_string(m.param));
        } else if (m.param < 0 || m.param >= 16) {
            throw ParameterError("adder low-bit count must be in [0, 16), got " +
                                 std::to_string(m.param));
        }
        return m;
    }
};

struct MultModel {
    MultFamily family = MultFamily::acc;
    int param = 0;  // tmul: truncated magnitude bits k; ppp: perforated rows r
    std::string fixture_name;

    static MultModel acc() { return {}; }
    static MultModel tmul(int k) { return checked({MultFamily::tmul, k, {}}); }
    static MultModel ppp(int r) { return checked({MultFamily::ppp, r, {}}); }
    static MultModel fixture(std::string name) {
        return {MultFamily::fixture, 0, std::move(name)};
    }

    [[nodiscard]] bool functional() const { return family != MultFamily::fixture; }

    [[nodiscard]] std::string spec_string() const {
        switch (family) {
            case MultFamily::acc: return "acc";
            case MultFamily::tmul: return "tmul" + std::to_string(param);
            case MultFamily::ppp: return "ppp" + std::to_string(param);
            case MultFamily::fixture: return fixture_name;
        }
        return {};
    }

  private:
    static MultModel checked(MultModel m) {
        if (m.param < 0 || m.param >= 16)
            throw ParameterError("multiplier parameter must be in [0, 16), got " +
                                 std::to_string(m.param));
        return m;
    }
};

// ---------------------------------------------------------------------------
// Raw (pre-saturation) model arithmetic, generic in operand width so the
// same code backs both the 16-bit pipeline and reduced-width error analysis.

namespace detail {

constexpr void check_adder_width(const AdderModel& m, int width) {
    if (m.family == AdderFamily::bcp) {
        if (width % m.param != 0)
            throw ParameterError("bcp block width does not divide operand width");
    } else if (m.family != AdderFamily::acc && m.param >= width) {
        throw ParameterError("adder low-bit count exceeds operand width");
    }
}

constexpr void check_mult_width(const MultModel& m, int width) {
    if (m.family != MultFamily::acc && m.param >= width)
        throw ParameterError("multiplier parameter exceeds operand width");
}

}  // namespace detail

/// Sum of two width-bit signed operands under the model, before saturation.
/// The result spans width+1 bits.
[[nodiscard]] constexpr int64_t adder_raw(const AdderModel& m, int64_t a, int64_t b,
                                          int width = 16) {
    detail::check_adder_width(m, width);
    switch (m.family) {
        case AdderFamily::acc:
            return a + b;
        case AdderFamily::loa: {
            const int k = m.param;
            const int64_t low_mask = (int64_t{1} << k) - 1;
            return (((a >> k) + (b >> k)) << k) | ((a | b) & low_mask);
        }
        case AdderFamily::tra: {
            const int k = m.param;
            return ((a >> k) + (b >> k)) << k;
        }
        case AdderFamily::bcp: {
            const int blk = m.param;
            const int n_blocks = width / blk;
            const int64_t blk_mask = (int64_t{1} << blk) - 1;
            int64_t low = 0;
            for (int i = 0; i < n_blocks - 1; ++i) {
                const int shift = i * blk;
                const int64_t s = ((a >> shift) & blk_mask) + ((b >> shift) & blk_mask);
                low |= (s & blk_mask) << shift;  // carry out of the block dropped
            }
            // Top block is signed and keeps its full sum (carry-in still 0).
            const int top = (n_blocks - 1) * blk;
            return (((a >> top) + (b >> top)) << top) | low;
        }
        case AdderFamily::fixture:
            throw UnsupportedModelError("fixture adder '" + m.fixture_name +
                                        "' has no functional model");
    }
    return 0;
}

/// Product of two width-bit signed operands under the model, before the
/// Q1.15 renormalizing shift. The result spans 2*width bits.
[[nodiscard]] constexpr int64_t mult_raw(const MultModel& m, int64_t a, int64_t b,
                                         int width = 16) {
    detail::check_mult_width(m, width);
    switch (m.family) {
        case MultFamily::acc:
            return a * b;
        case MultFamily::tmul: {
            const int64_t keep = ~((int64_t{1} << m.param) - 1);
            const int64_t ma = (a < 0 ? -a : a) & keep;
            const int64_t mb = (b < 0 ? -b : b) & keep;
            const int64_t p = ma * mb;
            return ((a < 0) != (b < 0)) ? -p : p;
        }
        case MultFamily::ppp: {
            // Row i of the unsigned array multiply is ma * b_i * 2^i, so
            // dropping the r low rows zeroes the r low magnitude bits of b.
            const int64_t ma = a < 0 ? -a : a;
            const int64_t mb = (b < 0 ? -b : b) & ~((int64_t{1} << m.param) - 1);
            const int64_t p = ma * mb;
            return ((a < 0) != (b < 0)) ? -p : p;
        }
        case MultFamily::fixture:
            throw UnsupportedModelError("fixture multiplier '" + m.fixture_name +
                                        "' has no functional model");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Pipeline-width (Q1.15) operations

[[nodiscard]] inline Fx16 add(const AdderModel& m, Fx16 a, Fx16 b) {
    return Fx16(saturate16(adder_raw(m, a.raw, b.raw, 16)));
}

/// Model product, round-half-up shift by 2^15, saturate.
[[nodiscard]] inline Fx16 mul(const MultModel& m, Fx16 a, Fx16 b) {
    const int64_t p = mult_raw(m, a.raw, b.raw, 16);
    return Fx16(saturate16((p + (int64_t{1} << 14)) >> 15));
}

/// A named (adder, multiplier) combination injected into every butterfly.
struct OperatorPair {
    std::string name;
    AdderModel adder;
    MultModel mult;

    [[nodiscard]] bool functional() const {
        return adder.functional() && mult.functional();
    }

    [[nodiscard]] Fx16 add(Fx16 a, Fx16 b) const { return fxp::add(adder, a, b); }
    [[nodiscard]] Fx16 mul(Fx16 a, Fx16 b) const { return fxp::mul(mult, a, b); }

    static OperatorPair accurate() { return {"acc+acc", AdderModel::acc(), MultModel::acc()}; }
};

/// Anything that can stand in for an operator pair inside the arithmetic
/// kernels (the concrete pair, or an instrumented wrapper in tests).
template <class T>
concept OperatorOps = requires(const T& t, Fx16 a, Fx16 b) {
    { t.add(a, b) } -> std::same_as<Fx16>;
    { t.mul(a, b) } -> std::same_as<Fx16>;
};

/// Complex multiply (x.re*y.re - x.im*y.im, x.re*y.im + x.im*y.re).
/// Exactly 4 mul and 2 add invocations; subtraction is an add of the
/// two's-complement negation.
template <OperatorOps Ops>
[[nodiscard]] ComplexFx16 cmul(const Ops& ops, ComplexFx16 x, ComplexFx16 y) {
    const Fx16 rr = ops.mul(x.re, y.re);
    const Fx16 ii = ops.mul(x.im, y.im);
    const Fx16 ri = ops.mul(x.re, y.im);
    const Fx16 ir = ops.mul(x.im, y.re);
    return {ops.add(rr, negate(ii)), ops.add(ri, ir)};
}

// ---------------------------------------------------------------------------
// Spec-string grammar: "acc", "loa4", "tra1", "bcp4", "tmul6", "ppp3",
// "fixture:add16se_3BD"; pairs join one adder and one multiplier with '+'.

namespace detail {

inline int parse_param(std::string_view spec, std::string_view prefix) {
    const std::string_view digits = spec.substr(prefix.size());
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos)
        throw ParameterError("bad operator parameter in spec '" + std::string(spec) + "'");
    return std::atoi(std::string(digits).c_str());
}

}  // namespace detail

[[nodiscard]] inline AdderModel parse_adder_model(std::string_view spec) {
    if (spec == "acc") return AdderModel::acc();
    if (spec.starts_with("fixture:")) return AdderModel::fixture(std::string(spec.substr(8)));
    if (spec.starts_with("loa")) return AdderModel::loa(detail::parse_param(spec, "loa"));
    if (spec.starts_with("tra")) return AdderModel::tra(detail::parse_param(spec, "tra"));
    if (spec.starts_with("bcp")) return AdderModel::bcp(detail::parse_param(spec, "bcp"));
    throw ParameterError("unknown adder spec '" + std::string(spec) + "'");
}

[[nodiscard]] inline MultModel parse_mult_model(std::string_view spec) {
    if (spec == "acc") return MultModel::acc();
    if (spec.starts_with("fixture:")) return MultModel::fixture(std::string(spec.substr(8)));
    if (spec.starts_with("tmul")) return MultModel::tmul(detail::parse_param(spec, "tmul"));
    if (spec.starts_with("ppp")) return MultModel::ppp(detail::parse_param(spec, "ppp"));
    throw ParameterError("unknown multiplier spec '" + std::string(spec) + "'");
}

/// Parse "adder+mult". The canonical pair name strips any "fixture:" prefix,
/// so cost-table keys read like the circuit names they stand for.
[[nodiscard]] inline OperatorPair parse_operator_pair(std::string_view spec) {
    const auto plus = spec.find('+');
    if (plus == std::string_view::npos || plus == 0 || plus + 1 == spec.size())
        throw ParameterError("operator pair spec must be 'adder+mult', got '" +
                             std::string(spec) + "'");
    AdderModel a = parse_adder_model(spec.substr(0, plus));
    MultModel m = parse_mult_model(spec.substr(plus + 1));
    std::string name = a.spec_string() + "+" + m.spec_string();
    return {std::move(name), std::move(a), std::move(m)};
}

}  // namespace apxradar::fxp
