#pragma once

// Radix-2 decimation-in-time IFFT over ComplexFx16 vectors, generic over the
// injected operator pair. Mirrors a fully parallel hardware core: log2(N)
// stages of N/2 butterflies each, twiddles precomputed into a ROM, inputs
// bit-reverse permuted. After every stage each component is arithmetically
// shifted right by one (rounding toward -inf), so the final output carries
// the conventional 1/N scale and intermediate values cannot grow.

#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "apxradar/common.hpp"
#include "apxradar/fxp.hpp"

namespace apxradar::fft {

using fxp::ComplexFx16;
using fxp::Fx16;
using fxp::OperatorOps;

[[nodiscard]] constexpr bool is_pow2(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

[[nodiscard]] constexpr int log2_exact(std::size_t n) {
    int s = 0;
    while ((std::size_t{1} << s) < n) ++s;
    return s;
}

/// Quantized twiddle table: entry[t] = Q(cos(2*pi*t/n)) + sign*j*Q(sin(2*pi*t/n)).
/// sign selects the exponent sign of e^{sign*j*2*pi/N}; +1 is a true inverse
/// transform, -1 the conjugate (forward) convention.
struct TwiddleRom {
    int n = 0;
    int sign = +1;
    std::vector<ComplexFx16> entries;  // n/2 values, immutable after build
};

[[nodiscard]] inline TwiddleRom build_rom(int n, int sign) {
    if (n < 2 || n > (1 << 16) || !is_pow2(static_cast<std::size_t>(n)))
        throw InvalidSizeError("transform size must be a power of 2 in [2, 65536], got " +
                               std::to_string(n));
    if (sign != 1 && sign != -1) throw ParameterError("twiddle sign must be +1 or -1");
    TwiddleRom rom{n, sign, {}};
    rom.entries.reserve(static_cast<std::size_t>(n) / 2);
    for (int t = 0; t < n / 2; ++t) {
        const double angle = 2.0 * std::numbers::pi * t / n;
        rom.entries.push_back(
            {fxp::quantize(std::cos(angle)), fxp::quantize(sign * std::sin(angle))});
    }
    return rom;
}

/// Move every element to its bit-reversed index; an involution.
[[nodiscard]] inline std::vector<ComplexFx16> bit_reverse_permute(
    std::span<const ComplexFx16> x) {
    const std::size_t n = x.size();
    if (!is_pow2(n)) throw InvalidSizeError("length must be a power of 2");
    const int bits = log2_exact(n);
    std::vector<ComplexFx16> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t rev = 0;
        for (int b = 0; b < bits; ++b) rev |= ((i >> b) & 1u) << (bits - 1 - b);
        out[rev] = x[i];
    }
    return out;
}

/// Dataflow of one transform: per stage, the N/2 disjoint (a, b) butterfly
/// index pairs and the ROM index feeding each.
struct StagePlan {
    struct Butterfly {
        int a;
        int b;
        int twiddle;
    };
    int n = 0;
    int stages = 0;
    std::vector<std::vector<Butterfly>> stage;
};

[[nodiscard]] inline StagePlan make_stage_plan(int n) {
    if (n < 2 || !is_pow2(static_cast<std::size_t>(n)))
        throw InvalidSizeError("length must be a power of 2");
    StagePlan plan;
    plan.n = n;
    plan.stages = log2_exact(static_cast<std::size_t>(n));
    plan.stage.resize(static_cast<std::size_t>(plan.stages));
    for (int s = 0; s < plan.stages; ++s) {
        auto& bfs = plan.stage[static_cast<std::size_t>(s)];
        bfs.reserve(static_cast<std::size_t>(n) / 2);
        const int span = 1 << (s + 1);  // butterfly group size at this stage
        const int half = span / 2;
        const int stride = n / span;  // ROM index step between adjacent twiddles
        for (int base = 0; base < n; base += span)
            for (int t = 0; t < half; ++t)
                bfs.push_back({base + t, base + t + half, t * stride});
    }
    return plan;
}

/// Ya = Xa + W*Xb, Yb = Xa - W*Xb. Four multiplier and six adder invocations
/// per call (two adds inside cmul, four here).
template <OperatorOps Ops>
[[nodiscard]] std::pair<ComplexFx16, ComplexFx16> butterfly(const Ops& ops, ComplexFx16 xa,
                                                            ComplexFx16 xb, ComplexFx16 w) {
    const ComplexFx16 t = fxp::cmul(ops, w, xb);
    const ComplexFx16 ya{ops.add(xa.re, t.re), ops.add(xa.im, t.im)};
    const ComplexFx16 yb{ops.add(xa.re, fxp::negate(t.re)), ops.add(xa.im, fxp::negate(t.im))};
    return {ya, yb};
}

/// Fixed-point transform: bit-reverse, then stages of butterflies with a
/// right-shift-by-1 per stage. With sign=+1 twiddles the result approximates
/// (1/N) * sum_k x[k] e^{+j 2 pi n k / N}.
template <OperatorOps Ops>
[[nodiscard]] std::vector<ComplexFx16> ifft(const Ops& ops, std::span<const ComplexFx16> x,
                                            const TwiddleRom& rom) {
    if (static_cast<int>(x.size()) != rom.n)
        throw InvalidSizeError("input length " + std::to_string(x.size()) +
                               " does not match ROM size " + std::to_string(rom.n));
    std::vector<ComplexFx16> v = bit_reverse_permute(x);
    const StagePlan plan = make_stage_plan(rom.n);
    for (const auto& stage : plan.stage) {
        // Halve at stage entry (arithmetic shift rounds toward -inf) so the
        // butterfly sums stay inside Q1.15: |a|,|t| <= 1/2 bounds |a + t| by
        // 1, and |t| = |w*b| <= |b| holds by Cauchy-Schwarz. log2(N) halvings
        // give the 1/N scale, and adder saturation is left to corner cases.
        for (auto& c : v) {
            c.re = Fx16(static_cast<int16_t>(c.re.raw >> 1));
            c.im = Fx16(static_cast<int16_t>(c.im.raw >> 1));
        }
        for (const auto& bf : stage) {
            const auto [ya, yb] =
                butterfly(ops, v[static_cast<std::size_t>(bf.a)],
                          v[static_cast<std::size_t>(bf.b)],
                          rom.entries[static_cast<std::size_t>(bf.twiddle)]);
            v[static_cast<std::size_t>(bf.a)] = ya;
            v[static_cast<std::size_t>(bf.b)] = yb;
        }
    }
    return v;
}

}  // namespace apxradar::fft
