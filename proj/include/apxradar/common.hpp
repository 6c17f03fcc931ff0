#pragma once

// Shared error taxonomy, deterministic seed derivation, and small text
// helpers used across the library.

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace apxradar {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual const char* kind() const noexcept { return "error"; }
};

/// A caller-supplied value is out of its documented domain.
class ParameterError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "parameter"; }
};

/// A vector/transform size is not a power of two or does not match.
class InvalidSizeError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "invalid-size"; }
};

/// A fixture-only operator model was asked to compute.
class UnsupportedModelError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "unsupported-model"; }
};

/// An input set is empty or all-zero where a result is undefined.
class DegenerateInputError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "degenerate-input"; }
};

/// splitmix64 single step; the standard stateless mixer.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic sub-seed for the (a, b, c) slot of a run keyed by `base`.
/// Every stochastic stage draws from its own derived stream so that
/// reordering or parallelizing runs cannot change any single result.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t base,
                                                  std::uint64_t a,
                                                  std::uint64_t b = 0,
                                                  std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(base);
    s = splitmix64(s ^ (a + 0x1000000000000001ULL));
    s = splitmix64(s ^ (b + 0x2000000000000003ULL));
    s = splitmix64(s ^ (c + 0x3000000000000005ULL));
    return s;
}

/// Shortest round-trippable decimal for CSV cells; "inf" for infinities.
[[nodiscard]] inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace apxradar
