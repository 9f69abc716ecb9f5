#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string_view>

#include "ris/errors.hpp"

namespace ris {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;
/// Speed of light in vacuum, m/s (exact).
inline constexpr double kSpeedOfLight = 299'792'458.0;
/// Intrinsic impedance of free space, ohms.
inline constexpr double kEta0 = 376.730313668;

inline constexpr Complex kJ{0.0, 1.0};

inline bool is_finite(Complex c) noexcept {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

/// Throws NumericError if c has a NaN or Inf component.
inline Complex require_finite(Complex c, std::string_view what) {
    if (!is_finite(c)) {
        throw NumericError(std::string(what) + ": non-finite result");
    }
    return c;
}

inline double relative_difference(Complex a, Complex b) noexcept {
    const double scale = std::abs(b);
    return scale > 0.0 ? std::abs(a - b) / scale : std::abs(a - b);
}

} // namespace ris
