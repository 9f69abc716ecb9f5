#pragma once

#include "ris/types.hpp"

namespace ris {

/// Exponential integral E1(c) = integral from c to infinity of exp(-u)/u du,
/// principal branch |arg c| < pi.
///
/// Uses the ascending power series for |c| <= kE1SeriesRadius and a
/// modified-Lentz continued fraction elsewhere, except in the left
/// half-plane close to the cut where the continued fraction converges too
/// slowly and the series is kept up to kE1LeftSeriesRadius.
///
/// Throws DomainError for c == 0 or |arg c| > pi - kE1CutMargin, and
/// NumericError if the result overflows.
Complex exp_integral_e1(Complex c);

inline constexpr double kE1SeriesRadius = 4.0;
inline constexpr double kE1LeftSeriesRadius = 40.0;
inline constexpr double kE1CutMargin = 1e-9;

} // namespace ris
