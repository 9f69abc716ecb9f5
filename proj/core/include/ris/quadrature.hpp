#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "ris/types.hpp"

namespace ris {

using RealToComplex = std::function<Complex(double)>;

struct QuadOptions {
    /// Maximum number of live subintervals before giving up.
    std::size_t max_intervals = 10'000;
    /// Absolute error floor; 0 means purely relative.
    double abs_tol = 0.0;
};

struct QuadResult {
    Complex value;
    double error_estimate = 0.0;
    std::size_t intervals = 0;
    std::size_t evaluations = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature of a complex-valued
/// integrand over [a, b]. Real and imaginary parts share the subdivision.
///
/// Convergence when the summed |K21 - G10| estimate drops below
/// max(rel_tol * |I|, abs_tol), or below the roundoff floor
/// 50 eps * integral |f|. Throws ConvergenceError when the interval budget is
/// exhausted first. The rule never samples the endpoints, so integrable
/// endpoint singularities are fine.
QuadResult integrate(const RealToComplex& f, double a, double b, double rel_tol,
                     const QuadOptions& opts = {});

/// Same, seeded with the given interior breakpoints (kinks, peaks). Points
/// outside (a, b) are ignored.
QuadResult integrate(const RealToComplex& f, double a, double b,
                     std::span<const double> breakpoints, double rel_tol,
                     const QuadOptions& opts = {});

/// Convenience wrapper returning only the value.
inline Complex adaptive_quad(const RealToComplex& f, double a, double b, double rel_tol) {
    return integrate(f, a, b, rel_tol).value;
}

} // namespace ris
