#include "ris/special_functions.hpp"

#include <limits>
#include <string>

namespace ris {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSeriesTerms = 2000;
constexpr int kMaxFractionTerms = 200'000;
constexpr double kSeriesStop = 0.0625 * kEps * kEps; // (eps/4)^2
constexpr double kTiny = 1e-150;

// 1/z without the inf/nan recovery of the library division; |z| >= kTiny here.
Complex reciprocal(Complex z) {
    const double n = z.real() * z.real() + z.imag() * z.imag();
    return {z.real() / n, -z.imag() / n};
}

Complex times(Complex a, Complex b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// E1(z) = -gamma - log z - sum_{n>=1} (-z)^n / (n n!)
Complex e1_series(Complex z) {
    Complex term{1.0, 0.0};
    Complex sum{0.0, 0.0};
    for (int n = 1; n <= kMaxSeriesTerms; ++n) {
        term *= -z / static_cast<double>(n);
        const Complex contrib = term / static_cast<double>(n);
        sum += contrib;
        if (std::norm(contrib) <= kSeriesStop * std::norm(sum)) {
            return -kEulerGamma - std::log(z) - sum;
        }
    }
    throw ConvergenceError("exp_integral_e1: power series did not converge");
}

// E1(z) = exp(-z) / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))), modified Lentz.
Complex e1_continued_fraction(Complex z) {
    constexpr double tiny2 = kTiny * kTiny;
    Complex b = z + 1.0;
    Complex c = 1.0 / kTiny;
    Complex d = reciprocal(b);
    Complex h = d;
    for (int i = 1; i <= kMaxFractionTerms; ++i) {
        const double a = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = a * d + b;
        if (std::norm(d) < tiny2) d = kTiny;
        c = b + a * reciprocal(c);
        if (std::norm(c) < tiny2) c = kTiny;
        d = reciprocal(d);
        const Complex delta = times(c, d);
        h = times(h, delta);
        if (std::norm(delta - 1.0) <= kEps * kEps) {
            return h * std::exp(-z);
        }
    }
    throw ConvergenceError("exp_integral_e1: continued fraction did not converge");
}

} // namespace

Complex exp_integral_e1(Complex c) {
    if (!is_finite(c)) {
        throw DomainError("exp_integral_e1: non-finite argument");
    }
    if (c == Complex{0.0, 0.0}) {
        throw DomainError("exp_integral_e1: undefined at c = 0");
    }
    if (std::abs(std::arg(c)) > kPi - kE1CutMargin) {
        throw DomainError("exp_integral_e1: argument on or too close to the branch cut (arg = " +
                          std::to_string(std::arg(c)) + ")");
    }

    const double r = std::abs(c);
    const bool near_cut = c.real() < 0.0 && std::abs(c.imag()) <= 1.0;
    const Complex value = (r <= kE1SeriesRadius || (near_cut && r <= kE1LeftSeriesRadius))
                              ? e1_series(c)
                              : e1_continued_fraction(c);
    return require_finite(value, "exp_integral_e1");
}

} // namespace ris
