#include "ris/quadrature.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace ris {
namespace {

// 21-point Kronrod abscissae/weights and the embedded 10-point Gauss weights
// (QUADPACK dqk21). Odd-indexed Kronrod nodes are the Gauss nodes.
constexpr std::array<double, 11> kXgk{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    Complex value;
    double error;
    double abs_value; // integral of |f| (Kronrod), for the roundoff floor

    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment apply_rule(const RealToComplex& f, double a, double b, std::size_t& evaluations) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const Complex fc = f(center);
    Complex kronrod = fc * kWgk[10];
    Complex gauss{0.0, 0.0};
    double abs_sum = std::abs(fc) * kWgk[10];
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const Complex f1 = f(center - dx);
        const Complex f2 = f(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * (f1 + f2);
        }
    }
    evaluations += 21;

    kronrod *= half;
    gauss *= half;
    if (!is_finite(kronrod)) {
        throw NumericError("integrate: integrand produced a non-finite value on [" +
                           std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    return Segment{a, b, kronrod, std::abs(kronrod - gauss), abs_sum * std::abs(half)};
}

} // namespace

QuadResult integrate(const RealToComplex& f, double a, double b, double rel_tol,
                     const QuadOptions& opts) {
    return integrate(f, a, b, std::span<const double>{}, rel_tol, opts);
}

QuadResult integrate(const RealToComplex& f, double a, double b,
                     std::span<const double> breakpoints, double rel_tol,
                     const QuadOptions& opts) {
    if (!(a < b)) {
        throw InputError("integrate: require a < b");
    }
    if (!(rel_tol > 0.0)) {
        throw InputError("integrate: rel_tol must be positive");
    }
    if (opts.max_intervals == 0) {
        throw InputError("integrate: max_intervals must be positive");
    }

    std::vector<double> cuts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    QuadResult result;
    std::priority_queue<Segment> heap;
    Complex total{0.0, 0.0};
    double total_error = 0.0;
    double total_abs = 0.0;

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Segment s = apply_rule(f, cuts[i], cuts[i + 1], result.evaluations);
        total += s.value;
        total_error += s.error;
        total_abs += s.abs_value;
        heap.push(s);
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto converged = [&] {
        const double target = std::max({rel_tol * std::abs(total), opts.abs_tol,
                                        50.0 * eps * total_abs});
        return total_error <= target;
    };

    while (!converged()) {
        if (heap.size() >= opts.max_intervals) {
            throw ConvergenceError("integrate: subdivision budget of " +
                                   std::to_string(opts.max_intervals) +
                                   " intervals exhausted (estimated error " +
                                   std::to_string(total_error) + ")");
        }
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw ConvergenceError("integrate: interval cannot be bisected further");
        }
        Segment left = apply_rule(f, worst.a, mid, result.evaluations);
        Segment right = apply_rule(f, mid, worst.b, result.evaluations);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        total_abs += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the segments to avoid drift from incremental updates.
    result.intervals = heap.size();
    Complex value{0.0, 0.0};
    double error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    result.value = value;
    result.error_estimate = error;
    return result;
}

} // namespace ris
