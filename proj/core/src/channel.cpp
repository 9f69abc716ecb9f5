#include "ris/channel.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace ris {
namespace {

ComplexMatrix system_matrix(const ImpedanceSet& imps, const TuningState& tuning) {
    ComplexMatrix m = imps.z_ss;
    for (std::size_t i = 0; i < tuning.size(); ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        m(idx, idx) += tuning.entries[i];
    }
    return m;
}

void check_sizes(const ImpedanceSet& imps, const TuningState& tuning) {
    const auto n = static_cast<Eigen::Index>(imps.size());
    if (imps.z_ss.cols() != n || imps.z_rs.size() != n || imps.z_st.size() != n) {
        throw InputError("impedance set has inconsistent dimensions");
    }
    if (tuning.size() != imps.size()) {
        throw InputError("tuning state has " + std::to_string(tuning.size()) +
                         " entries but the surface has " + std::to_string(imps.size()));
    }
}

Eigen::PartialPivLU<ComplexMatrix> factorize(const ComplexMatrix& m, const ChannelOptions& opts,
                                             double* condition) {
    Eigen::PartialPivLU<ComplexMatrix> lu(m);
    const double rcond = lu.rcond();
    if (!(rcond > 0.0) || !std::isfinite(rcond)) {
        throw SingularSystem("Z_SS + Z_RIS is singular");
    }
    const double cond = 1.0 / rcond;
    if (cond > opts.condition_cap) {
        throw SingularSystem("Z_SS + Z_RIS is ill-conditioned (condition estimate " +
                             std::to_string(cond) + " > cap " +
                             std::to_string(opts.condition_cap) + ")");
    }
    if (condition) *condition = cond;
    return lu;
}

bool all_finite(const ComplexVector& v) {
    return std::all_of(v.data(), v.data() + v.size(), [](Complex c) { return is_finite(c); });
}

double objective(Complex h) { return std::norm(h); }

} // namespace

TuningState TuningState::uniform_reactance(std::size_t n, double reactance, double min,
                                           double max) {
    TuningState t;
    t.entries.assign(n, Complex{0.0, reactance});
    t.reactance_only = true;
    t.reactance_min = min;
    t.reactance_max = max;
    return t;
}

void validate(const TuningState& tuning) {
    if (!(tuning.reactance_min <= tuning.reactance_max) || !std::isfinite(tuning.reactance_min) ||
        !std::isfinite(tuning.reactance_max)) {
        throw InputError("tuning reactance bounds must be finite with min <= max");
    }
    for (std::size_t i = 0; i < tuning.size(); ++i) {
        const Complex e = tuning.entries[i];
        if (!is_finite(e)) {
            throw InputError("tuning entry " + std::to_string(i) + " is not finite");
        }
        if (tuning.reactance_only) {
            if (e.real() != 0.0) {
                throw InputError("tuning entry " + std::to_string(i) +
                                 " has a resistive part but the state is reactance-only");
            }
            if (e.imag() < tuning.reactance_min || e.imag() > tuning.reactance_max) {
                throw InputError("tuning entry " + std::to_string(i) + " reactance " +
                                 std::to_string(e.imag()) + " is outside the bounds");
            }
        }
    }
}

ComplexVector surface_currents(const ImpedanceSet& imps, const TuningState& tuning) {
    check_sizes(imps, tuning);
    const auto lu = factorize(system_matrix(imps, tuning), ChannelOptions{}, nullptr);
    return lu.solve(imps.z_st);
}

ChannelResult end_to_end(const ImpedanceSet& imps, const TuningState& tuning,
                         const ChannelOptions& opts) {
    validate(tuning);
    check_sizes(imps, tuning);

    ChannelResult out;
    const auto lu = factorize(system_matrix(imps, tuning), opts, &out.condition_estimate);
    const ComplexVector x = lu.solve(imps.z_st);
    if (!all_finite(x)) {
        throw SingularSystem("linear solve produced non-finite currents");
    }
    out.h_e2e = require_finite(imps.z_rt - imps.z_rs.cwiseProduct(x).sum(), "end_to_end");
    if (imps.z_rt == Complex{0.0, 0.0}) {
        throw NumericError("end_to_end: z_rt is zero, gain relative to the direct link is undefined");
    }
    out.gain_db = 20.0 * std::log10(std::abs(out.h_e2e) / std::abs(imps.z_rt));
    return out;
}

CoordinateResponse::CoordinateResponse(const ImpedanceSet& imps, const TuningState& tuning,
                                       std::size_t element, const ChannelOptions& opts) {
    check_sizes(imps, tuning);
    if (element >= tuning.size()) {
        throw InputError("CoordinateResponse: element index out of range");
    }
    const auto n = static_cast<Eigen::Index>(element);
    const auto lu = factorize(system_matrix(imps, tuning), opts, nullptr);
    const ComplexVector w = lu.solve(imps.z_st);
    const ComplexVector u = lu.transpose().solve(imps.z_rs);
    const ComplexVector g = lu.solve(ComplexVector::Unit(imps.z_st.size(), n));

    z_rt_ = imps.z_rt;
    coupled_ = imps.z_rs.cwiseProduct(w).sum();
    cross_ = u(n) * w(n);
    diagonal_ = g(n);
    base_reactance_ = tuning.entries[element].imag();
}

std::optional<Complex> CoordinateResponse::h_at(double reactance) const {
    const Complex delta{0.0, reactance - base_reactance_};
    const Complex denom = 1.0 + delta * diagonal_;
    if (std::abs(denom) <= 1e3 * std::numeric_limits<double>::epsilon()) {
        return std::nullopt;
    }
    const Complex h = z_rt_ - (coupled_ - delta * cross_ / denom);
    if (!is_finite(h)) return std::nullopt;
    return h;
}

namespace {

// Maximizes phi on [lo, hi]: uniform scan, then golden section around the
// best scan point. Returns the best abscissa seen.
template <class Phi>
double maximize_1d(const Phi& phi, double lo, double hi, std::size_t scan_points) {
    if (hi <= lo) return lo;
    const std::size_t m = std::max<std::size_t>(scan_points, 3);
    const double step = (hi - lo) / static_cast<double>(m - 1);

    std::size_t best_i = 0;
    double best_x = lo;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double x = i + 1 == m ? hi : lo + step * static_cast<double>(i);
        const double v = phi(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
            best_i = i;
        }
    }

    double a = best_i == 0 ? lo : lo + step * static_cast<double>(best_i - 1);
    double b = best_i + 1 >= m ? hi : lo + step * static_cast<double>(best_i + 1);
    constexpr double inv_phi = 0.6180339887498948482;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = phi(x1);
    double f2 = phi(x2);
    const double tol = 1e-12 * std::max(1.0, hi - lo);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = phi(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = phi(x2);
        }
    }
    for (auto [x, v] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return best_x;
}

} // namespace

OptimizationResult optimize_tuning(const ImpedanceSet& imps, const TuningState& init,
                                   const OptimizeOptions& opts) {
    if (opts.budget < 1) {
        throw InputError("optimize_tuning: budget must be at least 1");
    }
    validate(init);
    check_sizes(imps, init);

    const double lo = init.reactance_min;
    const double hi = init.reactance_max;

    OptimizationResult out;
    out.tuning = init;
    try {
        out.channel = end_to_end(imps, out.tuning, opts.channel);
    } catch (const SingularSystem&) {
        // Look for a usable uniform starting state that keeps the resistive parts.
        bool found = false;
        double best = -1.0;
        const std::size_t m = std::max<std::size_t>(opts.scan_points, 3);
        for (std::size_t i = 0; i < m; ++i) {
            const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1);
            TuningState trial = init;
            for (Complex& e : trial.entries) e = {e.real(), x};
            try {
                const ChannelResult r = end_to_end(imps, trial, opts.channel);
                if (objective(r.h_e2e) > best) {
                    best = objective(r.h_e2e);
                    out.tuning = trial;
                    out.channel = r;
                    found = true;
                }
            } catch (const SingularSystem&) {
            }
        }
        if (!found) {
            throw SingularSystem("optimize_tuning: every probed tuning state is singular");
        }
    }

    double current = objective(out.channel.h_e2e);
    out.trace.push_back(current);

    std::vector<std::size_t> order(init.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (opts.seed != 0) {
        std::mt19937_64 rng(opts.seed);
        std::shuffle(order.begin(), order.end(), rng);
    }

    for (std::size_t sweep = 0; sweep < opts.budget; ++sweep) {
        const double before = current;
        for (std::size_t n : order) {
            std::optional<CoordinateResponse> response;
            try {
                response.emplace(imps, out.tuning, n, opts.channel);
            } catch (const SingularSystem&) {
                continue;
            }
            auto phi = [&](double x) {
                const auto h = response->h_at(x);
                return h ? objective(*h) : -std::numeric_limits<double>::infinity();
            };
            const double x = maximize_1d(phi, lo, hi, opts.scan_points);
            if (!(phi(x) > phi(response->base_reactance()))) continue;

            TuningState trial = out.tuning;
            trial.entries[n] = {trial.entries[n].real(), x};
            try {
                const ChannelResult r = end_to_end(imps, trial, opts.channel);
                if (objective(r.h_e2e) > current) {
                    out.tuning = std::move(trial);
                    out.channel = r;
                    current = objective(r.h_e2e);
                }
            } catch (const SingularSystem&) {
            }
        }
        out.trace.push_back(current);
        if (current - before <= opts.stall_tolerance * before) break;
    }
    return out;
}

} // namespace ris
