#include "ris/impedance.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "ris/quadrature.hpp"
#include "ris/special_functions.hpp"

namespace ris {
namespace {

void check_wavenumber(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw InputError("wavenumber must be positive and finite");
    }
}

// sqrt(d0^2 + t^2) + s0 t without cancellation when s0 t < 0.
double shifted_radius(double d0, double t, int s0) {
    const double r = std::hypot(d0, t);
    const double st = static_cast<double>(s0) * t;
    return st >= 0.0 ? r + st : d0 * d0 / (r - st);
}

Complex spherical_wave(double R, double k) {
    return std::exp(Complex{0.0, -k * R}) / R;
}

// Current shape on wire q, normalized by sin(k h).
double sinusoidal_current(double z, double h, double k) {
    return std::sin(k * (h - std::abs(z))) / std::sin(k * h);
}

} // namespace

Complex notable_integral(const KernelIntegralArgs& args, double k) {
    check_wavenumber(k);
    if (args.s0 != 1 && args.s0 != -1) {
        throw InputError("notable_integral: s0 must be +1 or -1");
    }
    if (args.lower > args.upper) {
        throw InputError("notable_integral: require lower <= upper");
    }
    if (!(args.d0 > rho_min(k))) {
        throw DegenerateGeometry("notable_integral: d0 = " + std::to_string(args.d0) +
                                 " is at or below rho_min; use quadrature");
    }
    if (args.lower == args.upper) {
        return {0.0, 0.0};
    }
    const double s0 = static_cast<double>(args.s0);
    const double l0 = shifted_radius(args.d0, args.lower - args.z0, args.s0);
    const double u0 = shifted_radius(args.d0, args.upper - args.z0, args.s0);
    const Complex prefactor = s0 * std::exp(Complex{0.0, -k * s0 * args.z0});
    const Complex value =
        prefactor * (exp_integral_e1(Complex{0.0, k * l0}) - exp_integral_e1(Complex{0.0, k * u0}));
    return require_finite(value, "notable_integral");
}

Complex kernel_integral(double xi_p, int s0, const PairGeometry& geom, double k) {
    const double z0 = xi_p - geom.dz;
    return notable_integral({-s0, geom.rho, z0, -geom.h_q, 0.0}, k) +
           notable_integral({s0, geom.rho, z0, 0.0, geom.h_q}, k);
}

void check_not_resonant(double half_length, double k) {
    if (!(std::abs(std::sin(k * half_length)) > kSinMin)) {
        throw ResonantLength("resonant-length guard: |sin(k h)| <= " + std::to_string(kSinMin) +
                             " for half_length " + std::to_string(half_length) +
                             " m (h is a multiple of lambda/2)");
    }
}

Complex closed_field(double z, const PairGeometry& geom, double k) {
    check_wavenumber(k);
    check_not_resonant(geom.h_p, k);
    const double offset = z + geom.dz;
    const double r_plus = std::hypot(geom.rho, offset - geom.h_p);
    const double r_minus = std::hypot(geom.rho, offset + geom.h_p);
    const double r_mid = std::hypot(geom.rho, offset);
    if (!(r_plus > 0.0 && r_minus > 0.0 && r_mid > 0.0)) {
        throw DegenerateGeometry("closed_field: observation point coincides with a source point");
    }
    const double kh = k * geom.h_p;
    const double scale = k / std::sin(kh);
    const Complex value = scale * (spherical_wave(r_plus, k) + spherical_wave(r_minus, k) -
                                   2.0 * std::cos(kh) * spherical_wave(r_mid, k));
    return require_finite(value, "closed_field");
}

Complex mutual_impedance_closed(const PairGeometry& geom, double k) {
    check_wavenumber(k);
    check_not_resonant(geom.h_p, k);
    check_not_resonant(geom.h_q, k);

    const double khp = k * geom.h_p;
    const double khq = k * geom.h_q;
    const double prefactor = kEta0 / (8.0 * kPi * std::sin(khp) * std::sin(khq));
    const double centre_weight = 2.0 * std::cos(khp);

    Complex sum{0.0, 0.0};
    for (int s0 : {-1, 1}) {
        const Complex phase = static_cast<double>(s0) * std::exp(Complex{0.0, s0 * khq});
        const Complex ends = kernel_integral(+geom.h_p, s0, geom, k) +
                             kernel_integral(-geom.h_p, s0, geom, k);
        const Complex centre = kernel_integral(0.0, s0, geom, k);
        sum += phase * (ends - centre_weight * centre);
    }
    return require_finite(prefactor * sum, "mutual_impedance");
}

Complex mutual_impedance_oracle(const PairGeometry& geom, double k, double rel_tol) {
    check_wavenumber(k);
    check_not_resonant(geom.h_p, k);
    check_not_resonant(geom.h_q, k);

    auto integrand = [&](double z) {
        return closed_field(z, geom, k) * sinusoidal_current(z, geom.h_q, k);
    };
    // Kink of the current at 0 and near-singular peaks where z + dz hits a
    // source point.
    const std::array<double, 4> breaks{0.0, geom.h_p - geom.dz, -geom.h_p - geom.dz, -geom.dz};
    const QuadResult r = integrate(integrand, -geom.h_q, geom.h_q, breaks, rel_tol);
    return require_finite(kJ * kEta0 / (4.0 * kPi * k) * r.value, "mutual_impedance_oracle");
}

Complex mutual_impedance(const Dipole& p, const Dipole& q, bool same, double k,
                         double fallback_rel_tol) {
    const PairGeometry geom = pair_geometry(p, q, same);
    if (geom.rho <= rho_min(k)) {
        return mutual_impedance_oracle(geom, k, fallback_rel_tol);
    }
    return mutual_impedance_closed(geom, k);
}

Complex mutual_impedance_oracle(const Dipole& p, const Dipole& q, bool same, double k,
                                double rel_tol) {
    return mutual_impedance_oracle(pair_geometry(p, q, same), k, rel_tol);
}

ImpedanceSet assemble_impedances(const Scene& scene, const AssemblyOptions& opts) {
    validate(scene);
    const double k = scene.wavenumber();
    const std::size_t n = scene.size();

    check_not_resonant(scene.transmitter.half_length, k);
    check_not_resonant(scene.receiver.half_length, k);
    for (const Dipole& d : scene.surface) {
        check_not_resonant(d.half_length, k);
    }

    ImpedanceSet out;
    out.z_rs.resize(static_cast<Eigen::Index>(n));
    out.z_st.resize(static_cast<Eigen::Index>(n));
    out.z_ss.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

    // Job layout: [0] z_rt, then n z_rs, n z_st, then the upper triangle row by row.
    struct Job {
        const Dipole* p;
        const Dipole* q;
        bool same;
        Complex* target;
    };
    std::vector<Job> jobs;
    jobs.reserve(1 + 2 * n + n * (n + 1) / 2);
    jobs.push_back({&scene.transmitter, &scene.receiver, false, &out.z_rt});
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        jobs.push_back({&scene.surface[i], &scene.receiver, false, &out.z_rs(idx)});
        jobs.push_back({&scene.transmitter, &scene.surface[i], false, &out.z_st(idx)});
    }
    for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t p = q; p < n; ++p) {
            jobs.push_back({&scene.surface[p], &scene.surface[q], p == q,
                            &out.z_ss(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p))});
        }
    }

    unsigned threads = opts.threads != 0 ? opts.threads : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size() / 16)));

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = jobs.size();
    std::exception_ptr error;

    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
            const Job& job = jobs[i];
            try {
                *job.target = mutual_impedance(*job.p, *job.q, job.same, k, opts.oracle_rel_tol);
            } catch (...) {
                // Keep the lowest failing job so the reported error is deterministic.
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    for (Eigen::Index q = 0; q < out.z_ss.rows(); ++q) {
        for (Eigen::Index p = 0; p < q; ++p) {
            out.z_ss(q, p) = out.z_ss(p, q);
        }
    }
    return out;
}

} // namespace ris
