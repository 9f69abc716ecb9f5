#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "ris/geometry.hpp"
#include "ris/types.hpp"

namespace ris {

/// Below rho_min = kRhoMinWavelengths * lambda the exponential-integral form
/// is abandoned for quadrature.
inline constexpr double kRhoMinWavelengths = 1e-6;
/// |sin(kh)| at or below this is rejected as a resonant length.
inline constexpr double kSinMin = 1e-6;
inline constexpr double kDefaultOracleTolerance = 1e-9;

inline double rho_min(double k) { return kRhoMinWavelengths * 2.0 * kPi / k; }

/// Parameters of
///   J = integral_L^U exp(-j k s0 t) exp(-j k R) / R dt,  R = sqrt(d0^2 + (t - z0)^2).
struct KernelIntegralArgs {
    int s0 = 1; ///< +1 or -1
    double d0 = 0.0;
    double z0 = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// Closed form s0 exp(-j k s0 z0) [E1(j k L0) - E1(j k U0)].
/// Requires lower <= upper (equal bounds give 0). Throws DegenerateGeometry
/// when d0 <= rho_min(k).
Complex notable_integral(const KernelIntegralArgs& args, double k);

/// Two-piece kernel integral over the observing wire,
///   int_{-h_q}^0 G exp(+j s0 k z) dz + int_0^{h_q} G exp(-j s0 k z) dz,
/// G = exp(-j k R)/R with R = sqrt(rho^2 + (z + dz - xi_p)^2), evaluated as
/// the sum of two notable integrals.
Complex kernel_integral(double xi_p, int s0, const PairGeometry& geom, double k);

/// Field of wire p observed at local coordinate z on wire q, per unit current:
/// the three spherical-wave terms from the wire ends and centre.
/// Throws ResonantLength if |sin(k h_p)| <= kSinMin and DegenerateGeometry if
/// the observation point sits on a source point (R = 0).
Complex closed_field(double z, const PairGeometry& geom, double k);

/// Throws ResonantLength unless |sin(k h)| > kSinMin.
void check_not_resonant(double half_length, double k);

/// Closed-form mutual impedance z_qp in ohms. Throws DegenerateGeometry when
/// rho <= rho_min(k).
Complex mutual_impedance_closed(const PairGeometry& geom, double k);

/// Induced-EMF quadrature of the closed-form field against the sinusoidal
/// current of wire q. Valid for rho = 0 when the wires are axially separated.
Complex mutual_impedance_oracle(const PairGeometry& geom, double k,
                                double rel_tol = kDefaultOracleTolerance);

/// z_qp: voltage induced on q by unit current on p. Uses the closed form and
/// silently falls back to the oracle for degenerate (near-collinear) pairs.
Complex mutual_impedance(const Dipole& p, const Dipole& q, bool same, double k,
                         double fallback_rel_tol = kDefaultOracleTolerance);

Complex mutual_impedance_oracle(const Dipole& p, const Dipole& q, bool same, double k,
                                double rel_tol = kDefaultOracleTolerance);

using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;

/// All impedances entering the end-to-end channel, in ohms.
struct ImpedanceSet {
    Complex z_rt;     ///< transmitter -> receiver
    ComplexVector z_rs; ///< element n -> receiver
    ComplexVector z_st; ///< transmitter -> element n
    ComplexMatrix z_ss; ///< element p -> element q at [q][p]

    std::size_t size() const { return static_cast<std::size_t>(z_ss.rows()); }
};

struct AssemblyOptions {
    double oracle_rel_tol = kDefaultOracleTolerance;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Validates the scene and fills every impedance. Only q <= p of Z_SS is
/// computed; the lower triangle is mirrored. Parallel evaluation gives
/// results identical to threads = 1.
ImpedanceSet assemble_impedances(const Scene& scene, const AssemblyOptions& opts = {});

} // namespace ris
