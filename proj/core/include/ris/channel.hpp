#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ris/impedance.hpp"
#include "ris/types.hpp"

namespace ris {

inline constexpr double kDefaultReactanceMin = -2000.0;
inline constexpr double kDefaultReactanceMax = 2000.0;
inline constexpr double kDefaultConditionCap = 1e12;

/// Diagonal of Z_RIS, the tuning-circuit impedances in ohms.
struct TuningState {
    std::vector<Complex> entries;
    bool reactance_only = true;
    double reactance_min = kDefaultReactanceMin;
    double reactance_max = kDefaultReactanceMax;

    std::size_t size() const { return entries.size(); }

    /// n identical entries j*reactance.
    static TuningState uniform_reactance(std::size_t n, double reactance,
                                         double min = kDefaultReactanceMin,
                                         double max = kDefaultReactanceMax);
};

/// Throws InputError if bounds are inverted, entries are non-finite, or a
/// reactance-only state has a resistive part or a reactance out of bounds.
void validate(const TuningState& tuning);

struct ChannelResult {
    Complex h_e2e;
    /// 20 log10 |h_e2e / z_rt|: gain relative to the direct link.
    double gain_db = 0.0;
    /// 1-norm condition estimate of Z_SS + Z_RIS.
    double condition_estimate = 0.0;
};

struct ChannelOptions {
    double condition_cap = kDefaultConditionCap;
};

/// h_e2e = z_rt - z_rs^T (Z_SS + Z_RIS)^{-1} z_st via an LU solve.
/// Throws SingularSystem when the factorization fails or the condition
/// estimate exceeds the cap.
ChannelResult end_to_end(const ImpedanceSet& imps, const TuningState& tuning,
                         const ChannelOptions& opts = {});

/// x = (Z_SS + Z_RIS)^{-1} z_st, exposed for residual checks.
ComplexVector surface_currents(const ImpedanceSet& imps, const TuningState& tuning);

/// h_e2e as a function of the reactance of one element with all other
/// entries frozen. Uses the Sherman-Morrison rank-1 update of a single LU
/// factorization, so each evaluation is O(1).
class CoordinateResponse {
public:
    CoordinateResponse(const ImpedanceSet& imps, const TuningState& tuning, std::size_t element,
                       const ChannelOptions& opts = {});

    /// h_e2e with entry `element` replaced by (its resistance) + j*reactance.
    /// Returns nullopt when the updated system is singular.
    std::optional<Complex> h_at(double reactance) const;

    double base_reactance() const { return base_reactance_; }

private:
    Complex z_rt_;
    Complex coupled_;   // z_rs^T M^{-1} z_st
    Complex cross_;     // (M^{-T} z_rs)_n (M^{-1} z_st)_n
    Complex diagonal_;  // (M^{-1})_nn
    double base_reactance_;
};

enum class Objective { max_gain };

struct OptimizeOptions {
    Objective objective = Objective::max_gain;
    /// Full coordinate sweeps; must be >= 1.
    std::size_t budget = 20;
    /// 0 keeps the natural element order; anything else fixes a seeded
    /// permutation of the visiting order for the whole run.
    std::uint64_t seed = 0;
    /// Uniform scan points per coordinate before the golden-section refinement.
    std::size_t scan_points = 401;
    /// Sweeps stop early once the relative objective gain falls below this.
    double stall_tolerance = 1e-13;
    ChannelOptions channel;
};

struct OptimizationResult {
    TuningState tuning;
    ChannelResult channel;
    /// |h_e2e|^2 after initialization and after each sweep; non-decreasing.
    std::vector<double> trace;
};

/// Cyclic coordinate ascent of |h_e2e|^2 over the reactances Im(Z_RIS[n]),
/// each 1-D subproblem bracketed by a uniform scan and refined by golden
/// section. Resistive parts (when reactance_only is false) stay at their
/// initial values. The result is never worse than init.
OptimizationResult optimize_tuning(const ImpedanceSet& imps, const TuningState& init,
                                   const OptimizeOptions& opts = {});

} // namespace ris
