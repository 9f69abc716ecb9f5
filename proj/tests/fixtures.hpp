#pragma once

#include <random>
#include <vector>

#include "ris/geometry.hpp"
#include "ris/types.hpp"

namespace ris::test {

inline constexpr double kFrequency = 300e6;
inline const double kLambda = kSpeedOfLight / kFrequency;
inline const double kK = 2.0 * kPi / kLambda;

inline Dipole half_wave(Vec3 center, double lambda = kLambda) {
    return make_dipole(center, lambda / 4.0, lambda / 2000.0);
}

/// TX and RX a few wavelengths away on either side of a surface centred at
/// the origin in the xy plane.
inline Scene grid_scene(std::size_t rows, std::size_t cols, double spacing_lambdas,
                        double frequency = kFrequency) {
    const double lambda = kSpeedOfLight / frequency;
    Scene s;
    s.frequency_hz = frequency;
    s.transmitter = half_wave({-3.0 * lambda, 4.0 * lambda, 0.0}, lambda);
    s.receiver = half_wave({3.0 * lambda, 4.0 * lambda, 0.0}, lambda);
    GridSpec g;
    g.rows = rows;
    g.cols = cols;
    g.spacing = spacing_lambdas * lambda;
    g.half_length = lambda / 4.0;
    g.radius = lambda / 2000.0;
    s.surface = build_grid(g);
    return s;
}

/// Random non-degenerate pair in wavelength-scaled bounds.
struct PairDraw {
    Dipole p;
    Dipole q;
    double frequency;
};

inline PairDraw random_pair(std::mt19937_64& rng, double frequency) {
    const double lambda = kSpeedOfLight / frequency;
    std::uniform_real_distribution<double> h(0.1, 0.45);
    std::uniform_real_distribution<double> a(1.0 / 5000.0, 1.0 / 200.0);
    std::uniform_real_distribution<double> d(1.0 / 20.0, 5.0);
    std::uniform_real_distribution<double> dz(-2.0, 2.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    const double dist = d(rng) * lambda;
    const double phi = angle(rng);
    PairDraw out;
    out.frequency = frequency;
    out.p = make_dipole({0.0, 0.0, 0.0}, h(rng) * lambda, a(rng) * lambda);
    out.q = make_dipole({dist * std::cos(phi), dist * std::sin(phi), dz(rng) * lambda},
                        h(rng) * lambda, a(rng) * lambda);
    return out;
}

} // namespace ris::test
