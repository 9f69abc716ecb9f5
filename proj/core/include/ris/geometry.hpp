#pragma once

#include <cstddef>
#include <vector>

#include "ris/types.hpp"

namespace ris {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;
    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
};

/// A z-directed thin-wire dipole. Lengths in meters.
struct Dipole {
    Vec3 center;
    double half_length = 0.0;
    double radius = 0.0;

    friend bool operator==(const Dipole&, const Dipole&) = default;
};

/// Checks half_length > 0, radius > 0 and the thin-wire guard
/// radius < half_length / 10. Throws GeometryError.
void validate(const Dipole& d);

/// Convenience constructor that validates.
Dipole make_dipole(Vec3 center, double half_length, double radius);

/// Whether two wires occupy common space: transverse distance not larger
/// than the sum of radii and overlapping (closed) z-extents.
bool wires_overlap(const Dipole& a, const Dipole& b);

struct Scene {
    Dipole transmitter;
    Dipole receiver;
    std::vector<Dipole> surface;
    double frequency_hz = 0.0;

    double wavelength() const { return kSpeedOfLight / frequency_hz; }
    double wavenumber() const { return 2.0 * kPi / wavelength(); }
    std::size_t size() const { return surface.size(); }

    friend bool operator==(const Scene&, const Scene&) = default;
};

/// Full scene check: every dipole valid, N >= 1, frequency > 0, and no two
/// wires (TX, RX and surface) overlap. Throws GeometryError naming the pair.
void validate(const Scene& scene);

/// Geometric inputs of one (q observes p) impedance term.
struct PairGeometry {
    double rho = 0.0; ///< transverse distance, or the wire radius for a self term
    double dz = 0.0;  ///< z_q - z_p
    double h_p = 0.0;
    double h_q = 0.0;
};

/// For same == true the pair is a self term: rho = q.radius and dz = 0.
PairGeometry pair_geometry(const Dipole& p, const Dipole& q, bool same);

enum class GridPlane { xy, xz };

/// Regular lattice of identical z-directed dipoles centred on `center`.
/// Columns run along x; rows run along y (xy plane) or z (xz plane).
struct GridSpec {
    std::size_t rows = 1;
    std::size_t cols = 1;
    double spacing = 0.0;
    double half_length = 0.0;
    double radius = 0.0;
    Vec3 center;
    GridPlane plane = GridPlane::xy;
};

/// rows*cols dipoles in row-major order. Throws GeometryError if the GridSpec is
/// invalid or neighbouring wires overlap.
std::vector<Dipole> build_grid(const GridSpec& spec);

} // namespace ris
