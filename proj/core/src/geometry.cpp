#include "ris/geometry.hpp"

#include <string>

namespace ris {
namespace {

double transverse_distance(const Dipole& a, const Dipole& b) {
    return std::hypot(b.center.x - a.center.x, b.center.y - a.center.y);
}

std::string describe(const char* role, std::size_t index) {
    return std::string(role) + (index == std::size_t(-1) ? "" : "[" + std::to_string(index) + "]");
}

} // namespace

void validate(const Dipole& d) {
    if (!std::isfinite(d.center.x) || !std::isfinite(d.center.y) || !std::isfinite(d.center.z)) {
        throw GeometryError("dipole center must be finite");
    }
    if (!(d.half_length > 0.0) || !std::isfinite(d.half_length)) {
        throw GeometryError("dipole half_length must be positive");
    }
    if (!(d.radius > 0.0) || !std::isfinite(d.radius)) {
        throw GeometryError("dipole radius must be positive");
    }
    if (!(d.radius < d.half_length / 10.0)) {
        throw GeometryError("dipole violates thin-wire guard radius < half_length/10 (radius " +
                            std::to_string(d.radius) + ", half_length " +
                            std::to_string(d.half_length) + ")");
    }
}

Dipole make_dipole(Vec3 center, double half_length, double radius) {
    Dipole d{center, half_length, radius};
    validate(d);
    return d;
}

bool wires_overlap(const Dipole& a, const Dipole& b) {
    if (transverse_distance(a, b) > a.radius + b.radius) return false;
    const double gap = std::abs(b.center.z - a.center.z) - (a.half_length + b.half_length);
    return !(gap > 0.0);
}

void validate(const Scene& scene) {
    if (!(scene.frequency_hz > 0.0) || !std::isfinite(scene.frequency_hz)) {
        throw GeometryError("scene frequency must be positive");
    }
    if (scene.surface.empty()) {
        throw GeometryError("scene surface must contain at least one dipole");
    }

    struct Tagged {
        const Dipole* d;
        const char* role;
        std::size_t index;
    };
    std::vector<Tagged> all;
    all.reserve(scene.surface.size() + 2);
    all.push_back({&scene.transmitter, "transmitter", std::size_t(-1)});
    all.push_back({&scene.receiver, "receiver", std::size_t(-1)});
    for (std::size_t i = 0; i < scene.surface.size(); ++i) {
        all.push_back({&scene.surface[i], "surface", i});
    }

    for (const auto& t : all) {
        try {
            validate(*t.d);
        } catch (const GeometryError& e) {
            throw GeometryError(describe(t.role, t.index) + ": " + e.what());
        }
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            if (wires_overlap(*all[i].d, *all[j].d)) {
                throw GeometryError("wires overlap: " + describe(all[i].role, all[i].index) +
                                    " and " + describe(all[j].role, all[j].index));
            }
        }
    }
}

PairGeometry pair_geometry(const Dipole& p, const Dipole& q, bool same) {
    if (same) {
        return {q.radius, 0.0, p.half_length, q.half_length};
    }
    return {transverse_distance(p, q), q.center.z - p.center.z, p.half_length, q.half_length};
}

std::vector<Dipole> build_grid(const GridSpec& spec) {
    if (spec.rows == 0 || spec.cols == 0) {
        throw GeometryError("grid rows and cols must be at least 1");
    }
    if (!(spec.spacing > 0.0) || !std::isfinite(spec.spacing)) {
        throw GeometryError("grid spacing must be positive");
    }
    const Dipole prototype = make_dipole(spec.center, spec.half_length, spec.radius);

    const double col0 = -0.5 * static_cast<double>(spec.cols - 1);
    const double row0 = -0.5 * static_cast<double>(spec.rows - 1);

    std::vector<Dipole> out;
    out.reserve(spec.rows * spec.cols);
    for (std::size_t r = 0; r < spec.rows; ++r) {
        for (std::size_t c = 0; c < spec.cols; ++c) {
            const double u = (col0 + static_cast<double>(c)) * spec.spacing;
            const double v = (row0 + static_cast<double>(r)) * spec.spacing;
            Dipole d = prototype;
            d.center.x += u;
            if (spec.plane == GridPlane::xy) {
                d.center.y += v;
            } else {
                d.center.z += v;
            }
            out.push_back(d);
        }
    }

    // Nearest neighbours are enough on a regular lattice.
    if (spec.plane == GridPlane::xz && spec.rows > 1 && wires_overlap(out[0], out[spec.cols])) {
        throw GeometryError("grid wires overlap: vertical spacing " + std::to_string(spec.spacing) +
                            " <= 2*half_length " + std::to_string(2.0 * spec.half_length));
    }
    if (spec.cols > 1 && wires_overlap(out[0], out[1])) {
        throw GeometryError("grid wires overlap: spacing " + std::to_string(spec.spacing) +
                            " <= 2*radius");
    }
    if (spec.plane == GridPlane::xy && spec.rows > 1 && wires_overlap(out[0], out[spec.cols])) {
        throw GeometryError("grid wires overlap: spacing " + std::to_string(spec.spacing) +
                            " <= 2*radius");
    }
    return out;
}

} // namespace ris
