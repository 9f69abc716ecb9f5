#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ris/channel.hpp"
#include "ris/geometry.hpp"

namespace ris::cli {

/// Regular surface. Either rows/cols are given, or an aperture (width along
/// the column axis, height along the row axis) from which the counts follow
/// as floor(extent / spacing) + 1.
struct GridConfig {
    GridSpec spec;
    std::optional<std::array<double, 2>> aperture;

    /// Effective in-plane extents: the aperture if given, else the span of
    /// the lattice.
    std::array<double, 2> extent() const;
};

/// Lattice counts covering `extent` at `spacing`.
std::size_t count_for_extent(double extent, double spacing);

struct TuningConfig {
    enum class Mode { fixed, optimize };

    Mode mode = Mode::fixed;
    bool reactance_only = true;
    double reactance_min = kDefaultReactanceMin;
    double reactance_max = kDefaultReactanceMax;
    /// Explicit per-element entries; empty means every element gets `uniform`.
    std::vector<Complex> entries;
    Complex uniform{0.0, 0.0};
    std::size_t budget = 20;
    std::uint64_t seed = 0;
    std::size_t scan_points = 401;

    /// Tuning for n elements (explicit entries must match n).
    TuningState state(std::size_t n) const;
};

/// Sampling bounds for `validate`, in wavelengths (frequencies in Hz).
struct ValidationBounds {
    double half_length_min = 0.1;
    double half_length_max = 0.45;
    double radius_min = 1.0 / 5000.0;
    double radius_max = 1.0 / 200.0;
    double distance_min = 1.0 / 20.0;
    double distance_max = 5.0;
    double dz_max = 2.0;
    std::vector<double> frequencies_hz{0.3e9, 3e9, 30e9};
};

/// Parsed scene description. Lengths are always meters here; wavelength
/// units are resolved while parsing.
struct SceneConfig {
    double frequency_hz = 0.0;
    Dipole transmitter;
    Dipole receiver;
    std::optional<GridConfig> grid;
    std::vector<Dipole> dipoles;
    TuningConfig tuning;
    ValidationBounds validation;
    double condition_cap = kDefaultConditionCap;
    std::optional<std::string> output_directory;
    /// Meters per config length unit: the wavelength when lambda_units was
    /// set, else 1. Sweep ranges over lengths use the same units.
    double length_scale = 1.0;

    /// Builds and validates the scene. Throws GeometryError.
    Scene scene() const;
};

/// Parses the JSON config. Errors are ConfigError with "<source>:<line>:<col>"
/// for syntax problems and "<source>: <json pointer>: ..." for field problems.
SceneConfig parse_config(std::string_view text, std::string_view source = "<config>");
SceneConfig load_config(const std::filesystem::path& path);

/// Serializes back to config JSON (meters, lambda_units false) such that
/// parse_config(to_json(c).dump()) yields the same scene.
nlohmann::json to_json(const SceneConfig& config);

} // namespace ris::cli
