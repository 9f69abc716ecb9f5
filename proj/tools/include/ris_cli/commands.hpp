#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ris/channel.hpp"
#include "ris/impedance.hpp"
#include "ris_cli/config.hpp"

namespace ris::cli {

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumeric = 2 };

struct RunOptions {
    double oracle_tol = kDefaultOracleTolerance;
    unsigned threads = 0;
};

struct ChannelRun {
    Scene scene;
    ImpedanceSet impedances;
    TuningState tuning;
    ChannelResult result;
    /// Present when the config carries an optimize directive.
    std::optional<OptimizationResult> optimization;
};

ChannelRun run_channel(const SceneConfig& config, const RunOptions& opts = {});

enum class SweepParameter { spacing, frequency, n_elements };

SweepParameter parse_sweep_parameter(const std::string& name);
std::string to_string(SweepParameter p);

struct SweepSpec {
    SweepParameter parameter = SweepParameter::spacing;
    double from = 0.0;
    double to = 0.0;
    std::size_t points = 1;
};

struct SweepRow {
    double value = 0.0;
    std::size_t n_elements = 0;
    std::optional<ChannelResult> result;
    std::optional<double> optimized_objective;
    std::string status = "ok";
    std::string message;
};

/// The values a sweep visits, in order.
std::vector<double> sweep_values(const SweepSpec& spec);

/// The config for one sweep point. Spacing and n_elements sweeps keep the
/// grid aperture fixed; the value is in the config's length units (or Hz,
/// or elements per side).
SceneConfig sweep_point_config(const SceneConfig& base, SweepParameter parameter, double value);

/// One row per value; numerical failures are recorded in the row.
std::vector<SweepRow> run_sweep(const SceneConfig& config, const SweepSpec& spec,
                                const RunOptions& opts = {});

struct ValidationSample {
    double frequency_hz = 0.0;
    Dipole p;
    Dipole q;
    Complex closed;
    Complex oracle;
    double rel_error = 0.0;
};

struct ValidationReport {
    std::vector<ValidationSample> samples;
    double max_rel_error = 0.0;
    double median_rel_error = 0.0;
    double gate = 1e-6;
    bool passed = false;
};

ValidationReport run_validation(const ValidationBounds& bounds, std::size_t samples, std::uint64_t seed,
                                double oracle_tol);

/// Output writers. All produce UTF-8 with LF line endings.
void write_impedances(const std::filesystem::path& dir, const Scene& scene, const ImpedanceSet& imps);
void write_channel(const std::filesystem::path& dir, const ChannelRun& run);
void write_sweep(const std::filesystem::path& dir, const SweepSpec& spec, const std::vector<SweepRow>& rows);
void write_validation(const std::filesystem::path& dir, const ValidationReport& report, std::size_t samples,
                      std::uint64_t seed, double oracle_tol);

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ris::cli
