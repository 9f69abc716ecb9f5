#include "ris_cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

namespace ris::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

void write_json(const fs::path& path, const json& j) {
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

constexpr const char* kMatrixHeader = "row,col,re_ohm,im_ohm\n";

void write_vector_csv(const fs::path& path, const ComplexVector& v) {
    auto out = open_output(path);
    out << kMatrixHeader;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out << i << ",0," << fmt(v(i).real()) << ',' << fmt(v(i).imag()) << '\n';
    }
}

void write_tuning_csv(const fs::path& path, const TuningState& t) {
    auto out = open_output(path);
    out << kMatrixHeader;
    for (std::size_t i = 0; i < t.size(); ++i) {
        out << i << ",0," << fmt(t.entries[i].real()) << ',' << fmt(t.entries[i].imag()) << '\n';
    }
}

OptimizeOptions optimize_options(const SceneConfig& c) {
    OptimizeOptions o;
    o.budget = c.tuning.budget;
    o.seed = c.tuning.seed;
    o.scan_points = c.tuning.scan_points;
    o.channel.condition_cap = c.condition_cap;
    return o;
}

GridConfig& require_grid(SceneConfig& c, SweepParameter p) {
    if (!c.grid) {
        throw ConfigError("sweeping " + to_string(p) + " requires a grid surface");
    }
    return *c.grid;
}

} // namespace

ChannelRun run_channel(const SceneConfig& config, const RunOptions& opts) {
    ChannelRun run;
    run.scene = config.scene();
    run.impedances = assemble_impedances(run.scene, {opts.oracle_tol, opts.threads});
    run.tuning = config.tuning.state(run.scene.size());
    if (config.tuning.mode == TuningConfig::Mode::optimize) {
        run.optimization = optimize_tuning(run.impedances, run.tuning, optimize_options(config));
        run.tuning = run.optimization->tuning;
        run.result = run.optimization->channel;
    } else {
        run.result = end_to_end(run.impedances, run.tuning, {config.condition_cap});
    }
    return run;
}

SweepParameter parse_sweep_parameter(const std::string& name) {
    if (name == "spacing") return SweepParameter::spacing;
    if (name == "frequency") return SweepParameter::frequency;
    if (name == "n_elements") return SweepParameter::n_elements;
    throw ConfigError("unknown sweep parameter '" + name + "' (spacing, frequency, n_elements)");
}

std::string to_string(SweepParameter p) {
    switch (p) {
    case SweepParameter::spacing: return "spacing";
    case SweepParameter::frequency: return "frequency";
    case SweepParameter::n_elements: return "n_elements";
    }
    return "?";
}

std::vector<double> sweep_values(const SweepSpec& spec) {
    if (spec.points == 0) throw ConfigError("sweep needs at least one point");
    if (!std::isfinite(spec.from) || !std::isfinite(spec.to)) throw ConfigError("sweep range must be finite");
    std::vector<double> values;
    values.reserve(spec.points);
    for (std::size_t i = 0; i < spec.points; ++i) {
        if (spec.points == 1) {
            values.push_back(spec.from);
        } else if (i + 1 == spec.points) {
            values.push_back(spec.to);
        } else {
            const double t = static_cast<double>(i) / static_cast<double>(spec.points - 1);
            values.push_back(spec.from + t * (spec.to - spec.from));
        }
    }
    return values;
}

SceneConfig sweep_point_config(const SceneConfig& base, SweepParameter parameter, double value) {
    SceneConfig c = base;
    switch (parameter) {
    case SweepParameter::frequency:
        if (!(value > 0.0)) throw ConfigError("sweep frequency must be positive");
        c.frequency_hz = value;
        break;
    case SweepParameter::spacing: {
        GridConfig& g = require_grid(c, parameter);
        if (!(value > 0.0)) throw ConfigError("sweep spacing must be positive");
        const auto extent = base.grid->extent();
        g.spec.spacing = value * base.length_scale;
        g.aperture = extent;
        break;
    }
    case SweepParameter::n_elements: {
        GridConfig& g = require_grid(c, parameter);
        const double rounded = std::round(value);
        if (!(rounded >= 1.0)) throw ConfigError("sweep n_elements must be at least 1");
        const auto per_side = static_cast<std::size_t>(rounded);
        const auto extent = base.grid->extent();
        const double span = std::max(extent[0], extent[1]);
        if (per_side > 1 && !(span > 0.0)) {
            throw ConfigError("n_elements sweep needs a grid with a non-zero extent");
        }
        // Each non-degenerate dimension gets per_side elements over its extent.
        g.aperture.reset();
        g.spec.cols = extent[0] > 0.0 ? per_side : 1;
        g.spec.rows = extent[1] > 0.0 ? per_side : 1;
        if (per_side > 1) {
            g.spec.spacing = span / static_cast<double>(per_side - 1);
            if (extent[0] > 0.0 && extent[1] > 0.0 && extent[0] != extent[1]) {
                throw ConfigError("n_elements sweep needs a square aperture");
            }
        }
        break;
    }
    }
    return c;
}

std::vector<SweepRow> run_sweep(const SceneConfig& config, const SweepSpec& spec, const RunOptions& opts) {
    if (spec.parameter != SweepParameter::frequency && !config.grid) {
        throw ConfigError("sweeping " + to_string(spec.parameter) + " requires a grid surface");
    }
    std::vector<SweepRow> rows;
    for (double value : sweep_values(spec)) {
        SweepRow row;
        row.value = value;
        try {
            const SceneConfig point = sweep_point_config(config, spec.parameter, value);
            const ChannelRun run = run_channel(point, opts);
            row.n_elements = run.scene.size();
            row.result = run.result;
            if (run.optimization) row.optimized_objective = std::norm(run.result.h_e2e);
        } catch (const Error& e) {
            row.status = dynamic_cast<const NumericError*>(&e) ? "numeric_error" : "input_error";
            row.message = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ValidationReport run_validation(const ValidationBounds& b, std::size_t samples, std::uint64_t seed,
                                double oracle_tol) {
    if (samples < 1) throw ConfigError("validate needs at least one sample");
    if (!(b.distance_min > 2.0 * b.radius_max)) {
        throw ConfigError("validate bounds allow touching wires: distance_lambda min must exceed 2 * radius max");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> h(b.half_length_min, b.half_length_max);
    std::uniform_real_distribution<double> a(b.radius_min, b.radius_max);
    std::uniform_real_distribution<double> d(b.distance_min, b.distance_max);
    std::uniform_real_distribution<double> dz(-b.dz_max, b.dz_max);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::uniform_int_distribution<std::size_t> pick(0, b.frequencies_hz.size() - 1);

    ValidationReport report;
    for (std::size_t i = 0; i < samples; ++i) {
        ValidationSample s;
        s.frequency_hz = b.frequencies_hz[pick(rng)];
        const double lambda = kSpeedOfLight / s.frequency_hz;
        const double k = 2.0 * kPi / lambda;
        const double dist = d(rng) * lambda;
        const double phi = angle(rng);
        try {
            s.p = make_dipole({0.0, 0.0, 0.0}, h(rng) * lambda, a(rng) * lambda);
            s.q = make_dipole({dist * std::cos(phi), dist * std::sin(phi), dz(rng) * lambda}, h(rng) * lambda,
                              a(rng) * lambda);
        } catch (const GeometryError& e) {
            throw ConfigError(std::string("validate bounds produce an invalid dipole: ") + e.what());
        }
        const PairGeometry g = pair_geometry(s.p, s.q, false);
        s.closed = mutual_impedance_closed(g, k);
        s.oracle = mutual_impedance_oracle(g, k, oracle_tol);
        s.rel_error = relative_difference(s.closed, s.oracle);
        report.samples.push_back(s);
    }

    std::vector<double> errors;
    for (const auto& s : report.samples) errors.push_back(s.rel_error);
    std::sort(errors.begin(), errors.end());
    report.max_rel_error = errors.back();
    const std::size_t m = errors.size();
    report.median_rel_error = m % 2 == 1 ? errors[m / 2] : 0.5 * (errors[m / 2 - 1] + errors[m / 2]);
    report.passed = report.max_rel_error <= report.gate;
    return report;
}

void write_impedances(const fs::path& dir, const Scene& scene, const ImpedanceSet& imps) {
    fs::create_directories(dir);
    {
        auto out = open_output(dir / "Z_SS.csv");
        out << kMatrixHeader;
        for (Eigen::Index q = 0; q < imps.z_ss.rows(); ++q) {
            for (Eigen::Index p = 0; p < imps.z_ss.cols(); ++p) {
                out << q << ',' << p << ',' << fmt(imps.z_ss(q, p).real()) << ',' << fmt(imps.z_ss(q, p).imag())
                    << '\n';
            }
        }
    }
    write_vector_csv(dir / "z_RS.csv", imps.z_rs);
    write_vector_csv(dir / "z_ST.csv", imps.z_st);
    write_json(dir / "impedance.json", {{"frequency_hz", scene.frequency_hz},
                                        {"n_elements", scene.size()},
                                        {"z_RT_re_ohm", imps.z_rt.real()},
                                        {"z_RT_im_ohm", imps.z_rt.imag()}});
}

void write_channel(const fs::path& dir, const ChannelRun& run) {
    fs::create_directories(dir);
    json j{{"h_e2e_re_ohm", run.result.h_e2e.real()},
           {"h_e2e_im_ohm", run.result.h_e2e.imag()},
           {"h_e2e_abs_ohm", std::abs(run.result.h_e2e)},
           {"gain_db", run.result.gain_db},
           {"condition_estimate", run.result.condition_estimate},
           {"z_RT_re_ohm", run.impedances.z_rt.real()},
           {"z_RT_im_ohm", run.impedances.z_rt.imag()},
           {"n_elements", run.scene.size()},
           {"frequency_hz", run.scene.frequency_hz},
           {"optimized", run.optimization.has_value()}};
    write_tuning_csv(dir / "tuning.csv", run.tuning);
    if (run.optimization) {
        j["objective_trace"] = run.optimization->trace;
        auto out = open_output(dir / "trace.csv");
        out << "sweep,objective_abs2_ohm2\n";
        for (std::size_t i = 0; i < run.optimization->trace.size(); ++i) {
            out << i << ',' << fmt(run.optimization->trace[i]) << '\n';
        }
    }
    write_json(dir / "channel.json", j);
}

void write_sweep(const fs::path& dir, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    fs::create_directories(dir);
    auto out = open_output(dir / "sweep.csv");
    out << "index," << to_string(spec.parameter)
        << ",n_elements,h_e2e_re_ohm,h_e2e_im_ohm,h_e2e_abs_ohm,gain_db,condition_estimate,"
           "optimized_objective,status,message\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRow& r = rows[i];
        out << i << ',' << fmt(r.value) << ',' << r.n_elements << ',';
        if (r.result) {
            out << fmt(r.result->h_e2e.real()) << ',' << fmt(r.result->h_e2e.imag()) << ','
                << fmt(std::abs(r.result->h_e2e)) << ',' << fmt(r.result->gain_db) << ','
                << fmt(r.result->condition_estimate) << ',';
        } else {
            out << ",,,,,";
        }
        out << (r.optimized_objective ? fmt(*r.optimized_objective) : "") << ',' << r.status << ','
            << csv_escape(r.message) << '\n';
    }
}

void write_validation(const fs::path& dir, const ValidationReport& report, std::size_t samples,
                      std::uint64_t seed, double oracle_tol) {
    fs::create_directories(dir);
    write_json(dir / "validate.json", {{"samples", samples},
                                       {"seed", seed},
                                       {"oracle_tol", oracle_tol},
                                       {"gate", report.gate},
                                       {"max_rel_error", report.max_rel_error},
                                       {"median_rel_error", report.median_rel_error},
                                       {"passed", report.passed}});
    auto out = open_output(dir / "validate.csv");
    out << "index,frequency_hz,h_p_m,h_q_m,radius_p_m,radius_q_m,rho_m,dz_m,closed_re_ohm,closed_im_ohm,"
           "oracle_re_ohm,oracle_im_ohm,rel_error\n";
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
        const auto& s = report.samples[i];
        const PairGeometry g = pair_geometry(s.p, s.q, false);
        out << i << ',' << fmt(s.frequency_hz) << ',' << fmt(s.p.half_length) << ',' << fmt(s.q.half_length)
            << ',' << fmt(s.p.radius) << ',' << fmt(s.q.radius) << ',' << fmt(g.rho) << ',' << fmt(g.dz) << ','
            << fmt(s.closed.real()) << ',' << fmt(s.closed.imag()) << ',' << fmt(s.oracle.real()) << ','
            << fmt(s.oracle.imag()) << ',' << fmt(s.rel_error) << '\n';
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mutual-coupling impedances and end-to-end channel of thin-wire dipole surfaces",
                 "ris_coupling"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    RunOptions run_opts;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "Scene config (JSON)")->required();
        sub->add_option("--out", out_dir, "Output directory (default: config output.directory or .)");
        sub->add_option("--oracle-tol", run_opts.oracle_tol, "Relative tolerance of the quadrature oracle")
            ->check(CLI::PositiveNumber);
        sub->add_option("--threads", run_opts.threads, "Worker threads for assembly (0 = all cores)");
    };

    CLI::App* impedance = app.add_subcommand("impedance", "Write Z_SS, z_RS, z_ST and z_RT");
    add_common(impedance);
    CLI::App* channel = app.add_subcommand("channel", "Evaluate (and optionally optimize) the end-to-end channel");
    add_common(channel);

    CLI::App* sweep = app.add_subcommand("sweep", "Sweep spacing, frequency or elements per side");
    add_common(sweep);
    std::string param_name;
    SweepSpec sweep_spec;
    sweep->add_option("--param", param_name, "spacing | frequency | n_elements")
        ->required()
        ->check(CLI::IsMember({"spacing", "frequency", "n_elements"}));
    sweep->add_option("--from", sweep_spec.from, "First value")->required();
    sweep->add_option("--to", sweep_spec.to, "Last value")->required();
    sweep->add_option("--points", sweep_spec.points, "Number of points")->required()->check(CLI::PositiveNumber);

    CLI::App* validate_cmd = app.add_subcommand("validate", "Closed form vs quadrature on random pairs");
    add_common(validate_cmd);
    std::size_t samples = 50;
    std::uint64_t seed = 1;
    validate_cmd->add_option("--samples", samples, "Number of random pairs")->check(CLI::PositiveNumber);
    validate_cmd->add_option("--seed", seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const SceneConfig config = load_config(config_path);
        const fs::path dir = !out_dir.empty() ? fs::path(out_dir)
                             : config.output_directory ? fs::path(*config.output_directory)
                                                       : fs::path(".");

        if (impedance->parsed()) {
            const Scene scene = config.scene();
            const ImpedanceSet imps = assemble_impedances(scene, {run_opts.oracle_tol, run_opts.threads});
            write_impedances(dir, scene, imps);
            out << "impedance: " << scene.size() << " elements, z_RT = " << fmt(imps.z_rt.real()) << " + j"
                << fmt(imps.z_rt.imag()) << " ohm -> " << dir.string() << '\n';
        } else if (channel->parsed()) {
            const ChannelRun run = run_channel(config, run_opts);
            write_channel(dir, run);
            out << "channel: h_e2e = " << fmt(run.result.h_e2e.real()) << " + j" << fmt(run.result.h_e2e.imag())
                << " ohm, gain " << fmt(run.result.gain_db) << " dB -> " << dir.string() << '\n';
        } else if (sweep->parsed()) {
            sweep_spec.parameter = parse_sweep_parameter(param_name);
            const auto rows = run_sweep(config, sweep_spec, run_opts);
            write_sweep(dir, sweep_spec, rows);
            const auto failed = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.status != "ok"; });
            out << "sweep: " << rows.size() << " points, " << failed << " failed -> " << dir.string() << '\n';
        } else if (validate_cmd->parsed()) {
            const ValidationReport report = run_validation(config.validation, samples, seed, run_opts.oracle_tol);
            write_validation(dir, report, samples, seed, run_opts.oracle_tol);
            out << "validate: " << samples << " pairs, max rel error " << fmt(report.max_rel_error)
                << ", median " << fmt(report.median_rel_error) << (report.passed ? " (pass)" : " (FAIL)")
                << " -> " << dir.string() << '\n';
            if (!report.passed) {
                err << "error: closed form exceeds the " << fmt(report.gate) << " relative-error gate\n";
                return kExitNumeric;
            }
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

} // namespace ris::cli
