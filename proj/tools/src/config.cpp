#include "ris_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace ris::cli {

using nlohmann::json;

namespace {

class Parser {
public:
    Parser(std::string_view source, double length_scale)
        : source_(source), scale_(length_scale) {}

    [[noreturn]] void fail(const std::string& path, const std::string& message) const {
        throw ConfigError(std::string(source_) + ": " + (path.empty() ? "/" : path) + ": " + message);
    }

    void set_scale(double s) { scale_ = s; }
    double scale() const { return scale_; }

    const json& object(const json& parent, const std::string& key, const std::string& path) const {
        const std::string p = path + "/" + key;
        if (!parent.contains(key)) fail(p, "missing required field");
        const json& v = parent.at(key);
        if (!v.is_object()) fail(p, "expected an object");
        return v;
    }

    void allow_keys(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> keys) const {
        for (const auto& [key, _] : obj.items()) {
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                fail(path + "/" + key, "unknown field");
            }
        }
    }

    double number(const json& v, const std::string& path) const {
        if (!v.is_number()) fail(path, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(path, "must be finite");
        return d;
    }

    double number(const json& parent, const std::string& key, const std::string& path) const {
        const std::string p = path + "/" + key;
        if (!parent.contains(key)) fail(p, "missing required field");
        return number(parent.at(key), p);
    }

    double positive(const json& parent, const std::string& key, const std::string& path) const {
        const double d = number(parent, key, path);
        if (!(d > 0.0)) fail(path + "/" + key, "must be positive");
        return d;
    }

    double length(const json& parent, const std::string& key, const std::string& path) const {
        return positive(parent, key, path) * scale_;
    }

    std::size_t count(const json& parent, const std::string& key, const std::string& path) const {
        const std::string p = path + "/" + key;
        if (!parent.contains(key)) fail(p, "missing required field");
        const json& v = parent.at(key);
        if (!v.is_number_integer() || v.get<std::int64_t>() < 1) fail(p, "expected an integer >= 1");
        return v.get<std::size_t>();
    }

    bool boolean(const json& parent, const std::string& key, const std::string& path, bool fallback) const {
        if (!parent.contains(key)) return fallback;
        const json& v = parent.at(key);
        if (!v.is_boolean()) fail(path + "/" + key, "expected true or false");
        return v.get<bool>();
    }

    std::vector<double> numbers(const json& v, const std::string& path, std::size_t expected) const {
        if (!v.is_array() || (expected != 0 && v.size() != expected)) {
            fail(path, expected != 0 ? "expected an array of " + std::to_string(expected) + " numbers"
                                     : "expected an array of numbers");
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(number(v[i], path + "/" + std::to_string(i)));
        }
        return out;
    }

    Vec3 point(const json& v, const std::string& path) const {
        const auto xyz = numbers(v, path, 3);
        return {xyz[0] * scale_, xyz[1] * scale_, xyz[2] * scale_};
    }

    Complex complex(const json& v, const std::string& path) const {
        if (!v.is_object()) fail(path, "expected an object {\"re\": ..., \"im\": ...}");
        allow_keys(v, path, {"re", "im"});
        return {number(v, "re", path), number(v, "im", path)};
    }

    Dipole dipole(const json& v, const std::string& path) const {
        if (!v.is_object()) fail(path, "expected a dipole object");
        allow_keys(v, path, {"center", "half_length", "radius"});
        if (!v.contains("center")) fail(path + "/center", "missing required field");
        Dipole d{point(v.at("center"), path + "/center"), length(v, "half_length", path),
                 length(v, "radius", path)};
        try {
            validate(d);
        } catch (const GeometryError& e) {
            fail(path, e.what());
        }
        return d;
    }

private:
    std::string_view source_;
    double scale_;
};

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

GridConfig parse_grid(const Parser& p, const json& g, const std::string& path) {
    p.allow_keys(g, path, {"rows", "cols", "aperture", "spacing", "half_length", "radius", "center", "plane"});
    GridConfig out;
    GridSpec& s = out.spec;
    s.spacing = p.length(g, "spacing", path);
    s.half_length = p.length(g, "half_length", path);
    s.radius = p.length(g, "radius", path);
    s.center = g.contains("center") ? p.point(g.at("center"), path + "/center") : Vec3{};
    if (g.contains("plane")) {
        const json& plane = g.at("plane");
        if (plane == "xy") {
            s.plane = GridPlane::xy;
        } else if (plane == "xz") {
            s.plane = GridPlane::xz;
        } else {
            p.fail(path + "/plane", "expected \"xy\" or \"xz\"");
        }
    }
    const bool counts = g.contains("rows") || g.contains("cols");
    if (counts == g.contains("aperture")) {
        p.fail(path, "give either rows and cols, or aperture");
    }
    if (counts) {
        s.rows = p.count(g, "rows", path);
        s.cols = p.count(g, "cols", path);
    } else {
        const auto ap = p.numbers(g.at("aperture"), path + "/aperture", 2);
        for (std::size_t i = 0; i < 2; ++i) {
            if (ap[i] < 0.0) p.fail(path + "/aperture/" + std::to_string(i), "must be non-negative");
        }
        out.aperture = std::array<double, 2>{ap[0] * p.scale(), ap[1] * p.scale()};
    }
    return out;
}

TuningConfig parse_tuning(const Parser& p, const json& t, const std::string& path) {
    p.allow_keys(t, path, {"reactance_only", "bounds", "entries", "uniform", "optimize"});
    TuningConfig out;
    out.reactance_only = p.boolean(t, "reactance_only", path, true);
    if (t.contains("bounds")) {
        const auto b = p.numbers(t.at("bounds"), path + "/bounds", 2);
        if (!(b[0] <= b[1])) p.fail(path + "/bounds", "expected [min, max] with min <= max");
        out.reactance_min = b[0];
        out.reactance_max = b[1];
    }
    if (t.contains("entries") && t.contains("uniform")) {
        p.fail(path, "give either entries or uniform, not both");
    }
    if (t.contains("entries")) {
        const json& e = t.at("entries");
        if (!e.is_array() || e.empty()) p.fail(path + "/entries", "expected a non-empty array");
        for (std::size_t i = 0; i < e.size(); ++i) {
            out.entries.push_back(p.complex(e[i], path + "/entries/" + std::to_string(i)));
        }
    }
    if (t.contains("uniform")) {
        out.uniform = p.complex(t.at("uniform"), path + "/uniform");
    }
    if (t.contains("optimize")) {
        const std::string op = path + "/optimize";
        const json& o = t.at("optimize");
        if (!o.is_object()) p.fail(op, "expected an object");
        p.allow_keys(o, op, {"budget", "seed", "scan_points"});
        out.mode = TuningConfig::Mode::optimize;
        if (o.contains("budget")) out.budget = p.count(o, "budget", op);
        if (o.contains("seed")) {
            if (!o.at("seed").is_number_unsigned()) p.fail(op + "/seed", "expected a non-negative integer");
            out.seed = o.at("seed").get<std::uint64_t>();
        }
        if (o.contains("scan_points")) {
            out.scan_points = p.count(o, "scan_points", op);
            if (out.scan_points < 3) p.fail(op + "/scan_points", "must be at least 3");
        }
    }
    // Check the invariants up front so errors point at the config.
    TuningState probe;
    probe.entries = out.entries.empty() ? std::vector<Complex>{out.uniform} : out.entries;
    probe.reactance_only = out.reactance_only;
    probe.reactance_min = out.reactance_min;
    probe.reactance_max = out.reactance_max;
    try {
        validate(probe);
    } catch (const InputError& e) {
        p.fail(path, e.what());
    }
    return out;
}

ValidationBounds parse_validation(const Parser& p, const json& v, const std::string& path) {
    p.allow_keys(v, path, {"half_length_lambda", "radius_lambda", "distance_lambda", "dz_max_lambda",
                           "frequencies_hz"});
    ValidationBounds out;
    auto range = [&](const char* key, double& lo, double& hi) {
        if (!v.contains(key)) return;
        const std::string kp = path + "/" + key;
        const auto r = p.numbers(v.at(key), kp, 2);
        if (!(r[0] > 0.0 && r[0] <= r[1])) p.fail(kp, "expected [min, max] with 0 < min <= max");
        lo = r[0];
        hi = r[1];
    };
    range("half_length_lambda", out.half_length_min, out.half_length_max);
    range("radius_lambda", out.radius_min, out.radius_max);
    range("distance_lambda", out.distance_min, out.distance_max);
    if (v.contains("dz_max_lambda")) {
        out.dz_max = p.number(v, "dz_max_lambda", path);
        if (out.dz_max < 0.0) p.fail(path + "/dz_max_lambda", "must be non-negative");
    }
    if (v.contains("frequencies_hz")) {
        out.frequencies_hz = p.numbers(v.at("frequencies_hz"), path + "/frequencies_hz", 0);
        if (out.frequencies_hz.empty()) p.fail(path + "/frequencies_hz", "must not be empty");
        for (double f : out.frequencies_hz) {
            if (!(f > 0.0)) p.fail(path + "/frequencies_hz", "frequencies must be positive");
        }
    }
    return out;
}

json dipole_json(const Dipole& d) {
    return {{"center", {d.center.x, d.center.y, d.center.z}},
            {"half_length", d.half_length},
            {"radius", d.radius}};
}

json complex_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }

} // namespace

std::size_t count_for_extent(double extent, double spacing) {
    return static_cast<std::size_t>(std::floor(extent / spacing + 1e-9)) + 1;
}

std::array<double, 2> GridConfig::extent() const {
    if (aperture) return *aperture;
    return {static_cast<double>(spec.cols - 1) * spec.spacing,
            static_cast<double>(spec.rows - 1) * spec.spacing};
}

TuningState TuningConfig::state(std::size_t n) const {
    TuningState t;
    if (entries.empty()) {
        t.entries.assign(n, uniform);
    } else {
        if (entries.size() != n) {
            throw ConfigError("tuning lists " + std::to_string(entries.size()) +
                              " entries but the surface has " + std::to_string(n) + " elements");
        }
        t.entries = entries;
    }
    t.reactance_only = reactance_only;
    t.reactance_min = reactance_min;
    t.reactance_max = reactance_max;
    return t;
}

Scene SceneConfig::scene() const {
    Scene s;
    s.frequency_hz = frequency_hz;
    s.transmitter = transmitter;
    s.receiver = receiver;
    if (grid) {
        GridSpec spec = grid->spec;
        if (grid->aperture) {
            spec.cols = count_for_extent((*grid->aperture)[0], spec.spacing);
            spec.rows = count_for_extent((*grid->aperture)[1], spec.spacing);
        }
        s.surface = build_grid(spec);
    } else {
        s.surface = dipoles;
    }
    validate(s);
    return s;
}

SceneConfig parse_config(std::string_view text, std::string_view source) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": syntax error: " + e.what());
    }

    Parser p(source, 1.0);
    if (!root.is_object()) p.fail("", "expected a JSON object at the top level");
    p.allow_keys(root, "", {"frequency_hz", "lambda_units", "transmitter", "receiver", "surface", "tuning",
                            "validate", "condition_cap", "output"});

    SceneConfig c;
    c.frequency_hz = p.positive(root, "frequency_hz", "");
    if (p.boolean(root, "lambda_units", "", false)) {
        c.length_scale = kSpeedOfLight / c.frequency_hz;
        p.set_scale(c.length_scale);
    }

    if (!root.contains("transmitter")) p.fail("/transmitter", "missing required field");
    if (!root.contains("receiver")) p.fail("/receiver", "missing required field");
    c.transmitter = p.dipole(root.at("transmitter"), "/transmitter");
    c.receiver = p.dipole(root.at("receiver"), "/receiver");

    const json& surface = p.object(root, "surface", "");
    p.allow_keys(surface, "/surface", {"dipoles", "grid"});
    if (surface.contains("dipoles") == surface.contains("grid")) {
        p.fail("/surface", "give exactly one of dipoles or grid");
    }
    if (surface.contains("grid")) {
        c.grid = parse_grid(p, p.object(surface, "grid", "/surface"), "/surface/grid");
    } else {
        const json& list = surface.at("dipoles");
        if (!list.is_array() || list.empty()) p.fail("/surface/dipoles", "expected a non-empty array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            c.dipoles.push_back(p.dipole(list[i], "/surface/dipoles/" + std::to_string(i)));
        }
    }

    if (root.contains("tuning")) {
        c.tuning = parse_tuning(p, p.object(root, "tuning", ""), "/tuning");
    }
    if (root.contains("validate")) {
        c.validation = parse_validation(p, p.object(root, "validate", ""), "/validate");
    }
    if (root.contains("condition_cap")) {
        c.condition_cap = p.positive(root, "condition_cap", "");
    }
    if (root.contains("output")) {
        const json& out = p.object(root, "output", "");
        p.allow_keys(out, "/output", {"directory"});
        if (out.contains("directory")) {
            if (!out.at("directory").is_string()) p.fail("/output/directory", "expected a string");
            c.output_directory = out.at("directory").get<std::string>();
        }
    }
    return c;
}

SceneConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open config file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string());
}

json to_json(const SceneConfig& c) {
    json root;
    root["frequency_hz"] = c.frequency_hz;
    root["lambda_units"] = false;
    root["transmitter"] = dipole_json(c.transmitter);
    root["receiver"] = dipole_json(c.receiver);
    if (c.grid) {
        const GridSpec& s = c.grid->spec;
        json g{{"spacing", s.spacing},
               {"half_length", s.half_length},
               {"radius", s.radius},
               {"center", {s.center.x, s.center.y, s.center.z}},
               {"plane", s.plane == GridPlane::xy ? "xy" : "xz"}};
        if (c.grid->aperture) {
            g["aperture"] = {(*c.grid->aperture)[0], (*c.grid->aperture)[1]};
        } else {
            g["rows"] = s.rows;
            g["cols"] = s.cols;
        }
        root["surface"] = {{"grid", g}};
    } else {
        json list = json::array();
        for (const Dipole& d : c.dipoles) list.push_back(dipole_json(d));
        root["surface"] = {{"dipoles", list}};
    }

    const TuningConfig& t = c.tuning;
    json tuning{{"reactance_only", t.reactance_only}, {"bounds", {t.reactance_min, t.reactance_max}}};
    if (t.entries.empty()) {
        tuning["uniform"] = complex_json(t.uniform);
    } else {
        json entries = json::array();
        for (Complex e : t.entries) entries.push_back(complex_json(e));
        tuning["entries"] = entries;
    }
    if (t.mode == TuningConfig::Mode::optimize) {
        tuning["optimize"] = {{"budget", t.budget}, {"seed", t.seed}, {"scan_points", t.scan_points}};
    }
    root["tuning"] = tuning;

    const ValidationBounds& v = c.validation;
    root["validate"] = {{"half_length_lambda", {v.half_length_min, v.half_length_max}},
                        {"radius_lambda", {v.radius_min, v.radius_max}},
                        {"distance_lambda", {v.distance_min, v.distance_max}},
                        {"dz_max_lambda", v.dz_max},
                        {"frequencies_hz", v.frequencies_hz}};
    root["condition_cap"] = c.condition_cap;
    if (c.output_directory) root["output"] = {{"directory", *c.output_directory}};
    return root;
}

} // namespace ris::cli
