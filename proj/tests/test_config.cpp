#include <doctest.h>

#include <random>

#include "cli_support.hpp"
#include "ris_cli/config.hpp"

using namespace ris;
using namespace ris::cli;
using nlohmann::json;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text, "scene.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string error_of(const json& j) { return error_of(j.dump(2)); }

} // namespace

TEST_CASE("lambda units are resolved at parse time") {
    const SceneConfig c = parse_config(test::base_config(3e8).dump());
    const double lambda = kSpeedOfLight / 3e8;
    CHECK(c.length_scale == lambda);
    CHECK(c.transmitter.half_length == 0.25 * lambda);
    CHECK(c.transmitter.center.x == -3.0 * lambda);
    CHECK(c.grid->spec.spacing == 0.125 * lambda);
    const Scene s = c.scene();
    CHECK(s.size() == 4);
    CHECK(s.frequency_hz == 3e8);

    json meters = test::base_config();
    meters["lambda_units"] = false;
    meters["transmitter"]["half_length"] = 0.2;
    CHECK(parse_config(meters.dump()).transmitter.half_length == 0.2);
}

TEST_CASE("syntax errors carry line and column") {
    const std::string msg = error_of(std::string("{\n  \"frequency_hz\": 3e8,\n  \"lambda_units\": tru\n}"));
    CHECK(msg.find("scene.json:3:") == 0);
    CHECK(msg.find("syntax error") != std::string::npos);
}

TEST_CASE("field errors name the JSON pointer") {
    json j = test::base_config();
    j["surface"]["grid"]["spacing"] = -1.0;
    CHECK(error_of(j).find("/surface/grid/spacing: must be positive") != std::string::npos);

    j = test::base_config();
    j.erase("receiver");
    CHECK(error_of(j).find("/receiver: missing required field") != std::string::npos);

    j = test::base_config();
    j["transmitter"]["radius"] = 0.05; // fatter than h/10
    CHECK(error_of(j).find("/transmitter: ") != std::string::npos);
    CHECK(error_of(j).find("thin-wire") != std::string::npos);

    j = test::base_config();
    j["tuning"]["uniform"]["im"] = "large";
    CHECK(error_of(j).find("/tuning/uniform/im: expected a number") != std::string::npos);

    j = test::base_config();
    j["surfce"] = json::object();
    CHECK(error_of(j).find("/surfce: unknown field") != std::string::npos);
}

TEST_CASE("surface must be exactly one of list or grid") {
    json j = test::base_config();
    j["surface"]["dipoles"] = json::array({{{"center", {0, 0, 0}}, {"half_length", 0.25}, {"radius", 0.001}}});
    CHECK(error_of(j).find("exactly one of dipoles or grid") != std::string::npos);
    j["surface"] = json::object();
    CHECK(error_of(j).find("exactly one of dipoles or grid") != std::string::npos);

    j = test::base_config();
    j["surface"]["grid"]["aperture"] = {1.0, 1.0};
    CHECK(error_of(j).find("either rows and cols, or aperture") != std::string::npos);
}

TEST_CASE("tuning section") {
    json j = test::base_config();
    j["tuning"] = {{"bounds", {-100, 100}}, {"uniform", {{"re", 0.0}, {"im", 500.0}}}};
    CHECK(error_of(j).find("outside the bounds") != std::string::npos);

    j["tuning"] = {{"entries", {{{"re", 0.0}, {"im", 1.0}}, {{"re", 0.0}, {"im", 2.0}}}}};
    const SceneConfig c = parse_config(j.dump());
    CHECK_THROWS_AS(c.tuning.state(4), ConfigError);
    CHECK(c.tuning.state(2).entries[1] == Complex{0.0, 2.0});

    j["tuning"] = {{"reactance_only", false}, {"uniform", {{"re", 5.0}, {"im", 1.0}}},
                   {"optimize", {{"budget", 3}, {"seed", 9}}}};
    const SceneConfig o = parse_config(j.dump());
    CHECK(o.tuning.mode == TuningConfig::Mode::optimize);
    CHECK(o.tuning.budget == 3);
    CHECK(o.tuning.seed == 9);
    CHECK_FALSE(o.tuning.state(4).reactance_only);

    j["tuning"]["optimize"]["budget"] = 0;
    CHECK(error_of(j).find("/tuning/optimize/budget") != std::string::npos);
}

TEST_CASE("aperture grids derive their counts") {
    json j = test::base_config();
    j["surface"]["grid"].erase("rows");
    j["surface"]["grid"].erase("cols");
    j["surface"]["grid"]["aperture"] = {1.0, 0.5};
    j["surface"]["grid"]["spacing"] = 0.25;
    const SceneConfig c = parse_config(j.dump());
    CHECK(c.scene().size() == 5 * 3);
    CHECK(count_for_extent(1.0, 0.125) == 9);
    CHECK(count_for_extent(0.0, 0.3) == 1);
}

TEST_CASE("geometry problems surface when the scene is built") {
    json j = test::base_config();
    j["receiver"] = j["transmitter"];
    const SceneConfig c = parse_config(j.dump());
    CHECK_THROWS_AS(c.scene(), GeometryError);
}

TEST_CASE("config round trip preserves the scene") {
    // Random configs; serializing and re-parsing must give an identical scene.
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> pos(-5.0, 5.0), h(0.05, 0.45), freq(1e8, 5e10), x(-900.0, 900.0);
    std::uniform_int_distribution<int> count(1, 4), coin(0, 1);
    for (int trial = 0; trial < 40; ++trial) {
        json j;
        j["frequency_hz"] = freq(rng);
        j["lambda_units"] = coin(rng) == 1;
        j["transmitter"] = {{"center", {pos(rng), 8.0, pos(rng)}}, {"half_length", h(rng)}, {"radius", 0.001}};
        j["receiver"] = {{"center", {pos(rng), -8.0, pos(rng)}}, {"half_length", h(rng)}, {"radius", 0.001}};
        const int n = count(rng);
        if (coin(rng) == 1) {
            j["surface"]["grid"] = {{"rows", n}, {"cols", count(rng)}, {"spacing", 1.0 + h(rng)},
                                    {"half_length", h(rng)}, {"radius", 0.002}, {"plane", "xz"}};
        } else {
            json list = json::array();
            for (int i = 0; i < n; ++i) {
                list.push_back({{"center", {2.0 * i, pos(rng) / 10.0, 0.0}}, {"half_length", h(rng)}, {"radius", 0.002}});
            }
            j["surface"]["dipoles"] = list;
        }
        j["tuning"] = {{"uniform", {{"re", 0.0}, {"im", x(rng)}}}, {"optimize", {{"budget", 4}}}};

        const SceneConfig first = parse_config(j.dump());
        const json written = to_json(first);
        const SceneConfig second = parse_config(written.dump());
        CHECK(second.scene() == first.scene());
        CHECK(to_json(second) == written);
        CHECK(second.tuning.state(first.scene().size()).entries == first.tuning.state(first.scene().size()).entries);
    }
}
