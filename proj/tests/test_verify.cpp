#include "doctest.h"

#include "zermelo/verify.hpp"

#include <json.hpp>

#include <fstream>
#include <regex>
#include <sstream>

using namespace zermelo;
using namespace zermelo::verify;

namespace {

auto scenario_path(std::string const& name) -> std::filesystem::path
{
    return std::filesystem::path(ZERMELO_SOURCE_DIR) / "scenarios" / (name + ".toml");
}

auto without_runtimes(std::string json) -> std::string
{
    return std::regex_replace(json, std::regex(R"("runtime_seconds": [^,\n]*)"), "\"runtime_seconds\": 0");
}

auto errors_of(std::string const& text) -> std::vector<std::string>
{
    try {
        parse_scenario(text);
    } catch (ScenarioError const& e) {
        return e.violations();
    }
    return {};
}

auto mentions(std::vector<std::string> const& lines, std::string const& needle) -> bool
{
    for (auto const& l : lines)
        if (l.find(needle) != std::string::npos) return true;
    return false;
}

/// Small, fast configuration for exercising the machinery.
auto quick(ScenarioConfig c) -> ScenarioConfig
{
    c.geodesic.starts = 2;
    c.geodesic.duration = 0.5;
    c.jacobi.geodesics = 1;
    c.jacobi.fields_per_geodesic = 2;
    c.jacobi.duration = 0.5;
    c.flag.flags = 10;
    c.symmetry.starts = 1;
    c.symmetry.duration = 0.5;
    return c;
}

}  // namespace

TEST_CASE("bundled scenarios load")
{
    auto const katok = load_scenario(scenario_path("katok"));
    CHECK(katok.name == "katok");
    CHECK(katok.base.metric == "sphere_stereographic");
    CHECK(katok.base.scale == 2.0);
    CHECK(katok.wind.omega == 0.9);
    CHECK(katok.checks == known_checks());
    CHECK(katok.geodesic.starts == 20);
    CHECK(reference_curvature(katok.base) == 1.0);

    auto const flat = load_scenario(scenario_path("flat_randers"));
    CHECK(flat.wind.components == std::vector<double>{0.3, -0.4});
    CHECK(reference_curvature(flat.base) == 0.0);
    CHECK(flat.geodesic.tolerance == 1e-6);

    CHECK_NOTHROW(load_scenario(scenario_path("planar_rotation")));
    CHECK_THROWS_AS(load_scenario(scenario_path("missing")), ScenarioError);
}

TEST_CASE("a wind faster than the metric is rejected before any check runs")
{
    auto const path = std::filesystem::path(ZERMELO_SOURCE_DIR) / "tests" / "data" / "katok_fast_wind.toml";
    try {
        run(path);
        FAIL("expected a validation error");
    } catch (ScenarioError const& e) {
        CHECK(mentions(e.violations(), "admissibility violated"));
        CHECK(std::string(e.what()).find("admissibility violated") != std::string::npos);
    }
}

TEST_CASE("validation lists every violated constraint")
{
    auto const errors = errors_of(R"(
name = ""
colour = "blue"
[base]
metric = "hyperbolic"
dim = 7
[wind]
kind = "constant"
components = [1.0]
[integrator]
step = -1.0
[checks]
enabled = ["geodesic_correspondence", "teleportation", "geodesic_correspondence"]
[checks.flag_equality]
flags = 0
tolerance = "tiny"
)");
    CHECK(mentions(errors, "colour: unknown key"));
    CHECK(mentions(errors, "checks.flag_equality.tolerance: expected a number"));
    CHECK(errors.size() == 2);

    // type errors are reported first; a well-typed config reports all semantic violations at once
    auto const semantic = errors_of(R"(
name = "broken"
[base]
metric = "hyperbolic"
dim = 7
[wind]
kind = "constant"
components = [1.0]
[integrator]
step = -1.0
[checks]
enabled = ["geodesic_correspondence", "teleportation", "geodesic_correspondence"]
[checks.flag_equality]
flags = 0
)");
    CHECK(mentions(errors_of("name = \"\"\n"), "name must be set"));
    CHECK(mentions(semantic, "base.metric: unknown metric"));
    CHECK(mentions(semantic, "base.dim must be 2 or 3"));
    CHECK(mentions(semantic, "wind.components"));
    CHECK(mentions(semantic, "integrator.step must be positive"));
    CHECK(mentions(semantic, "unknown check \"teleportation\""));
    CHECK(mentions(semantic, "listed twice"));
    CHECK(mentions(semantic, "checks.flag_equality.flags must be at least 1"));

    CHECK(mentions(errors_of("name = \"x\"\n[base]\nmetric = \"euclidean\"\nscale = 2.0\n"), "only allowed"));
    CHECK(mentions(errors_of("name = [unterminated"), "<string>"));
    CHECK(mentions(errors_of(R"(
name = "windy"
[wind]
kind = "planar_rotation"
omega = 0.5
[domain]
radius = 2.5
)"),
                   "admissibility violated"));
}

TEST_CASE("gate blocks the checks when the wind is not Killing")
{
    ScenarioConfig c;
    c.name = "tilted";
    c.base.metric = "conformal";
    c.base.scale = 2.0;
    c.base.curvature = 1.0;
    c.base.tilt = 0.2;
    c.wind.kind = "stereographic_rotation";
    c.wind.omega = 0.3;
    c.domain_radius = 1.0;
    c.flag.sample_radius = 0.8;
    REQUIRE(validate(c).empty());
    auto const report = run(c);
    CHECK(report.gate.admissible);
    CHECK_FALSE(report.gate.killing);
    CHECK(report.gate.killing_residual > 1e-3);
    CHECK(report.aborted);
    CHECK_FALSE(report.pass());
    REQUIRE(report.checks.size() == 4);
    for (auto const& check : report.checks) {
        CHECK(check.status == CheckStatus::skipped);
        CHECK_FALSE(check.property.empty());
    }
    auto const json = nlohmann::json::parse(report_json(report));
    CHECK(json["gate"]["killing"]["pass"] == false);
    CHECK(json["pass"] == false);
    CHECK(json["abort_reason"].get<std::string>().find("Killing") != std::string::npos);
}

TEST_CASE("zero wind leaves everything unchanged")
{
    ScenarioConfig c;
    c.name = "calm";
    c.base.metric = "sphere_stereographic";
    c.base.scale = 2.0;
    c.base.curvature = 1.0;
    c.wind.kind = "constant";
    c.wind.components = {0.0, 0.0};
    c = quick(c);
    auto const scenario = build_scenario(c);

    auto const table = geodesic_table(scenario, {Vector::Zero(2), Vector::Unit(2, 0) / 2.0}, 1.0);
    REQUIRE(table.rows.size() == 1001);
    for (auto const& row : table.rows)
        for (int i = 0; i < 2; ++i) CHECK(row[1 + 4 + i] == row[1 + i]);  // mapped == x

    auto const jacobi = verify_jacobi_correspondence(scenario);
    CHECK(jacobi.pass());
    CHECK(jacobi.find("length_ratio_defect")->value < 1e-12);

    auto const flags = verify_flag_equality(scenario);
    CHECK(flags.find("max_difference")->value < 1e-12);
}

TEST_CASE("flat Randers scenario passes end to end and is deterministic")
{
    auto const first = run(scenario_path("flat_randers"));
    CHECK(first.pass());
    CHECK(first.gate.pass());
    REQUIRE(first.checks.size() == 4);
    for (auto const& check : first.checks) {
        CAPTURE(check.check);
        CHECK(check.status == CheckStatus::passed);
        CHECK_FALSE(check.property.empty());
        CHECK_FALSE(check.measurements.empty());
    }
    CHECK(first.find(kGeodesicCheck)->find("sup_distance")->value < 1e-6);
    auto const* symmetry = first.find(kSymmetryCheck);
    CHECK(symmetry->find("deformed_residual")->value < 1e-6);
    auto const* contrast = symmetry->find("contrast_residual");
    REQUIRE(contrast);
    CHECK(contrast->expect == Expect::above);
    CHECK(contrast->value > 1e-2);

    auto const second = run(scenario_path("flat_randers"));
    CHECK(without_runtimes(report_json(first)) == without_runtimes(report_json(second)));

    auto const json = nlohmann::json::parse(report_json(first));
    CHECK(json["scenario"] == "flat_randers");
    CHECK(json["environment"]["seed"] == 314159);
    CHECK(json["checks"].size() == 4);
    CHECK(json["checks"][3]["measurements"][3]["expected_fail"] == true);
    CHECK(json["pass"] == true);

    std::ostringstream csv;
    write_report(csv, first, Format::csv);
    CHECK(csv.str().rfind("scenario,check,measurement,value,tolerance,expect,pass\n", 0) == 0);
    CHECK(csv.str().find("flat_randers,overall,pass,,,,1") != std::string::npos);
}

TEST_CASE("planar rotation scenario passes end to end")
{
    auto const report = run(scenario_path("planar_rotation"));
    CHECK(report.pass());
    CHECK(report.gate.max_strength == doctest::Approx(0.9));
    CHECK(report.find(kFlagCheck)->find("max_difference")->value < 1e-6);
}

TEST_CASE("Katok scenario passes end to end")
{
    auto const report = run(scenario_path("katok"));
    CHECK(report.pass());
    REQUIRE(report.checks.size() == 4);
    CHECK(report.runtime_seconds < 60.0);
    CHECK(report.find(kFlagCheck)->find("deformed_vs_reference")->value < 1e-6);
}

TEST_CASE("enabled checks run in declared order and only once")
{
    auto c = quick(load_scenario(scenario_path("flat_randers")));
    c.checks = {std::string(kFlagCheck), std::string(kGeodesicCheck)};
    auto const report = run(c);
    REQUIRE(report.checks.size() == 2);
    CHECK(report.checks[0].check == kFlagCheck);
    CHECK(report.checks[1].check == kGeodesicCheck);
    CHECK(report.pass());
}

TEST_CASE("data tables")
{
    auto const katok = build_scenario(load_scenario(scenario_path("katok")));

    auto const curvature = curvature_table(katok, 20);
    CHECK(curvature.columns.back() == "K_tilde");
    CHECK(curvature.rows.size() == 20);
    for (auto const& row : curvature.rows) {
        CHECK(row[6] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(row[7] == doctest::Approx(1.0).epsilon(1e-6));
    }

    Vector x(2);
    x << 0.8, -0.3;
    auto const indicatrix = indicatrix_table(katok, x, 36);
    CHECK(indicatrix.rows.size() == 36);
    for (auto const& row : indicatrix.rows) CHECK(row.back() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(indicatrix_table(katok, Vector::Zero(3), 4), std::invalid_argument);

    Vector xi(2);
    xi << 0.0, 1.0;
    auto const geo = geodesic_table(katok, {Vector::Unit(2, 0), xi}, 1.0);
    CHECK(geo.columns.size() == 1 + 4 * 2 + 2);
    for (auto const& row : geo.rows) {
        CHECK(row[row.size() - 2] < 1e-9);
        CHECK(row.back() == doctest::Approx(1.0).epsilon(1e-9));
    }

    std::ostringstream csv;
    write_table(csv, {{"a", "b"}, {{1.0, 2.5}}}, Format::csv);
    CHECK(csv.str() == "a,b\n1,2.5\n");
    std::ostringstream json;
    write_table(json, {{"a", "b"}, {{1.0, 2.5}}}, Format::json);
    CHECK(json.str() == "{\"columns\":[\"a\",\"b\"],\"rows\":[[1.0,2.5]]}\n");
    CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}
