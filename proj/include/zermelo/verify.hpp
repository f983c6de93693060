#pragma once

/// \file verify.hpp
/// Scenario configs, the verification checks run against them, and report emission.

#include "zermelo/flow.hpp"
#include "zermelo/metric.hpp"
#include "zermelo/wind.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zermelo::verify {

struct BaseSpec
{
    std::string metric = "euclidean";  ///< euclidean | sphere_stereographic | conformal
    int dim = 2;
    /// conformal factor scale (1 + tilt x_1) / (1 + curvature |x|^2); fixed by the named metrics
    double scale = 1.0;
    double curvature = 0.0;
    double tilt = 0.0;
};

struct WindSpec
{
    std::string kind = "constant";  ///< constant | planar_rotation | stereographic_rotation
    std::vector<double> components;
    double omega = 0.0;
};

struct GeodesicCheckConfig
{
    int starts = 20;
    double duration = 6.283185307179586;
    double start_radius = 1.0;
    double tolerance = 1e-5;
    double speed_tolerance = 1e-6;
};

struct JacobiCheckConfig
{
    int geodesics = 5;
    int fields_per_geodesic = 2;
    double duration = 3.141592653589793;
    double start_radius = 1.0;
    double residual_tolerance = 1e-4;
    double orthogonality_tolerance = 1e-5;
    double ratio_tolerance = 1e-5;
};

struct FlagCheckConfig
{
    int flags = 100;
    double sample_radius = 1.5;
    double tolerance = 1e-6;
    double reference_tolerance = 1e-6;
};

struct SymmetryCheckConfig
{
    int starts = 10;
    double duration = 1.0;
    double start_radius = 1.0;
    double tolerance = 1e-4;
    double base_tolerance = 1e-5;
    bool contrast = true;
    double contrast_epsilon = 0.1;
    double contrast_threshold = 1e-2;
};

inline constexpr std::string_view kGeodesicCheck = "geodesic_correspondence";
inline constexpr std::string_view kJacobiCheck = "jacobi_correspondence";
inline constexpr std::string_view kFlagCheck = "flag_equality";
inline constexpr std::string_view kSymmetryCheck = "local_symmetry";

auto known_checks() -> std::vector<std::string>;

struct ScenarioConfig
{
    std::string name;
    std::string description;
    std::uint64_t seed = 1;
    BaseSpec base;
    WindSpec wind;
    double domain_radius = 1.0;
    int admissibility_samples = 2000;
    double step = 1e-3;
    double chart_radius = 4.0;
    double killing_tolerance = 1e-8;
    int killing_samples = 100;
    std::vector<std::string> checks = known_checks();
    GeodesicCheckConfig geodesic;
    JacobiCheckConfig jacobi;
    FlagCheckConfig flag;
    SymmetryCheckConfig symmetry;
};

/// Invalid scenario; what() lists every violation, one per line.
class ScenarioError : public std::runtime_error
{
  public:
    explicit ScenarioError(std::vector<std::string> violations);
    auto violations() const -> std::vector<std::string> const& { return violations_; }

  private:
    std::vector<std::string> violations_;
};

/// Parses and validates. Throws ScenarioError.
auto parse_scenario(std::string_view text, std::string const& source = "<string>") -> ScenarioConfig;
auto load_scenario(std::filesystem::path const& path) -> ScenarioConfig;

/// All violated constraints, empty when the config is usable. Includes the sampled admissibility check.
auto validate(ScenarioConfig const& config) -> std::vector<std::string>;

struct Scenario
{
    ScenarioConfig config;
    MetricDescriptor base;
    WindField wind;
    MetricDescriptor deformed;
};

auto build_base(BaseSpec const& spec) -> MetricDescriptor;
auto build_wind(WindSpec const& spec, int dim) -> WindField;
auto build_scenario(ScenarioConfig const& config) -> Scenario;

/// Flag curvature of the base metric when it is known in closed form (untilted conformal factors).
auto reference_curvature(BaseSpec const& spec) -> std::optional<double>;

/// Domain points used for admissibility: a boundary ring plus seeded interior samples.
auto domain_samples(ScenarioConfig const& config) -> std::vector<Vector>;

enum class Expect
{
    below,  ///< pass when value < tolerance
    above,  ///< pass when value > tolerance (detection controls)
};

struct Measurement
{
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    Expect expect = Expect::below;
    bool pass = false;
};

auto measure(std::string name, double value, double tolerance, Expect expect = Expect::below) -> Measurement;

enum class CheckStatus
{
    passed,
    failed,
    error,    ///< aborted by an exception
    skipped,  ///< not run because the gate or an earlier check aborted
};

auto to_string(CheckStatus status) -> std::string;

struct CheckRecord
{
    std::string check;
    std::string property;  ///< statement being verified
    std::uint64_t seed = 0;
    std::vector<Measurement> measurements;
    std::vector<std::pair<std::string, double>> details;  ///< informational values without a tolerance
    CheckStatus status = CheckStatus::skipped;
    std::string diagnostic;
    double runtime_seconds = 0.0;

    auto pass() const -> bool { return status == CheckStatus::passed; }
    auto find(std::string_view measurement) const -> Measurement const*;
};

struct GateRecord
{
    double max_strength = 0.0;
    int admissibility_samples = 0;
    bool admissible = false;
    double killing_residual = 0.0;
    double killing_tolerance = 0.0;
    bool killing = false;

    auto pass() const -> bool { return admissible && killing; }
};

struct VerificationReport
{
    std::string scenario;
    std::string description;
    std::string source;
    std::uint64_t seed = 0;
    double step = 0.0;
    double chart_radius = 0.0;
    GateRecord gate;
    std::vector<CheckRecord> checks;
    bool aborted = false;
    std::string abort_reason;
    double runtime_seconds = 0.0;

    auto pass() const -> bool;
    auto find(std::string_view check) const -> CheckRecord const*;
};

/// Seed of the named check, derived from the scenario seed.
auto check_seed(ScenarioConfig const& config, std::string_view check) -> std::uint64_t;

auto run_gate(Scenario const& scenario) -> GateRecord;

auto verify_geodesic_correspondence(Scenario const& scenario) -> CheckRecord;
auto verify_jacobi_correspondence(Scenario const& scenario) -> CheckRecord;
auto verify_flag_equality(Scenario const& scenario) -> CheckRecord;
auto verify_local_symmetry(Scenario const& scenario) -> CheckRecord;

/// Gate, then the enabled checks in declared order.
auto run(ScenarioConfig const& config, std::string source = {}) -> VerificationReport;
auto run(std::filesystem::path const& scenario_file) -> VerificationReport;

enum class Format
{
    json,
    csv,
};

auto parse_format(std::string_view name) -> Format;

/// JSON with stable key order; identical inputs give identical text apart from runtime fields.
auto report_json(VerificationReport const& report) -> std::string;
void write_report(std::ostream& out, VerificationReport const& report, Format format);
void emit(VerificationReport const& report, std::filesystem::path const& path, Format format);

/// Column-oriented numeric table for the data subcommands.
struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_table(std::ostream& out, Table const& table, Format format);

/// Base geodesic from an F-unit start, its image under the flow, the deformed geodesic from (x, xi + v) and the
/// distance between the last two.
auto geodesic_table(Scenario const& scenario, PointedVector const& start, double duration) -> Table;

/// Random flags with base and deformed flag curvature.
auto curvature_table(Scenario const& scenario, int samples) -> Table;

/// Unit vectors of F and F~ at x along `directions` rays of the (x_1, x_2) plane: the indicatrices.
auto indicatrix_table(Scenario const& scenario, Vector const& x, int directions) -> Table;

/// Seeded generator used by all checks.
using Rng = std::mt19937_64;

/// Random point of the ball of the given radius in the metric's admissible region with a random F-unit vector.
auto random_unit_start(MetricDescriptor const& metric, Rng& rng, double radius) -> PointedVector;

}  // namespace zermelo::verify
