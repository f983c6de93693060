#include "zermelo/errors.hpp"
#include "zermelo/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace zermelo;
using namespace zermelo::verify;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

auto output_dir(std::string const& flag) -> fs::path
{
    if (!flag.empty()) return flag;
    if (char const* env = std::getenv("ZERMELO_OUTPUT_DIR"); env && *env) return env;
    return fs::current_path();
}

auto extension(Format f) -> std::string { return f == Format::json ? ".json" : ".csv"; }

auto to_vector(std::vector<double> const& values) -> Vector
{
    return Eigen::Map<Vector const>(values.data(), static_cast<Eigen::Index>(values.size()));
}

struct Common
{
    std::string config;
    std::string format = "json";
    std::string output;
    bool to_stdout = false;
};

void add_common(CLI::App* app, Common& c, std::string const& default_format)
{
    c.format = default_format;
    app->add_option("config", c.config, "scenario file (TOML)")->required()->check(CLI::ExistingFile);
    app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--output-dir", c.output, "output directory (default: $ZERMELO_OUTPUT_DIR or the working directory)");
    app->add_flag("--stdout", c.to_stdout, "write to standard output instead of a file");
}

void deliver(Common const& c, std::string const& stem, std::function<void(std::ostream&, Format)> const& write)
{
    auto const format = parse_format(c.format);
    if (c.to_stdout) {
        write(std::cout, format);
        return;
    }
    auto const dir = output_dir(c.output);
    fs::create_directories(dir);
    auto const path = dir / (stem + extension(format));
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write(out, format);
    std::cerr << "wrote " << path.string() << '\n';
}

void print_summary(VerificationReport const& r)
{
    std::cerr << "scenario " << r.scenario << ": gate " << (r.gate.pass() ? "passed" : "FAILED")
              << " (max F(x,-v) = " << r.gate.max_strength << ", killing residual = " << r.gate.killing_residual
              << ")\n";
    for (auto const& c : r.checks) {
        std::cerr << "  " << c.check << ": " << to_string(c.status);
        for (auto const& m : c.measurements)
            std::cerr << "  " << m.name << "=" << m.value << (m.expect == Expect::below ? "<" : ">") << m.tolerance
                      << (m.pass ? "" : "!");
        if (!c.diagnostic.empty()) std::cerr << "  [" << c.diagnostic << "]";
        std::cerr << "  (" << c.runtime_seconds << " s)\n";
    }
    std::cerr << "overall: " << (r.pass() ? "PASS" : "FAIL") << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Zermelo deformation verification tool"};
    app.require_subcommand(1);

    Common verify_opts;
    auto* verify_cmd = app.add_subcommand("verify", "run the gate and the enabled checks of a scenario");
    add_common(verify_cmd, verify_opts, "json");

    Common geo_opts;
    std::vector<double> start;
    double duration = 1.0;
    bool normalize = false;
    auto* geo_cmd = app.add_subcommand("geodesic", "base geodesic, its flow image and the deformed geodesic");
    add_common(geo_cmd, geo_opts, "csv");
    geo_cmd->add_option("--start", start, "x_1..x_n,xi_1..xi_n")->required()->delimiter(',');
    geo_cmd->add_option("--T", duration, "duration")->check(CLI::PositiveNumber);
    geo_cmd->add_flag("--normalize", normalize, "rescale xi to F = 1");

    Common curv_opts;
    int samples = 100;
    auto* curv_cmd = app.add_subcommand("curvature", "base and deformed flag curvature over random flags");
    add_common(curv_cmd, curv_opts, "csv");
    curv_cmd->add_option("--samples", samples, "number of flags")->check(CLI::PositiveNumber);

    Common deform_opts;
    std::vector<double> point;
    int dirs = 360;
    auto* deform_cmd = app.add_subcommand("deform", "indicatrices of F and of its deformation at a point");
    add_common(deform_cmd, deform_opts, "csv");
    deform_cmd->add_option("--point", point, "x_1..x_n")->required()->delimiter(',');
    deform_cmd->add_option("--dirs", dirs, "number of directions")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify_cmd) {
            auto const report = run(fs::path(verify_opts.config));
            print_summary(report);
            deliver(verify_opts, report.scenario + "_report",
                    [&](std::ostream& out, Format f) { write_report(out, report, f); });
            return report.pass() ? 0 : kExitFail;
        }
        if (*geo_cmd) {
            auto const scenario = build_scenario(load_scenario(geo_opts.config));
            auto const n = scenario.base.dim();
            if (static_cast<int>(start.size()) != 2 * n)
                throw std::invalid_argument("--start needs " + std::to_string(2 * n) + " numbers");
            PointedVector pv{to_vector(start).head(n), to_vector(start).tail(n)};
            if (normalize) pv.xi /= scenario.base.value(pv.x, pv.xi);
            auto const table = geodesic_table(scenario, pv, duration);
            deliver(geo_opts, scenario.config.name + "_geodesic",
                    [&](std::ostream& out, Format f) { write_table(out, table, f); });
            return 0;
        }
        if (*curv_cmd) {
            auto const scenario = build_scenario(load_scenario(curv_opts.config));
            auto const table = curvature_table(scenario, samples);
            deliver(curv_opts, scenario.config.name + "_curvature",
                    [&](std::ostream& out, Format f) { write_table(out, table, f); });
            return 0;
        }
        if (*deform_cmd) {
            auto const scenario = build_scenario(load_scenario(deform_opts.config));
            auto const table = indicatrix_table(scenario, to_vector(point), dirs);
            deliver(deform_opts, scenario.config.name + "_indicatrix",
                    [&](std::ostream& out, Format f) { write_table(out, table, f); });
            return 0;
        }
    } catch (ScenarioError const& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    } catch (std::invalid_argument const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}
