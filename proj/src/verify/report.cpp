#include "zermelo/errors.hpp"
#include "zermelo/flow.hpp"
#include "zermelo/geodesic.hpp"
#include "zermelo/spray.hpp"
#include "zermelo/verify.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>

namespace zermelo::verify {
namespace {

using Json = nlohmann::ordered_json;

auto to_string(Expect e) -> std::string { return e == Expect::below ? "below" : "above"; }

/// JSON has no infinities or NaN; keep them readable instead of emitting null.
auto number(double v) -> Json
{
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

auto check_json(CheckRecord const& c) -> Json
{
    Json j;
    j["check"] = c.check;
    j["property"] = c.property;
    j["seed"] = c.seed;
    j["status"] = to_string(c.status);
    j["pass"] = c.pass();
    auto measurements = Json::array();
    for (auto const& m : c.measurements) {
        Json mj;
        mj["name"] = m.name;
        mj["value"] = number(m.value);
        mj["tolerance"] = m.tolerance;
        mj["expect"] = to_string(m.expect);
        if (m.expect == Expect::above) mj["expected_fail"] = true;
        mj["pass"] = m.pass;
        measurements.push_back(mj);
    }
    j["measurements"] = measurements;
    Json details = Json::object();
    for (auto const& [key, value] : c.details) details[key] = number(value);
    j["details"] = details;
    if (!c.diagnostic.empty()) j["diagnostic"] = c.diagnostic;
    j["runtime_seconds"] = c.runtime_seconds;
    return j;
}

void csv_row(std::ostream& out, std::vector<double> const& row)
{
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
}

auto axis_names(std::string const& prefix, int n) -> std::vector<std::string>
{
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i) out.push_back(prefix + "_" + std::to_string(i));
    return out;
}

void append(std::vector<double>& row, Vector const& v) { row.insert(row.end(), v.data(), v.data() + v.size()); }

}  // namespace

auto parse_format(std::string_view name) -> Format
{
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    throw std::invalid_argument("unknown format \"" + std::string(name) + "\" (expected json or csv)");
}

auto report_json(VerificationReport const& r) -> std::string
{
    Json j;
    j["scenario"] = r.scenario;
    j["description"] = r.description;
    j["source"] = r.source;
    j["environment"] = {{"seed", r.seed}, {"step", r.step}, {"chart_radius", r.chart_radius}};
    j["gate"] = {{"admissibility",
                  {{"max_strength", number(r.gate.max_strength)},
                   {"samples", r.gate.admissibility_samples},
                   {"pass", r.gate.admissible}}},
                 {"killing",
                  {{"residual", number(r.gate.killing_residual)},
                   {"tolerance", r.gate.killing_tolerance},
                   {"pass", r.gate.killing}}},
                 {"pass", r.gate.pass()}};
    auto checks = Json::array();
    for (auto const& c : r.checks) checks.push_back(check_json(c));
    j["checks"] = checks;
    j["aborted"] = r.aborted;
    if (r.aborted) j["abort_reason"] = r.abort_reason;
    j["pass"] = r.pass();
    j["runtime_seconds"] = r.runtime_seconds;
    return j.dump(2);
}

void write_report(std::ostream& out, VerificationReport const& r, Format format)
{
    if (format == Format::json) {
        out << report_json(r) << '\n';
        return;
    }
    out << std::setprecision(17);
    out << "scenario,check,measurement,value,tolerance,expect,pass\n";
    out << r.scenario << ",gate,max_strength," << r.gate.max_strength << ",1,below," << r.gate.admissible << '\n';
    out << r.scenario << ",gate,killing_residual," << r.gate.killing_residual << ',' << r.gate.killing_tolerance
        << ",below," << r.gate.killing << '\n';
    for (auto const& c : r.checks) {
        if (c.measurements.empty()) out << r.scenario << ',' << c.check << ',' << to_string(c.status) << ",,,,0\n";
        for (auto const& m : c.measurements)
            out << r.scenario << ',' << c.check << ',' << m.name << ',' << m.value << ',' << m.tolerance << ','
                << to_string(m.expect) << ',' << m.pass << '\n';
    }
    out << r.scenario << ",overall,pass,,,," << r.pass() << '\n';
}

void emit(VerificationReport const& report, std::filesystem::path const& path, Format format)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_report(out, report, format);
}

void write_table(std::ostream& out, Table const& table, Format format)
{
    if (format == Format::csv) {
        for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
        out << '\n' << std::setprecision(17);
        for (auto const& row : table.rows) csv_row(out, row);
        return;
    }
    Json j;
    j["columns"] = table.columns;
    auto rows = Json::array();
    for (auto const& row : table.rows) {
        auto r = Json::array();
        for (auto v : row) r.push_back(number(v));
        rows.push_back(r);
    }
    j["rows"] = rows;
    out << j.dump() << '\n';
}

auto geodesic_table(Scenario const& s, PointedVector const& start, double duration) -> Table
{
    auto const n = s.base.dim();
    auto const steps = std::max(20, static_cast<int>(std::lround(duration / s.config.step)));
    GeodesicOptions const options{true, 1e-10, s.config.chart_radius};
    auto const base = integrate_geodesic(s.base, start, duration, steps, options);
    auto const deformed =
        integrate_geodesic(s.deformed, {start.x, start.xi + s.wind(start.x)}, duration, steps, options);

    Table table;
    table.columns = {"t"};
    for (auto const& prefix : {"x", "xi", "mapped", "deformed"})
        for (auto const& name : axis_names(prefix, n)) table.columns.push_back(name);
    table.columns.push_back("distance");
    table.columns.push_back("F_tilde");
    FlowOptions const flow_opts{FlowMode::automatic, s.config.step, s.config.chart_radius};
    auto const count = std::min(base.size(), deformed.size());
    for (std::size_t k = 0; k < count; ++k) {
        auto const& b = base.samples[k];
        FlowMap const psi(s.wind, b.t, flow_opts);
        Vector const y = psi(b.x);
        Vector const w = psi.pushforward(b.x, b.xi) + s.wind(y);
        std::vector<double> row{b.t};
        append(row, b.x);
        append(row, b.xi);
        append(row, y);
        append(row, deformed.samples[k].x);
        row.push_back((y - deformed.samples[k].x).norm());
        row.push_back(s.deformed.value(y, w));
        table.rows.push_back(std::move(row));
    }
    return table;
}

auto curvature_table(Scenario const& s, int samples) -> Table
{
    auto const n = s.base.dim();
    Table table;
    for (auto const& prefix : {"x", "xi", "eta"})
        for (auto const& name : axis_names(prefix, n)) table.columns.push_back(name);
    table.columns.push_back("K");
    table.columns.push_back("K_tilde");
    Rng rng(check_seed(s.config, "curvature"));
    std::normal_distribution<double> normal;
    while (static_cast<int>(table.rows.size()) < samples) {
        auto const pv = random_unit_start(s.base, rng, s.config.flag.sample_radius);
        Vector eta(n);
        for (int i = 0; i < n; ++i) eta[i] = normal(rng);
        try {
            auto const K = flag_curvature(s.base, {pv, eta});
            auto const K_tilde = flag_curvature(s.deformed, {{pv.x, pv.xi + s.wind(pv.x)}, eta});
            std::vector<double> row;
            append(row, pv.x);
            append(row, pv.xi);
            append(row, eta);
            row.push_back(K);
            row.push_back(K_tilde);
            table.rows.push_back(std::move(row));
        } catch (DegenerateFlagError const&) {
        }
    }
    return table;
}

auto indicatrix_table(Scenario const& s, Vector const& x, int directions) -> Table
{
    auto const n = s.base.dim();
    if (x.size() != n) throw std::invalid_argument("indicatrix: point has the wrong dimension");
    if (!s.deformed.admissible(x)) throw std::invalid_argument("indicatrix: point is outside the admissible region");
    Table table;
    table.columns = {"theta"};
    for (auto const& prefix : {"base", "deformed", "translated"})
        for (auto const& name : axis_names(prefix, n)) table.columns.push_back(name);
    table.columns.push_back("F_tilde_of_translated");
    Vector const v = s.wind(x);
    for (int k = 0; k < directions; ++k) {
        auto const theta = 2.0 * std::numbers::pi * k / directions;
        Vector u = Vector::Zero(n);
        u[0] = std::cos(theta);
        u[1] = std::sin(theta);
        Vector const base = u / s.base.value(x, u);
        Vector const deformed = u / s.deformed.value(x, u);
        Vector const translated = base + v;
        std::vector<double> row{theta};
        append(row, base);
        append(row, deformed);
        append(row, translated);
        row.push_back(s.deformed.value(x, translated));
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace zermelo::verify
