#include "zermelo/errors.hpp"
#include "zermelo/flow.hpp"
#include "zermelo/geodesic.hpp"
#include "zermelo/models.hpp"
#include "zermelo/spray.hpp"
#include "zermelo/transport.hpp"
#include "zermelo/verify.hpp"
#include "zermelo/zermelo.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace zermelo::verify {
namespace {

constexpr int kMaxResamples = 1000;
/// Flags whose deformed flagpole and transverse edge enclose a smaller g~-sine are redrawn.
constexpr double kFlagSineFloor = 1e-3;

auto steps_for(double duration, double step, bool even = false) -> int
{
    auto steps = std::max(20, static_cast<int>(std::lround(duration / step)));
    if (even) steps += steps % 2;
    return steps;
}

auto geodesic_options(ScenarioConfig const& c) -> GeodesicOptions { return {true, 1e-10, c.chart_radius}; }

auto flow_options(ScenarioConfig const& c) -> FlowOptions { return {FlowMode::automatic, c.step, c.chart_radius}; }

auto property_of(std::string_view check) -> std::string
{
    if (check == kGeodesicCheck)
        return "t -> flow_t(gamma(t)) is an arc-length geodesic of the deformed metric for every arc-length "
               "geodesic gamma of the base metric";
    if (check == kJacobiCheck)
        return "pushforwards flow_t*(J(t)) of base Jacobi fields orthogonal to gamma' are Jacobi fields of the "
               "deformed metric, orthogonal to the mapped curve, with squared-length ratio F~/(1 + v(F))";
    if (check == kFlagCheck)
        return "the deformed flag curvature at flagpole xi + v equals the base flag curvature at flagpole xi "
               "for the same transverse edge";
    if (check == kSymmetryCheck)
        return "the deformed metric is locally symmetric (D R = 0 along geodesics) when the base metric is";
    return {};
}

auto begin(Scenario const& s, std::string_view check) -> CheckRecord
{
    CheckRecord rec;
    rec.check = std::string(check);
    rec.property = property_of(check);
    rec.seed = check_seed(s.config, check);
    return rec;
}

void finish(CheckRecord& rec)
{
    bool ok = !rec.measurements.empty();
    for (auto const& m : rec.measurements) ok = ok && m.pass;
    rec.status = ok ? CheckStatus::passed : CheckStatus::failed;
}

auto random_direction(Rng& rng, int dim) -> Vector
{
    std::normal_distribution<double> normal;
    Vector d(dim);
    do {
        for (int i = 0; i < dim; ++i) d[i] = normal(rng);
    } while (d.norm() < 1e-3);
    return d.normalized();
}

/// Base geodesic from a random unit start and the deformed geodesic from (x, xi + v), both inside the chart.
struct GeodesicPair
{
    GeodesicTrajectory base;
    GeodesicTrajectory deformed;
};

auto contained_pair(Scenario const& s, Rng& rng, double radius, double duration, int steps, int& resampled)
    -> GeodesicPair
{
    auto const options = geodesic_options(s.config);
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        auto const pv = random_unit_start(s.base, rng, radius);
        auto base = integrate_geodesic(s.base, pv, duration, steps, options);
        if (!base.complete) {
            ++resampled;
            continue;
        }
        PointedVector const lifted{pv.x, pv.xi + s.wind(pv.x)};
        auto deformed = integrate_geodesic(s.deformed, lifted, duration, steps, options);
        if (!deformed.complete) {
            ++resampled;
            continue;
        }
        return {std::move(base), std::move(deformed)};
    }
    throw std::runtime_error("no start with both geodesics inside the chart after " + std::to_string(kMaxResamples) +
                             " attempts");
}

/// Part of u that is g-orthogonal to xi, scaled to g-length one.
auto orthogonal_unit(FundamentalTensor const& g, Vector const& xi, Vector u) -> Vector
{
    u -= (g.inner(xi, u) / g.norm_squared(xi)) * xi;
    return u / std::sqrt(g.norm_squared(u));
}

}  // namespace

auto measure(std::string name, double value, double tolerance, Expect expect) -> Measurement
{
    bool const pass = expect == Expect::below ? value < tolerance : value > tolerance;
    return {std::move(name), value, tolerance, expect, pass && std::isfinite(value)};
}

auto to_string(CheckStatus status) -> std::string
{
    switch (status) {
    case CheckStatus::passed: return "passed";
    case CheckStatus::failed: return "failed";
    case CheckStatus::error: return "error";
    case CheckStatus::skipped: return "skipped";
    }
    return "unknown";
}

auto CheckRecord::find(std::string_view measurement) const -> Measurement const*
{
    for (auto const& m : measurements)
        if (m.name == measurement) return &m;
    return nullptr;
}

auto VerificationReport::pass() const -> bool
{
    if (aborted || !gate.pass()) return false;
    for (auto const& c : checks)
        if (!c.pass()) return false;
    return true;
}

auto VerificationReport::find(std::string_view check) const -> CheckRecord const*
{
    for (auto const& c : checks)
        if (c.check == check) return &c;
    return nullptr;
}

auto check_seed(ScenarioConfig const& config, std::string_view check) -> std::uint64_t
{
    // FNV-1a of the check name mixed into the scenario seed
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : check) h = (h ^ ch) * 1099511628211ULL;
    return config.seed ^ h;
}

auto random_unit_start(MetricDescriptor const& metric, Rng& rng, double radius) -> PointedVector
{
    std::uniform_real_distribution<double> u(-radius, radius);
    auto const n = metric.dim();
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Vector x(n);
        for (int i = 0; i < n; ++i) x[i] = u(rng);
        if (x.norm() > radius || !metric.admissible(x)) continue;
        Vector xi = random_direction(rng, n);
        return {x, xi / metric.value(x, xi)};
    }
    throw std::runtime_error("random_unit_start: no admissible point in the sampling ball");
}

auto run_gate(Scenario const& s) -> GateRecord
{
    GateRecord gate;
    auto const samples = domain_samples(s.config);
    auto const adm = check_admissible(s.base, s.wind, samples);
    gate.max_strength = adm.max_strength;
    gate.admissibility_samples = static_cast<int>(samples.size());
    gate.admissible = adm.pass;

    Rng rng(check_seed(s.config, "gate"));
    std::vector<PointedVector> pvs;
    for (int i = 0; i < s.config.killing_samples; ++i) pvs.push_back(random_unit_start(s.base, rng, s.config.domain_radius));
    gate.killing_tolerance = s.config.killing_tolerance;
    gate.killing_residual = killing_residual(s.base, s.wind, pvs, 1e-5, flow_options(s.config));
    gate.killing = gate.killing_residual < gate.killing_tolerance;
    return gate;
}

auto verify_geodesic_correspondence(Scenario const& s) -> CheckRecord
{
    auto rec = begin(s, kGeodesicCheck);
    auto const& cfg = s.config.geodesic;
    Rng rng(rec.seed);
    auto const steps = steps_for(cfg.duration, s.config.step);
    FlowOptions const flow_opts = flow_options(s.config);
    double distance = 0.0;
    double speed = 0.0;
    int resampled = 0;
    for (int i = 0; i < cfg.starts; ++i) {
        auto const pair = contained_pair(s, rng, cfg.start_radius, cfg.duration, steps, resampled);
        for (std::size_t k = 0; k < pair.base.size(); ++k) {
            auto const& b = pair.base.samples[k];
            FlowMap const psi(s.wind, b.t, flow_opts);
            Vector const y = psi(b.x);
            Vector const w = psi.pushforward(b.x, b.xi) + s.wind(y);
            distance = std::max(distance, (y - pair.deformed.samples[k].x).norm());
            speed = std::max(speed, std::abs(s.deformed.value(y, w) - 1.0));
        }
    }
    rec.measurements.push_back(measure("sup_distance", distance, cfg.tolerance));
    rec.measurements.push_back(measure("speed_defect", speed, cfg.speed_tolerance));
    rec.details = {{"starts", cfg.starts}, {"resampled_starts", resampled}, {"duration", cfg.duration},
                   {"steps", steps}};
    finish(rec);
    return rec;
}

auto verify_jacobi_correspondence(Scenario const& s) -> CheckRecord
{
    auto rec = begin(s, kJacobiCheck);
    auto const& cfg = s.config.jacobi;
    Rng rng(rec.seed);
    std::uniform_real_distribution<double> slope_scale(0.2, 1.5);
    auto const steps = steps_for(cfg.duration, s.config.step, true);
    FlowOptions const flow_opts = flow_options(s.config);
    auto const n = s.base.dim();
    double residual = 0.0;
    double orthogonality = 0.0;
    double ratio = 0.0;
    int resampled = 0;
    for (int i = 0; i < cfg.geodesics; ++i) {
        auto const pair = contained_pair(s, rng, cfg.start_radius, cfg.duration, steps, resampled);
        auto const base_track = track_along(pair.base, true);
        auto const deformed_track = track_along(pair.deformed, true);

        // data on the Jacobi grid (every second sample)
        std::vector<FlowMap> maps;
        std::vector<FundamentalTensor> g_tilde;
        std::vector<Vector> velocity_tilde;
        std::vector<double> expected;
        auto const noether = noether_integral(s.base, pair.base, s.wind);
        for (std::size_t k = 0; k < pair.base.size(); k += 2) {
            auto const& b = pair.base.samples[k];
            maps.emplace_back(s.wind, b.t, flow_opts);
            Vector const y = maps.back()(b.x);
            Vector const w = maps.back().pushforward(b.x, b.xi) + s.wind(y);
            g_tilde.push_back(fundamental_tensor(s.deformed, {y, w}));
            velocity_tilde.push_back(w);
            expected.push_back(s.deformed.value(y, w) / (1.0 + noether[k]));
        }

        for (int f = 0; f < cfg.fields_per_geodesic; ++f) {
            auto const& g0 = base_track.tensor[0];
            auto const& xi0 = pair.base.samples[0].xi;
            Vector const J0 = orthogonal_unit(g0, xi0, random_direction(rng, n));
            Vector const DJ0 = slope_scale(rng) * orthogonal_unit(g0, xi0, random_direction(rng, n));
            auto const jacobi = integrate_jacobi(base_track, J0, DJ0);

            std::vector<Vector> pushed;
            double max_length = 0.0;
            for (std::size_t k = 0; k < jacobi.samples.size(); ++k) {
                pushed.push_back(maps[k].pushforward(pair.base.samples[2 * k].x, jacobi.samples[k].J));
                max_length = std::max(max_length, base_track.tensor[2 * k].norm_squared(jacobi.samples[k].J));
            }
            residual = std::max(residual, jacobi_equation_residual(deformed_track, pushed, 2));
            for (std::size_t k = 0; k < pushed.size(); ++k) {
                orthogonality = std::max(orthogonality, std::abs(g_tilde[k].inner(velocity_tilde[k], pushed[k])));
                auto const length = base_track.tensor[2 * k].norm_squared(jacobi.samples[k].J);
                if (length < 1e-6 * max_length) continue;  // near a zero of J the ratio is 0/0
                auto const r = g_tilde[k].norm_squared(pushed[k]) / length;
                ratio = std::max(ratio, std::abs(r / expected[k] - 1.0));
            }
        }
    }
    rec.measurements.push_back(measure("jacobi_residual", residual, cfg.residual_tolerance));
    rec.measurements.push_back(measure("orthogonality_defect", orthogonality, cfg.orthogonality_tolerance));
    rec.measurements.push_back(measure("length_ratio_defect", ratio, cfg.ratio_tolerance));
    rec.details = {{"geodesics", cfg.geodesics}, {"fields", cfg.geodesics * cfg.fields_per_geodesic},
                   {"resampled_starts", resampled}, {"duration", cfg.duration}, {"steps", steps}};
    finish(rec);
    return rec;
}

auto verify_flag_equality(Scenario const& s) -> CheckRecord
{
    auto rec = begin(s, kFlagCheck);
    auto const& cfg = s.config.flag;
    Rng rng(rec.seed);
    auto const reference = reference_curvature(s.config.base);
    double difference = 0.0;
    double deviation = 0.0;
    double base_deviation = 0.0;
    int resampled = 0;
    for (int i = 0; i < cfg.flags; ++i) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxResamples) throw std::runtime_error("flag_equality: could not draw a valid flag");
            auto const pv = random_unit_start(s.base, rng, cfg.sample_radius);
            Vector const eta = random_direction(rng, s.base.dim());
            PointedVector const lifted{pv.x, pv.xi + s.wind(pv.x)};
            auto const g_tilde = fundamental_tensor(s.deformed, lifted);
            auto const gxx = g_tilde.norm_squared(lifted.xi);
            auto const gee = g_tilde.norm_squared(eta);
            auto const gxe = g_tilde.inner(lifted.xi, eta);
            auto const g = fundamental_tensor(s.base, pv);
            auto const base_cos = g.inner(pv.xi, eta) / std::sqrt(g.norm_squared(pv.xi) * g.norm_squared(eta));
            if (1.0 - gxe * gxe / (gxx * gee) < kFlagSineFloor * kFlagSineFloor ||
                1.0 - base_cos * base_cos < kFlagSineFloor * kFlagSineFloor) {
                ++resampled;
                continue;
            }
            auto const K = flag_curvature(g, riemann_operator(s.base, pv), pv.xi, eta);
            auto const K_tilde = flag_curvature(g_tilde, riemann_operator(s.deformed, lifted), lifted.xi, eta);
            difference = std::max(difference, std::abs(K - K_tilde));
            if (reference) {
                deviation = std::max(deviation, std::abs(K_tilde - *reference));
                base_deviation = std::max(base_deviation, std::abs(K - *reference));
            }
            break;
        }
    }
    rec.measurements.push_back(measure("max_difference", difference, cfg.tolerance));
    if (reference) {
        rec.measurements.push_back(measure("deformed_vs_reference", deviation, cfg.reference_tolerance));
        rec.measurements.push_back(measure("base_vs_reference", base_deviation, cfg.reference_tolerance));
        rec.details.emplace_back("reference_curvature", *reference);
    }
    rec.details.emplace_back("flags", cfg.flags);
    rec.details.emplace_back("resampled_flags", resampled);
    finish(rec);
    return rec;
}

auto verify_local_symmetry(Scenario const& s) -> CheckRecord
{
    auto rec = begin(s, kSymmetryCheck);
    auto const& cfg = s.config.symmetry;
    Rng rng(rec.seed);
    LocalSymmetryOptions options;
    options.steps_per_unit_time = static_cast<int>(std::lround(1.0 / s.config.step));
    options.geodesic = geodesic_options(s.config);
    int resampled = 0;

    auto worst_over = [&](MetricDescriptor const& metric, int starts) {
        LocalSymmetryReport worst;
        for (int i = 0; i < starts; ++i) {
            for (int attempt = 0;; ++attempt) {
                if (attempt == kMaxResamples) throw std::runtime_error("local_symmetry: no contained geodesic");
                auto const pv = random_unit_start(metric, rng, cfg.start_radius);
                auto const r = local_symmetry_residual(metric, pv, cfg.duration, options);
                if (!r.complete) {
                    ++resampled;
                    continue;
                }
                worst.residual = std::max(worst.residual, r.residual);
                worst.jacobi_defect = std::max(worst.jacobi_defect, r.jacobi_defect);
                break;
            }
        }
        return worst;
    };

    auto const base = worst_over(s.base, cfg.starts);
    rec.measurements.push_back(measure("base_residual", base.residual, cfg.base_tolerance));
    if (!rec.measurements.back().pass) {
        rec.diagnostic = "base metric is not locally symmetric; deformed metric not tested";
        finish(rec);
        return rec;
    }
    auto const deformed = worst_over(s.deformed, cfg.starts);
    rec.measurements.push_back(measure("deformed_residual", deformed.residual, cfg.tolerance));
    rec.measurements.push_back(measure("deformed_jacobi_defect", deformed.jacobi_defect, cfg.tolerance));
    if (cfg.contrast) {
        auto const control = perturbed_sphere_metric(s.base.dim(), cfg.contrast_epsilon);
        auto const contrast = worst_over(control, std::min(cfg.starts, 3));
        rec.measurements.push_back(measure("contrast_residual", contrast.residual, cfg.contrast_threshold, Expect::above));
        rec.details.emplace_back("contrast_epsilon", cfg.contrast_epsilon);
    }
    rec.details.emplace_back("starts", cfg.starts);
    rec.details.emplace_back("resampled_starts", resampled);
    rec.details.emplace_back("duration", cfg.duration);
    finish(rec);
    return rec;
}

auto run(ScenarioConfig const& config, std::string source) -> VerificationReport
{
    using clock = std::chrono::steady_clock;
    auto const seconds = [](clock::time_point since) {
        return std::chrono::duration<double>(clock::now() - since).count();
    };
    auto const started = clock::now();
    VerificationReport report;
    report.scenario = config.name;
    report.description = config.description;
    report.source = std::move(source);
    report.seed = config.seed;
    report.step = config.step;
    report.chart_radius = config.chart_radius;

    auto const scenario = build_scenario(config);
    std::map<std::string, std::function<CheckRecord(Scenario const&)>, std::less<>> const checks{
        {std::string(kGeodesicCheck), verify_geodesic_correspondence},
        {std::string(kJacobiCheck), verify_jacobi_correspondence},
        {std::string(kFlagCheck), verify_flag_equality},
        {std::string(kSymmetryCheck), verify_local_symmetry},
    };

    try {
        report.gate = run_gate(scenario);
    } catch (std::exception const& e) {
        report.aborted = true;
        report.abort_reason = std::string("gate evaluation failed: ") + e.what();
    }
    if (!report.aborted && !report.gate.pass()) {
        report.aborted = true;
        report.abort_reason = !report.gate.admissible ? "gate failed: admissibility violated"
                                                      : "gate failed: wind is not Killing for the base metric";
    }

    for (auto const& name : config.checks) {
        CheckRecord rec;
        rec.check = name;
        rec.property = property_of(name);
        rec.seed = check_seed(config, name);
        if (report.aborted) {
            rec.status = CheckStatus::skipped;
            rec.diagnostic = report.abort_reason;
            report.checks.push_back(std::move(rec));
            continue;
        }
        auto const t0 = clock::now();
        try {
            rec = checks.at(name)(scenario);
        } catch (std::exception const& e) {
            rec.property = property_of(name);
            rec.status = CheckStatus::error;
            rec.diagnostic = e.what();
            report.aborted = true;
            report.abort_reason = name + " aborted: " + e.what();
        }
        rec.runtime_seconds = seconds(t0);
        report.checks.push_back(std::move(rec));
    }
    report.runtime_seconds = seconds(started);
    return report;
}

auto run(std::filesystem::path const& scenario_file) -> VerificationReport
{
    return run(load_scenario(scenario_file), scenario_file.string());
}

}  // namespace zermelo::verify
