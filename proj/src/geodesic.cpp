#include "zermelo/geodesic.hpp"

#include "zermelo/errors.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace zermelo {
namespace {

struct State
{
    Vector x;
    Vector v;
};

auto rhs(MetricDescriptor const& metric, State const& s) -> State
{
    return {s.v, -2.0 * spray_coefficients(metric, s.x, s.v)};
}

auto exit_reason(MetricDescriptor const& metric, Vector const& x, GeodesicOptions const& options)
    -> std::optional<std::string>
{
    if (!metric.admissible(x)) return "left the admissible region of " + metric.name();
    if (x.norm() > options.chart_radius) return "left the chart ball of radius " + std::to_string(options.chart_radius);
    return std::nullopt;
}

}  // namespace

auto integrate_geodesic(MetricDescriptor const& metric, PointedVector const& start, double duration, int steps,
                        GeodesicOptions const& options) -> GeodesicTrajectory
{
    if (steps <= 0) throw std::invalid_argument("integrate_geodesic: steps must be positive");
    auto const f0 = finsler_eval(metric, start);
    if (options.require_unit_speed && std::abs(f0 - 1.0) > options.unit_tolerance) {
        std::ostringstream msg;
        msg << "integrate_geodesic: start vector has F = " << std::setprecision(17) << f0
            << "; arc-length start required";
        throw std::invalid_argument(msg.str());
    }
    double const h = duration / steps;
    GeodesicTrajectory out{metric, h, {}, true, {}};
    out.samples.reserve(static_cast<std::size_t>(steps) + 1);
    State s{start.x, start.xi};
    out.samples.push_back({0.0, s.x, s.v});
    auto stop = [&](std::string reason, double t) {
        out.complete = false;
        std::ostringstream msg;
        msg << reason << " at t = " << t;
        out.diagnostic = msg.str();
    };
    auto leaves = [&](Vector const& x, double t) {
        auto why = exit_reason(metric, x, options);
        if (why) stop(*why, t);
        return why.has_value();
    };
    for (int k = 0; k < steps; ++k) {
        try {
            auto const k1 = rhs(metric, s);
            State const s2{s.x + 0.5 * h * k1.x, s.v + 0.5 * h * k1.v};
            if (leaves(s2.x, (k + 0.5) * h)) return out;
            auto const k2 = rhs(metric, s2);
            State const s3{s.x + 0.5 * h * k2.x, s.v + 0.5 * h * k2.v};
            if (leaves(s3.x, (k + 0.5) * h)) return out;
            auto const k3 = rhs(metric, s3);
            State const s4{s.x + h * k3.x, s.v + h * k3.v};
            if (leaves(s4.x, (k + 1) * h)) return out;
            auto const k4 = rhs(metric, s4);
            s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
            s.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        } catch (DomainError const& e) {
            stop(e.what(), k * h);
            return out;
        }
        if (leaves(s.x, (k + 1) * h)) return out;
        out.samples.push_back({(k + 1) * h, s.x, s.v});
    }
    return out;
}

auto make_trajectory(MetricDescriptor const& metric, double step, std::vector<TrajectorySample> samples)
    -> GeodesicTrajectory
{
    return {metric, step, std::move(samples), true, {}};
}

auto subsample(GeodesicTrajectory const& geodesic, int stride) -> GeodesicTrajectory
{
    if (stride < 1) throw std::invalid_argument("subsample: stride must be positive");
    GeodesicTrajectory out{geodesic.metric, geodesic.step * stride, {}, geodesic.complete, geodesic.diagnostic};
    for (std::size_t k = 0; k < geodesic.size(); k += static_cast<std::size_t>(stride))
        out.samples.push_back(geodesic.samples[k]);
    return out;
}

auto speed_drift(GeodesicTrajectory const& geodesic) -> double
{
    if (geodesic.samples.empty()) return 0.0;
    auto const f0 = geodesic.metric.value(geodesic.samples[0].x, geodesic.samples[0].xi);
    double worst = 0.0;
    for (auto const& s : geodesic.samples)
        worst = std::max(worst, std::abs(geodesic.metric.value(s.x, s.xi) - f0));
    return worst / f0;
}

void write_csv(std::ostream& out, GeodesicTrajectory const& geodesic)
{
    auto const n = geodesic.metric.dim();
    out << "t";
    for (int i = 1; i <= n; ++i) out << ",x_" << i;
    for (int i = 1; i <= n; ++i) out << ",xi_" << i;
    out << '\n';
    out << std::setprecision(17);
    for (auto const& s : geodesic.samples) {
        out << s.t;
        for (int i = 0; i < n; ++i) out << ',' << s.x[i];
        for (int i = 0; i < n; ++i) out << ',' << s.xi[i];
        out << '\n';
    }
}

}  // namespace zermelo
