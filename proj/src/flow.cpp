#include "zermelo/flow.hpp"

#include "zermelo/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zermelo {
namespace {

auto resolve(WindField const& wind, FlowMode requested) -> FlowMode
{
    if (requested == FlowMode::closed_form && !wind.closed_form())
        throw std::invalid_argument("flow: wind " + wind.name() + " has no closed-form flow");
    if (requested == FlowMode::automatic) return wind.closed_form() ? FlowMode::closed_form : FlowMode::integrated;
    return requested;
}

void check_chart(Vector const& x, double radius)
{
    if (x.norm() > radius) {
        std::ostringstream msg;
        msg << "flow: left the chart ball of radius " << radius;
        throw DomainError(msg.str());
    }
}

/// RK4 for x' = v(x), M' = Dv(x) M, optionally carrying M.
auto integrate(WindField const& wind, Vector x, double t, FlowOptions const& options, bool with_differential)
    -> std::pair<Vector, Matrix>
{
    if (!(options.step > 0.0)) throw std::invalid_argument("flow: step must be positive");
    auto const n = x.size();
    Matrix M = Matrix::Identity(n, n);
    auto const steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / options.step - 1e-9)));
    double const h = t / steps;
    for (int k = 0; k < steps; ++k) {
        auto stage = [&](Vector const& y, Matrix const& m) {
            check_chart(y, options.chart_radius);
            Vector const v = wind(y);
            if (!with_differential) return std::pair<Vector, Matrix>{v, Matrix()};
            return std::pair<Vector, Matrix>{v, wind.jacobian(y) * m};
        };
        auto const [a1, b1] = stage(x, M);
        auto const [a2, b2] = stage(x + 0.5 * h * a1, with_differential ? Matrix(M + 0.5 * h * b1) : M);
        auto const [a3, b3] = stage(x + 0.5 * h * a2, with_differential ? Matrix(M + 0.5 * h * b2) : M);
        auto const [a4, b4] = stage(x + h * a3, with_differential ? Matrix(M + h * b3) : M);
        x += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        if (with_differential) M += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    }
    check_chart(x, options.chart_radius);
    return {x, M};
}

}  // namespace

FlowMap::FlowMap(WindField wind, double t, FlowOptions options)
    : wind_(std::move(wind)), t_(t), options_(options), mode_(resolve(wind_, options.mode))
{
}

auto FlowMap::operator()(Vector const& x) const -> Vector
{
    if (x.size() != wind_.dim()) throw std::invalid_argument("flow: point dimension does not match the wind");
    if (mode_ == FlowMode::closed_form) return wind_.closed_form()->map(x, t_);
    return integrate(wind_, x, t_, options_, false).first;
}

auto FlowMap::differential(Vector const& x) const -> Matrix
{
    if (x.size() != wind_.dim()) throw std::invalid_argument("flow: point dimension does not match the wind");
    if (mode_ == FlowMode::closed_form) return wind_.closed_form()->differential(x, t_);
    return integrate(wind_, x, t_, options_, true).second;
}

auto flow(WindField const& wind, Vector const& x, double t, FlowOptions const& options) -> Vector
{
    return FlowMap(wind, t, options)(x);
}

auto pushforward(WindField const& wind, Vector const& x, double t, Vector const& xi, FlowOptions const& options)
    -> Vector
{
    return FlowMap(wind, t, options).pushforward(x, xi);
}

auto killing_residual(MetricDescriptor const& metric, WindField const& wind, std::span<PointedVector const> samples,
                      double dt, FlowOptions const& options) -> double
{
    if (!(dt > 0.0)) throw std::invalid_argument("killing_residual: dt must be positive");
    FlowMap const forward(wind, dt, options);
    FlowMap const backward(wind, -dt, options);
    double worst = 0.0;
    for (auto const& pv : samples) {
        auto const f0 = finsler_eval(metric, pv);
        auto const plus = metric.value(forward(pv.x), forward.pushforward(pv.x, pv.xi));
        auto const minus = metric.value(backward(pv.x), backward.pushforward(pv.x, pv.xi));
        worst = std::max(worst, std::abs(plus - minus) / (2.0 * dt * f0));
    }
    return worst;
}

auto noether_integral(MetricDescriptor const& metric, GeodesicTrajectory const& geodesic, WindField const& wind)
    -> std::vector<double>
{
    std::vector<double> out;
    out.reserve(geodesic.size());
    for (std::size_t k = 0; k < geodesic.size(); ++k) {
        auto const pv = geodesic.pointed(k);
        out.push_back(wind(pv.x).dot(fiber_gradient(metric, pv)));
    }
    return out;
}

auto noether_drift(std::span<double const> values) -> double
{
    double worst = 0.0;
    for (auto v : values) worst = std::max(worst, std::abs(v - values.front()));
    return worst;
}

}  // namespace zermelo
