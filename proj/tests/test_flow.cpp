#include "test_support.hpp"

#include "doctest.h"

#include "zermelo/errors.hpp"
#include "zermelo/flow.hpp"

#include <numbers>

using namespace zermelo;
using namespace zermelo::testing;

namespace {

auto vec(std::initializer_list<double> values) -> Vector
{
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (auto x : values) v[i++] = x;
    return v;
}

FlowOptions const kIntegrated{FlowMode::integrated, 1e-3};

}  // namespace

TEST_CASE("closed-form flows")
{
    auto const translation = constant_wind(vec({0.5, 0}));
    CHECK((flow(translation, vec({0, 0}), 2.0) - vec({1, 0})).norm() == 0.0);

    double const omega = 0.7;
    auto const rotation = planar_rotation_wind(2, omega);
    auto const quarter = std::numbers::pi / (2 * omega);
    CHECK((flow(rotation, vec({1, 0}), quarter) - vec({0, 1})).norm() < 1e-9);
    CHECK((pushforward(rotation, vec({1, 0}), quarter, vec({0.3, 2})) - vec({-2, 0.3})).norm() < 1e-9);
    CHECK((pushforward(translation, vec({3, -1}), 5.0, vec({0.3, 2})) - vec({0.3, 2})).norm() == 0.0);

    Sampler sampler(31);
    for (auto const& f : fixtures()) {
        CAPTURE(f.name);
        FlowMap const identity(f.wind, 0.0);
        CHECK(identity.mode() == FlowMode::closed_form);
        for (int trial = 0; trial < 20; ++trial) {
            auto const x = sampler.in_ball(f.wind.dim(), 1.0);
            CHECK((identity(x) - x).norm() == 0.0);
            CHECK(max_abs(identity.differential(x) - Matrix::Identity(x.size(), x.size())) == 0.0);
            auto const t = sampler.uniform(-3.0, 3.0);
            CHECK((flow(f.wind, flow(f.wind, x, t), -t) - x).norm() < 1e-9);
        }
    }
}

TEST_CASE("integrated flows agree with closed forms and obey the group law")
{
    Sampler sampler(32);
    for (auto const& f : fixtures()) {
        CAPTURE(f.name);
        for (int trial = 0; trial < 10; ++trial) {
            auto const x = sampler.in_ball(f.wind.dim(), 1.0);
            auto const xi = sampler.direction(f.wind.dim());
            auto const s = sampler.uniform(-1.0, 1.0);
            auto const t = sampler.uniform(-1.0, 1.0);
            CHECK((flow(f.wind, x, t, kIntegrated) - flow(f.wind, x, t)).norm() < 1e-9);
            CHECK((pushforward(f.wind, x, t, xi, kIntegrated) - pushforward(f.wind, x, t, xi)).norm() < 1e-9);
            auto const composed = flow(f.wind, flow(f.wind, x, t, kIntegrated), s, kIntegrated);
            CHECK((composed - flow(f.wind, x, s + t, kIntegrated)).norm() < 1e-9);
        }
    }
}

TEST_CASE("integrated pushforward matches finite differences of the flow")
{
    auto const wind = stretch_wind(2);
    CHECK(FlowMap(wind, 1.0).mode() == FlowMode::integrated);
    CHECK_THROWS_AS(FlowMap(wind, 1.0, {FlowMode::closed_form}), std::invalid_argument);

    std::vector<WindField> winds{wind, stereographic_rotation_wind(3, 0.8)};
    Sampler sampler(33);
    double const h = 1e-5;
    for (auto const& w : winds) {
        CAPTURE(w.name());
        for (int trial = 0; trial < 10; ++trial) {
            auto const n = w.dim();
            auto const x = sampler.in_ball(n, 1.0);
            auto const xi = sampler.direction(n);
            auto const t = sampler.uniform(-1.0, 1.0);
            Vector const fd = (flow(w, x + h * xi, t, kIntegrated) - flow(w, x - h * xi, t, kIntegrated)) / (2 * h);
            CHECK((pushforward(w, x, t, xi, kIntegrated) - fd).norm() < 1e-6);
        }
    }
    // the stretch flow is x1 -> x1 e^t
    CHECK(flow(wind, vec({2, 1}), 1.0)[0] == doctest::Approx(2 * std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("integrated flows stop at the chart boundary")
{
    FlowOptions options = kIntegrated;
    options.chart_radius = 3.0;
    CHECK_THROWS_AS(flow(stretch_wind(2), vec({1, 0}), 2.0, options), DomainError);
    CHECK_THROWS_AS(flow(stretch_wind(2), vec({1, 0, 0}), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(flow(stretch_wind(2), vec({1, 0}), 1.0, {FlowMode::integrated, 0.0}), std::invalid_argument);
}

TEST_CASE("Killing residual separates isometries from other flows")
{
    Sampler sampler(34);
    auto samples = [&](MetricDescriptor const& metric, double radius) {
        std::vector<PointedVector> out;
        for (int i = 0; i < 100; ++i) out.push_back(sampler.pointed(metric, radius));
        return out;
    };
    auto const flat = euclidean_metric(2);
    auto const flat_samples = samples(flat, 2.0);
    CHECK(killing_residual(flat, constant_wind(vec({0.3, -0.4})), flat_samples) < 1e-10);
    CHECK(killing_residual(flat, planar_rotation_wind(2, 0.5), flat_samples) < 1e-8);
    CHECK(killing_residual(flat, stretch_wind(2), flat_samples) > 1e-2);

    for (int dim : {2, 3}) {
        auto const sphere = sphere_stereographic_metric(dim);
        auto const pts = samples(sphere, 2.5);
        CHECK(killing_residual(sphere, stereographic_rotation_wind(dim, 0.9), pts) < 1e-8);
        CHECK(killing_residual(sphere, stereographic_rotation_wind(dim, 0.9), pts, 1e-5, kIntegrated) < 1e-8);
        CHECK(killing_residual(sphere, stretch_wind(dim), pts) > 1e-2);
    }

    // the wind preserves the deformed metric as well
    for (auto const& f : fixtures()) {
        CAPTURE(f.name);
        auto const deformed = make_zermelo_metric(f.base, f.wind);
        CHECK(killing_residual(deformed, f.wind, samples(deformed, 1.0)) < 1e-8);
    }
}

TEST_CASE("Noether integral")
{
    auto const flat = euclidean_metric(2);
    auto const a = vec({0.3, -0.4});
    auto const u = vec({0.6, 0.8});
    auto const line = integrate_geodesic(flat, {vec({0, 0}), u}, 2.0, 200);
    for (auto value : noether_integral(flat, line, constant_wind(a))) CHECK(value == a.dot(u));

    auto const sphere = sphere_stereographic_metric(2);
    PointedVector const start{vec({1, 0}), vec({std::sin(0.4), std::cos(0.4)})};
    auto const geo = integrate_geodesic(sphere, start, 10.0, 10000);
    REQUIRE(geo.complete);
    auto const killing = noether_integral(sphere, geo, stereographic_rotation_wind(2, 0.9));
    CHECK(noether_drift(killing) < 1e-8 * (1 + std::abs(killing.front())));
    CHECK(std::abs(killing.front()) > 0.1);

    auto const stretch = noether_integral(sphere, geo, stretch_wind(2));
    CHECK(noether_drift(stretch) > 1e-3);

    Sampler sampler(35);
    for (auto const& f : fixtures()) {
        CAPTURE(f.name);
        auto const deformed = make_zermelo_metric(f.base, f.wind);
        for (int trial = 0; trial < 3; ++trial) {
            auto const pv = sampler.pointed(deformed, 0.5);
            auto const g = integrate_geodesic(deformed, pv, 1.0, 1000, {true, 1e-10, 4.0});
            auto const values = noether_integral(deformed, g, f.wind);
            CHECK(noether_drift(values) < 1e-8 * (1 + std::abs(values.front())));
        }
    }
}
