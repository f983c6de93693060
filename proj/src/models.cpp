#include "zermelo/models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zermelo {
namespace {

auto squared_norm(std::span<Jet const> v) -> Jet
{
    Jet sum = v[0] * v[0];
    for (std::size_t i = 1; i < v.size(); ++i) sum += v[i] * v[i];
    return sum;
}

auto rotation_flow(int dim, double omega) -> ClosedFormFlow
{
    auto rotation = [dim, omega](double t) {
        Matrix r = Matrix::Identity(dim, dim);
        auto const c = std::cos(omega * t);
        auto const s = std::sin(omega * t);
        r(0, 0) = c;
        r(0, 1) = -s;
        r(1, 0) = s;
        r(1, 1) = c;
        return r;
    };
    return {[rotation](Vector const& x, double t) -> Vector { return rotation(t) * x; },
            [rotation](Vector const&, double t) -> Matrix { return rotation(t); }};
}

}  // namespace

auto euclidean_metric(int dim) -> MetricDescriptor
{
    return MetricDescriptor("euclidean", dim, MetricKind::riemannian,
                            [](std::span<Jet const>, std::span<Jet const> xi) { return sqrt(squared_norm(xi)); });
}

auto conformal_metric(std::string name, int dim, ConformalFactor factor, RegionPredicate admissible)
    -> MetricDescriptor
{
    return MetricDescriptor(
        std::move(name), dim, MetricKind::riemannian,
        [factor = std::move(factor)](std::span<Jet const> x, std::span<Jet const> xi) {
            return factor(x) * sqrt(squared_norm(xi));
        },
        std::move(admissible));
}

auto sphere_stereographic_metric(int dim) -> MetricDescriptor
{
    return conformal_metric("sphere_stereographic", dim,
                            [](std::span<Jet const> x) { return 2.0 / (1.0 + squared_norm(x)); });
}

auto perturbed_sphere_metric(int dim, double epsilon) -> MetricDescriptor
{
    return conformal_metric(
        "perturbed_sphere", dim,
        [epsilon](std::span<Jet const> x) { return 2.0 * (1.0 + epsilon * x[0]) / (1.0 + squared_norm(x)); },
        [epsilon](Vector const& x) { return 1.0 + epsilon * x[0] > 0.0; });
}

auto constant_wind(Vector a) -> WindField
{
    auto const dim = static_cast<int>(a.size());
    ClosedFormFlow flow{[a](Vector const& x, double t) -> Vector { return x + t * a; },
                        [dim](Vector const&, double) -> Matrix { return Matrix::Identity(dim, dim); }};
    return WindField(
        "constant", dim,
        [a](std::span<Jet const> x) {
            std::vector<Jet> v;
            for (auto c : a) v.emplace_back(x[0].num_vars(), x[0].order(), c);
            return v;
        },
        std::move(flow));
}

auto planar_rotation_wind(int dim, double omega) -> WindField
{
    return WindField(
        "planar_rotation", dim,
        [dim, omega](std::span<Jet const> x) {
            std::vector<Jet> v;
            v.push_back(-omega * x[1]);
            v.push_back(omega * x[0]);
            for (int i = 2; i < dim; ++i) v.emplace_back(x[0].num_vars(), x[0].order(), 0.0);
            return v;
        },
        rotation_flow(dim, omega));
}

auto stereographic_rotation_wind(int dim, double omega) -> WindField
{
    auto planar = planar_rotation_wind(dim, omega);
    return WindField(
        "stereographic_rotation", dim, [planar](std::span<Jet const> x) { return planar.evaluate(x); },
        rotation_flow(dim, omega));
}

auto stretch_wind(int dim) -> WindField
{
    return WindField("stretch", dim, [dim](std::span<Jet const> x) {
        std::vector<Jet> v;
        v.push_back(x[0]);
        for (int i = 1; i < dim; ++i) v.emplace_back(x[0].num_vars(), x[0].order(), 0.0);
        return v;
    });
}

}  // namespace zermelo
