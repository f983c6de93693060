#pragma once

#include "zermelo/metric.hpp"
#include "zermelo/models.hpp"
#include "zermelo/wind.hpp"
#include "zermelo/zermelo.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace zermelo::testing {

struct Fixture
{
    std::string name;
    MetricDescriptor base;
    WindField wind;
    double sample_radius;  ///< base points drawn from the ball of this radius
};

inline auto fixtures() -> std::vector<Fixture>
{
    Vector a(2);
    a << 0.3, -0.4;
    return {
        {"flat_randers", euclidean_metric(2), constant_wind(a), 2.0},
        {"planar_rotation", euclidean_metric(2), planar_rotation_wind(2, 0.5), 1.6},
        {"katok", sphere_stereographic_metric(2), stereographic_rotation_wind(2, 0.9), 2.5},
        {"katok_3d", sphere_stereographic_metric(3), stereographic_rotation_wind(3, 0.7), 1.5},
    };
}

class Sampler
{
  public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    auto uniform(double lo, double hi) -> double { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    auto in_ball(int dim, double radius) -> Vector
    {
        Vector x(dim);
        do {
            for (int i = 0; i < dim; ++i) x[i] = uniform(-radius, radius);
        } while (x.norm() > radius);
        return x;
    }

    auto direction(int dim) -> Vector
    {
        Vector d(dim);
        do {
            for (int i = 0; i < dim; ++i) d[i] = std::normal_distribution<double>()(rng_);
        } while (d.norm() < 1e-3);
        return d.normalized();
    }

    /// Random base point and tangent vector scaled to F = scale.
    auto pointed(MetricDescriptor const& metric, double radius, double scale = 1.0) -> PointedVector
    {
        PointedVector pv{in_ball(metric.dim(), radius), direction(metric.dim())};
        pv.xi *= scale / metric.value(pv.x, pv.xi);
        return pv;
    }

  private:
    std::mt19937_64 rng_;
};

inline auto max_abs(Matrix const& m) -> double { return m.cwiseAbs().maxCoeff(); }

inline auto relative_error(Matrix const& got, Matrix const& want) -> double
{
    return max_abs(got - want) / std::max(max_abs(want), 1e-300);
}

}  // namespace zermelo::testing
