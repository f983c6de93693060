#pragma once

#include "zermelo/metric.hpp"
#include "zermelo/spray.hpp"

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace zermelo {

struct TrajectorySample
{
    double t;
    Vector x;
    Vector xi;  ///< velocity x'(t)
};

/// Uniformly time-sampled solution of x'' = -2 G(x, x').
struct GeodesicTrajectory
{
    MetricDescriptor metric;
    double step = 0.0;
    std::vector<TrajectorySample> samples;
    bool complete = true;       ///< false when integration stopped early
    std::string diagnostic;     ///< reason for an early stop

    auto size() const noexcept -> std::size_t { return samples.size(); }
    auto duration() const -> double { return samples.empty() ? 0.0 : samples.back().t - samples.front().t; }
    auto pointed(std::size_t k) const -> PointedVector { return {samples[k].x, samples[k].xi}; }
};

struct GeodesicOptions
{
    bool require_unit_speed = true;
    double unit_tolerance = 1e-10;
    /// Stop when |x| exceeds this bound (charts such as the stereographic one are unbounded but badly scaled).
    double chart_radius = std::numeric_limits<double>::infinity();
};

/// Fixed-step classical RK4 over [0, T] with `steps` steps. Leaving the admissible region or the chart
/// radius returns the partial trajectory with complete = false.
auto integrate_geodesic(MetricDescriptor const& metric, PointedVector const& start, double duration, int steps,
                        GeodesicOptions const& options = {}) -> GeodesicTrajectory;

/// Builds a trajectory from externally produced samples (for example a curve mapped by a flow).
auto make_trajectory(MetricDescriptor const& metric, double step, std::vector<TrajectorySample> samples)
    -> GeodesicTrajectory;

/// Every `stride`-th sample.
auto subsample(GeodesicTrajectory const& geodesic, int stride) -> GeodesicTrajectory;

/// max_t |F(x(t), x'(t)) - F(x(0), x'(0))| / F(x(0), x'(0)).
auto speed_drift(GeodesicTrajectory const& geodesic) -> double;

/// CSV with header t,x_1..x_n,xi_1..xi_n and full double precision.
void write_csv(std::ostream& out, GeodesicTrajectory const& geodesic);

}  // namespace zermelo
