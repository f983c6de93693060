#pragma once

#include "zermelo/geodesic.hpp"
#include "zermelo/metric.hpp"
#include "zermelo/wind.hpp"

#include <limits>
#include <span>
#include <vector>

namespace zermelo {

enum class FlowMode
{
    automatic,  ///< closed form when the wind provides one
    closed_form,
    integrated,
};

struct FlowOptions
{
    FlowMode mode = FlowMode::automatic;
    double step = 1e-3;  ///< RK4 step of the integrated mode
    double chart_radius = std::numeric_limits<double>::infinity();
};

/// The time-t flow of a wind and its differential.
class FlowMap
{
  public:
    FlowMap(WindField wind, double t, FlowOptions options = {});

    auto wind() const -> WindField const& { return wind_; }
    auto time() const noexcept -> double { return t_; }
    /// Resolved mode, never automatic.
    auto mode() const noexcept -> FlowMode { return mode_; }

    auto operator()(Vector const& x) const -> Vector;
    auto differential(Vector const& x) const -> Matrix;
    auto pushforward(Vector const& x, Vector const& xi) const -> Vector { return differential(x) * xi; }

  private:
    WindField wind_;
    double t_;
    FlowOptions options_;
    FlowMode mode_;
};

/// Throws DomainError if an integrated flow line leaves the chart ball.
auto flow(WindField const& wind, Vector const& x, double t, FlowOptions const& options = {}) -> Vector;

auto pushforward(WindField const& wind, Vector const& x, double t, Vector const& xi, FlowOptions const& options = {})
    -> Vector;

/// max over samples of |d/dt F(flow_t(x), flow_t*(xi))| at t = 0, central differences with step dt, divided by F.
auto killing_residual(MetricDescriptor const& metric, WindField const& wind, std::span<PointedVector const> samples,
                      double dt = 1e-5, FlowOptions const& options = {}) -> double;

/// v(F)(t) = v^r(x(t)) dF/dxi^r(x(t), x'(t)) at every sample.
auto noether_integral(MetricDescriptor const& metric, GeodesicTrajectory const& geodesic, WindField const& wind)
    -> std::vector<double>;

/// max_t |values(t) - values(0)|.
auto noether_drift(std::span<double const> values) -> double;

}  // namespace zermelo
