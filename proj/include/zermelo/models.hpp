#pragma once

/// \file models.hpp
/// Metrics and winds used by the bundled scenarios.

#include "zermelo/metric.hpp"
#include "zermelo/wind.hpp"

#include <functional>
#include <span>

namespace zermelo {

using ConformalFactor = std::function<Jet(std::span<Jet const> x)>;

/// F(x, xi) = |xi|.
auto euclidean_metric(int dim) -> MetricDescriptor;

/// F(x, xi) = phi(x) |xi|; `admissible` should keep phi positive.
auto conformal_metric(std::string name, int dim, ConformalFactor factor, RegionPredicate admissible = {})
    -> MetricDescriptor;

/// Unit round sphere in the stereographic chart from the north pole: phi = 2 / (1 + |x|^2).
/// The chart origin is the south pole and the equator is |x| = 1.
auto sphere_stereographic_metric(int dim) -> MetricDescriptor;

/// Round factor times (1 + epsilon x_1); not locally symmetric for epsilon != 0.
auto perturbed_sphere_metric(int dim, double epsilon) -> MetricDescriptor;

/// v(x) = a. Flow x + t a.
auto constant_wind(Vector a) -> WindField;

/// v(x) = omega (-x_2, x_1, 0, ...). Rigid rotation of the (x_1, x_2) plane.
auto planar_rotation_wind(int dim, double omega) -> WindField;

/// Rotation of the round sphere about its polar axis written in the stereographic chart; it has the same
/// components as the planar rotation, and on the round sphere F(x, -v(x)) peaks at omega on the equator.
auto stereographic_rotation_wind(int dim, double omega) -> WindField;

/// v(x) = (x_1, 0, ...). Not Killing for the Euclidean metric; registered without a closed-form flow.
auto stretch_wind(int dim) -> WindField;

}  // namespace zermelo
