#pragma once

/// \file transport.hpp
/// Covariant differentiation, Jacobi fields and curvature along a sampled geodesic.
///
/// Along a geodesic with reference vector x' the covariant derivative is
///     (D X)^i = dX^i/dt + N^i_j(x, x') X^j,    N^i_j = dG^i/dxi^j,
/// the common specialization of the Berwald and Chern connections. Time derivatives of sampled fields
/// use fourth-order finite differences on the uniform grid. Jacobi fields and parallel frames are
/// integrated by RK4 with twice the geodesic step, so each RK4 stage lands on a geodesic sample and the
/// connection and curvature are always evaluated at integration nodes.

#include "zermelo/geodesic.hpp"
#include "zermelo/spray.hpp"

#include <span>
#include <vector>

namespace zermelo {

/// Connection, curvature and fundamental tensor at every sample of a geodesic.
struct CurvatureTrack
{
    GeodesicTrajectory geodesic;
    std::vector<Matrix> connection;
    std::vector<Matrix> curvature;  ///< empty unless requested
    std::vector<FundamentalTensor> tensor;

    auto has_curvature() const -> bool { return !curvature.empty(); }
};

auto track_along(GeodesicTrajectory const& geodesic, bool with_curvature = true) -> CurvatureTrack;

/// dX/dt on a uniform grid, fourth-order accurate including the end points. Needs at least 5 samples.
auto time_derivative(std::span<Vector const> field, double spacing) -> std::vector<Vector>;

/// D X for X sampled at every `stride`-th sample of the track.
auto covariant_derivative_along(CurvatureTrack const& track, std::span<Vector const> field, int stride = 1)
    -> std::vector<Vector>;

auto covariant_derivative_along(GeodesicTrajectory const& geodesic, std::span<Vector const> field)
    -> std::vector<Vector>;

struct JacobiSample
{
    double t;
    Vector J;
    Vector DJ;
};

/// Jacobi field on every `stride`-th sample of the geodesic it was integrated along.
struct JacobiTrajectory
{
    int stride = 2;
    double step = 0.0;
    std::vector<JacobiSample> samples;

    auto fields() const -> std::vector<Vector>;
    auto derivatives() const -> std::vector<Vector>;
};

/// Solves J' = P - N J, P' = -R J - N P where P = D J. Requires a track with curvature.
auto integrate_jacobi(CurvatureTrack const& track, Vector const& J0, Vector const& DJ0) -> JacobiTrajectory;

auto integrate_jacobi(GeodesicTrajectory const& geodesic, Vector const& J0, Vector const& DJ0) -> JacobiTrajectory;

/// max over samples of |D D J + R(J)|, with D D J obtained by differentiating the integrated D J.
auto jacobi_equation_residual(CurvatureTrack const& track, JacobiTrajectory const& jacobi) -> double;

/// Same residual for an arbitrary field given on the track's stride grid.
auto jacobi_equation_residual(CurvatureTrack const& track, std::span<Vector const> field, int stride) -> double;

/// Two evaluations of 1/2 d^2/dt^2 g(J, J):
///   left  - finite differences of t -> g(J, J);
///   right - -K(x, x', J) (g(x', x') g(J, J) - g(x', J)^2) + g(D J, D J),
/// with every inner product at (x(t), x'(t)).
struct SecondVariationReport
{
    double max_discrepancy = 0.0;
    double right_scale = 0.0;  ///< max |right side|

    auto normalized() const -> double { return right_scale > 0.0 ? max_discrepancy / right_scale : max_discrepancy; }
};

auto skoro_identity_residual(CurvatureTrack const& track, JacobiTrajectory const& jacobi) -> SecondVariationReport;

/// Parallel transport (D E = 0) of initial vectors, g-orthonormalized every `reorthonormalize_every` steps.
/// Returned fields live on the stride-2 grid.
auto parallel_frame(CurvatureTrack const& track, std::vector<Vector> const& initial, int reorthonormalize_every = 100)
    -> std::vector<std::vector<Vector>>;

/// g-orthonormal basis whose first vector is xi / F(xi).
auto orthonormal_frame(FundamentalTensor const& g, Vector const& xi) -> std::vector<Vector>;

/// max over the frame and the samples of |(D R)(E_k)|_g, computed as D(R E_k) - R(D E_k).
auto curvature_derivative_residual(CurvatureTrack const& track, int reorthonormalize_every = 100) -> double;

/// Failure of D J to be a Jacobi field, |D D (D J) + R(D J)|, for an integrated Jacobi field J.
/// D D J is replaced by -R(J), so a single finite-difference layer enters: D(-R J) + R(D J).
auto jacobi_derivative_defect(CurvatureTrack const& track, JacobiTrajectory const& jacobi) -> double;

struct LocalSymmetryOptions
{
    int steps_per_unit_time = 1000;
    GeodesicOptions geodesic;
};

struct LocalSymmetryReport
{
    double residual = 0.0;            ///< |D R| along the parallel frame
    double jacobi_defect = 0.0;       ///< alternate route through D J of integrated Jacobi fields
    bool complete = true;
    std::string diagnostic;
};

/// Integrates the geodesic from a unit start over [0, T] and measures how far D R is from zero.
auto local_symmetry_residual(MetricDescriptor const& metric, PointedVector const& start, double duration,
                             LocalSymmetryOptions const& options = {}) -> LocalSymmetryReport;

}  // namespace zermelo
