#pragma once

/// \file spray.hpp
/// Geodesic spray, Berwald connection coefficients, Riemann curvature (Jacobi operator) and flag curvature.
///
/// Conventions: geodesics solve x'' + 2 G(x, x') = 0 with
///     G^i = 1/4 g^{il} ( d^2(F^2)/dxi_l dx_m xi^m - d(F^2)/dx_l ),
/// N^i_j = dG^i/dxi_j, and the Jacobi equation reads D D J + R(J) = 0 with
///     R^i_k = 2 dG^i/dx^k - xi^j d^2G^i/dx^j dxi^k + 2 G^j d^2G^i/dxi^j dxi^k - dG^i/dxi^j dG^j/dxi^k.

#include "zermelo/metric.hpp"

#include <vector>

namespace zermelo {

/// Spray coefficients and the derivative blocks curvature needs.
struct SprayJet
{
    Vector G;
    Matrix dG_dx;                      ///< (i, k) -> dG^i/dx^k
    Matrix dG_dxi;                     ///< (i, k) -> dG^i/dxi^k, the connection N^i_k
    std::vector<Matrix> d2G_dxi2;      ///< [i](j, k) -> d^2G^i/dxi^j dxi^k
    std::vector<Matrix> d2G_dx_dxi;    ///< [i](j, k) -> d^2G^i/dx^j dxi^k
};

/// G^i as jets in the 2n variables (x, xi), valid to `order` (0..2).
auto spray_jets(MetricDescriptor const& metric, PointedVector const& pv, int order) -> std::vector<Jet>;

auto spray(MetricDescriptor const& metric, PointedVector const& pv) -> SprayJet;

/// G(x, xi) alone; the integrator's right-hand side.
auto spray_coefficients(MetricDescriptor const& metric, Vector const& x, Vector const& xi) -> Vector;

/// N^i_j = dG^i/dxi^j.
auto connection_coefficients(MetricDescriptor const& metric, PointedVector const& pv) -> Matrix;

/// Jacobi operator R_xi as a matrix acting on coordinate vectors.
struct CurvatureOperator
{
    Matrix R;

    auto operator()(Vector const& u) const -> Vector { return R * u; }
};

auto riemann_operator(MetricDescriptor const& metric, PointedVector const& pv) -> CurvatureOperator;

/// Same, from an already computed spray at (x, xi).
auto riemann_operator(SprayJet const& s, Vector const& xi) -> CurvatureOperator;

/// Flagpole xi at x with transverse edge eta.
struct Flag
{
    PointedVector pv;
    Vector eta;
};

/// Squared sine of the g_(x,xi)-angle below which a flag counts as degenerate is this value squared.
inline constexpr double kDegenerateFlagSine = 1e-8;

/// K = g(R(eta), eta) / (g(xi, xi) g(eta, eta) - g(xi, eta)^2), computed with eta replaced by its
/// g-orthogonal part. Throws DegenerateFlagError for near-parallel flags.
auto flag_curvature(MetricDescriptor const& metric, Flag const& flag) -> double;

/// Same quantity from precomputed tensor and curvature.
auto flag_curvature(FundamentalTensor const& g, CurvatureOperator const& r, Vector const& xi, Vector const& eta)
    -> double;

}  // namespace zermelo
