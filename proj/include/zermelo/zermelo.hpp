#pragma once

/// \file zermelo.hpp
/// Zermelo deformation of a Finsler metric by a wind v with F(x, -v(x)) < 1.
///
/// The deformed metric is the implicit solution r = F~(x, xi) of r = F(x, xi - r v(x)); its unit ball at x
/// is the unit F-ball translated by v(x).
///
/// Evaluation points. The derivative-transfer formulas relate derivatives of F at a *base argument* xi to
/// derivatives of F~ at the *deformed argument* xi~ linked by
///
///     xi = xi~ - F~(x, xi~) v(x)      <=>      xi~ = xi + F(x, xi) v(x),
///
/// and then F~(x, xi~) = F(x, xi). The transfer functions below take the base argument in `pv` and return
/// quantities valid at deformed_argument(...). For a unit base vector the deformed argument is xi + v.

#include "zermelo/metric.hpp"
#include "zermelo/wind.hpp"

#include <span>
#include <vector>

namespace zermelo {

struct ZermeloSolveOptions
{
    double relative_tolerance = 1e-14;
    int max_iterations = 200;
};

/// Unique r > 0 with r = F(x, xi - r v(x)); safeguarded Newton on a bracket seeded by
/// r0 = F(x, xi) / (1 - F(x, -v)). Throws AdmissibilityError or ConvergenceError.
auto zermelo_eval(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv,
                  ZermeloSolveOptions const& options = {}) -> double;

/// The same solution lifted to Jet arithmetic; exact up to the jets' order.
auto zermelo_eval_jet(MetricDescriptor const& base, WindField const& wind, std::span<Jet const> x,
                      std::span<Jet const> xi) -> Jet;

/// F~ as a metric descriptor of kind zermelo. Its admissible region adds F(x, -v(x)) < 1.
auto make_zermelo_metric(MetricDescriptor const& base, WindField const& wind) -> MetricDescriptor;

/// F(x, -v(x)); zero where v vanishes.
auto wind_strength(MetricDescriptor const& base, WindField const& wind, Vector const& x) -> double;

/// xi~ = xi + F(x, xi) v(x).
auto deformed_argument(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv) -> Vector;

/// xi = xi~ - F~(x, xi~) v(x).
auto base_argument(MetricDescriptor const& base, WindField const& wind, PointedVector const& deformed) -> Vector;

/// Everything the transfer formulas consume, gathered at the base argument.
struct ZermeloTransfer
{
    Vector base_xi;      ///< xi, where F is differentiated
    Vector deformed_xi;  ///< xi + F v, where the F~ derivatives are valid
    Vector v;
    double f_tilde;      ///< F~(x, deformed_xi) = F(x, base_xi)
    Vector dF;
    Matrix hessian;      ///< d^2F in xi
    Matrix g;            ///< fundamental tensor of F
    double v_of_f;       ///< v(F) = sum_r v^r dF/dxi_r

    auto one_plus_vf() const -> double { return 1.0 + v_of_f; }
};

auto zermelo_transfer(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv)
    -> ZermeloTransfer;

/// dF~/dxi_i = dF/dxi_i / (1 + v(F)).
auto zermelo_gradient(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv) -> Vector;

/// Complete second xi-derivative of F~:
///   H/(1+vF) - (Hv (x) dF + dF (x) Hv)/(1+vF)^2 + (v.Hv) dF (x) dF/(1+vF)^3.
auto zermelo_hessian(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv) -> Matrix;

/// The two-term form without the (v.Hv) dF (x) dF term. It agrees with zermelo_hessian as a quadratic form on
/// vectors J with dF(J) = 0, and only there.
auto zermelo_hessian_reduced(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv)
    -> Matrix;

/// g~ = F~ d^2F~ + dF~ (x) dF~ assembled from the base data.
auto zermelo_fundamental(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv)
    -> FundamentalTensor;

/// F~/(1+vF) g - F~/(1+vF)^2 (Hv (x) dF + dF (x) Hv) + dF (x) dF/(1+vF)^2, with g the base fundamental tensor.
/// Matches zermelo_fundamental on dF-null vectors when F(x, xi) = 1; the squared-length ratio
/// g~(J, J) / g(J, J) = 1/(1 + v(F)) used along unit-speed geodesics follows from either.
auto zermelo_fundamental_reduced(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv)
    -> FundamentalTensor;

struct AdmissibilityReport
{
    double max_strength = 0.0;  ///< max over samples of F(x, -v(x))
    Vector worst_point;
    bool pass = true;
};

auto check_admissible(MetricDescriptor const& base, WindField const& wind, std::span<Vector const> samples)
    -> AdmissibilityReport;

}  // namespace zermelo
