#include "zermelo/zermelo.hpp"

#include "zermelo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace zermelo {
namespace {

/// phi(r) = F(x, xi - r v) - r and its r-derivative, through a one-variable jet in r.
auto residual_and_slope(MetricDescriptor const& base, Vector const& x, Vector const& xi, Vector const& v, double r)
    -> std::pair<double, double>
{
    auto const xs = constant_jets(x, 1, 1);
    auto const rj = Jet::variable(1, 1, 0, r);
    std::vector<Jet> arg;
    arg.reserve(xi.size());
    for (Eigen::Index i = 0; i < xi.size(); ++i) arg.push_back(xi[i] - rj * v[i]);
    auto const f = base.evaluate(xs, arg);
    return {f.value() - r, f.gradient_entry(0) - 1.0};
}

void require_matching(MetricDescriptor const& base, WindField const& wind)
{
    if (base.dim() != wind.dim())
        throw std::invalid_argument("wind " + wind.name() + " does not match the dimension of " + base.name());
}

void require_admissible(double strength, Vector const& x)
{
    if (!(strength < 1.0)) {
        std::ostringstream msg;
        msg << "admissibility violated: F(x, -v(x)) = " << strength << " >= 1 at x = (" << x.transpose() << ")";
        throw AdmissibilityError(msg.str());
    }
}

}  // namespace

auto wind_strength(MetricDescriptor const& base, WindField const& wind, Vector const& x) -> double
{
    Vector const v = wind(x);
    if (v.norm() == 0.0) return 0.0;
    return base.value(x, -v);
}

auto zermelo_eval(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv,
                  ZermeloSolveOptions const& options) -> double
{
    require_matching(base, wind);
    validate(base, pv);
    auto const strength = wind_strength(base, wind, pv.x);
    require_admissible(strength, pv.x);
    auto const f0 = base.value(pv.x, pv.xi);
    Vector const v = wind(pv.x);
    if (v.norm() == 0.0) return f0;

    // phi is convex and strictly decreasing on the bracket (0, r0]; Newton from the left end climbs
    // monotonically to the root, bisection covers rounding excursions.
    double lo = 0.0;
    double hi = f0 / (1.0 - strength);
    double r = lo;
    auto const tol = options.relative_tolerance * f0;
    for (int it = 0; it < options.max_iterations; ++it) {
        double phi = 0.0;
        double slope = 0.0;
        try {
            std::tie(phi, slope) = residual_and_slope(base, pv.x, pv.xi, v, r);
        } catch (DomainError const&) {
            // xi - r v hit the origin, which only happens beyond the root
            hi = r;
            r = 0.5 * (lo + hi);
            continue;
        }
        if (std::abs(phi) <= tol) return r;
        if (phi > 0.0)
            lo = r;
        else
            hi = r;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return r;
        double next = r - phi / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        r = next;
    }
    throw ConvergenceError("zermelo_eval: no convergence; the wind may be near critical");
}

auto zermelo_eval_jet(MetricDescriptor const& base, WindField const& wind, std::span<Jet const> x,
                      std::span<Jet const> xi) -> Jet
{
    PointedVector const pv0{jet_values(x), jet_values(xi)};
    auto const r0 = zermelo_eval(base, wind, pv0);
    auto const num_vars = xi.front().num_vars();
    int order = 0;
    for (auto const& j : xi) order = std::max(order, j.order());
    auto const v = wind.evaluate(x);
    Vector const v0 = jet_values(v);
    auto const slope = residual_and_slope(base, pv0.x, pv0.xi, v0, r0).second;

    // Chord iteration with the fixed slope phi'(r0): every pass fixes one more Taylor order.
    Jet r(num_vars, order, r0);
    std::vector<Jet> arg;
    for (int k = 0; k < order; ++k) {
        arg.clear();
        for (std::size_t i = 0; i < xi.size(); ++i) arg.push_back(xi[i] - r * v[i]);
        auto phi = base.evaluate(x, arg) - r;
        r -= phi / slope;
    }
    return r;
}

auto make_zermelo_metric(MetricDescriptor const& base, WindField const& wind) -> MetricDescriptor
{
    require_matching(base, wind);
    auto evaluator = [base, wind](std::span<Jet const> x, std::span<Jet const> xi) {
        return zermelo_eval_jet(base, wind, x, xi);
    };
    auto region = [base, wind](Vector const& x) {
        return base.admissible(x) && wind_strength(base, wind, x) < 1.0;
    };
    return MetricDescriptor("zermelo(" + base.name() + ", " + wind.name() + ")", base.dim(), MetricKind::zermelo,
                            std::move(evaluator), std::move(region));
}

auto deformed_argument(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv) -> Vector
{
    return pv.xi + finsler_eval(base, pv) * wind(pv.x);
}

auto base_argument(MetricDescriptor const& base, WindField const& wind, PointedVector const& deformed) -> Vector
{
    return deformed.xi - zermelo_eval(base, wind, deformed) * wind(deformed.x);
}

auto zermelo_transfer(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv)
    -> ZermeloTransfer
{
    require_matching(base, wind);
    validate(base, pv);
    require_admissible(wind_strength(base, wind, pv.x), pv.x);
    auto const jet = base.fiber_jet(pv, 2);
    auto const n = base.dim();
    ZermeloTransfer t;
    t.base_xi = pv.xi;
    t.v = wind(pv.x);
    t.f_tilde = jet.value();
    t.dF = Vector(n);
    t.hessian = Matrix(n, n);
    for (int i = 0; i < n; ++i) {
        t.dF[i] = jet.gradient_entry(i);
        for (int j = 0; j < n; ++j) t.hessian(i, j) = jet.hessian_entry(i, j);
    }
    t.g = t.f_tilde * t.hessian + t.dF * t.dF.transpose();
    t.v_of_f = t.dF.dot(t.v);
    t.deformed_xi = pv.xi + t.f_tilde * t.v;
    if (!(t.one_plus_vf() > 0.0)) throw std::logic_error("zermelo transfer: 1 + v(F) is not positive");
    return t;
}

auto zermelo_gradient(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv) -> Vector
{
    auto const t = zermelo_transfer(base, wind, pv);
    return t.dF / t.one_plus_vf();
}

auto zermelo_hessian_reduced(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv)
    -> Matrix
{
    auto const t = zermelo_transfer(base, wind, pv);
    auto const s = t.one_plus_vf();
    Vector const hv = t.hessian * t.v;
    return t.hessian / s - (hv * t.dF.transpose() + t.dF * hv.transpose()) / (s * s);
}

auto zermelo_hessian(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv) -> Matrix
{
    auto const t = zermelo_transfer(base, wind, pv);
    auto const s = t.one_plus_vf();
    Vector const hv = t.hessian * t.v;
    return t.hessian / s - (hv * t.dF.transpose() + t.dF * hv.transpose()) / (s * s) +
           t.v.dot(hv) * (t.dF * t.dF.transpose()) / (s * s * s);
}

auto zermelo_fundamental(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv)
    -> FundamentalTensor
{
    auto const t = zermelo_transfer(base, wind, pv);
    auto const s = t.one_plus_vf();
    Vector const hv = t.hessian * t.v;
    Matrix const dfdf = t.dF * t.dF.transpose();
    // 1/2 d^2(F~^2) = F~ d^2F~ + dF~ (x) dF~
    FundamentalTensor out{t.f_tilde / s * t.hessian -
                          t.f_tilde / (s * s) * (hv * t.dF.transpose() + t.dF * hv.transpose()) +
                          t.f_tilde * t.v.dot(hv) / (s * s * s) * dfdf + dfdf / (s * s)};
    if (!(out.min_eigenvalue() > 0.0)) throw ConvexityError("deformed fundamental tensor is not positive definite");
    return out;
}

auto zermelo_fundamental_reduced(MetricDescriptor const& base, WindField const& wind, PointedVector const& pv)
    -> FundamentalTensor
{
    auto const t = zermelo_transfer(base, wind, pv);
    auto const s = t.one_plus_vf();
    Vector const hv = t.hessian * t.v;
    return {t.f_tilde / s * t.g - t.f_tilde / (s * s) * (hv * t.dF.transpose() + t.dF * hv.transpose()) +
            t.dF * t.dF.transpose() / (s * s)};
}

auto check_admissible(MetricDescriptor const& base, WindField const& wind, std::span<Vector const> samples)
    -> AdmissibilityReport
{
    AdmissibilityReport report;
    for (auto const& x : samples) {
        auto const s = wind_strength(base, wind, x);
        if (report.worst_point.size() == 0 || s > report.max_strength) {
            report.max_strength = s;
            report.worst_point = x;
        }
    }
    report.pass = report.max_strength < 1.0;
    return report;
}

}  // namespace zermelo
