#include "zermelo/spray.hpp"

#include "zermelo/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace zermelo {
namespace {

/// Solves A y = b in Jet arithmetic by elimination without pivoting (A symmetric positive definite).
auto solve_spd(std::vector<std::vector<Jet>> a, std::vector<Jet> b) -> std::vector<Jet>
{
    auto const n = b.size();
    for (std::size_t p = 0; p < n; ++p) {
        if (!(a[p][p].value() > 0.0)) throw ConvexityError("spray: fundamental tensor is singular");
        auto const inv = reciprocal(a[p][p]);
        for (std::size_t r = p + 1; r < n; ++r) {
            auto const factor = a[r][p] * inv;
            for (std::size_t c = p + 1; c < n; ++c) a[r][c] -= factor * a[p][c];
            b[r] -= factor * b[p];
        }
    }
    std::vector<Jet> y(n, b[0]);
    for (std::size_t p = n; p-- > 0;) {
        Jet acc = b[p];
        for (std::size_t c = p + 1; c < n; ++c) acc -= a[p][c] * y[c];
        y[p] = acc / a[p][p];
    }
    return y;
}

}  // namespace

auto spray_jets(MetricDescriptor const& metric, PointedVector const& pv, int order) -> std::vector<Jet>
{
    if (order < 0 || order + 2 > kMaxJetOrder) throw std::invalid_argument("spray_jets: order must be 0..2");
    validate(metric, pv);
    auto const n = metric.dim();
    auto const f = metric.jet(pv, order + 2);
    auto const energy = f * f;

    std::vector<Jet> d_x;
    std::vector<Jet> d_xi;
    for (int l = 0; l < n; ++l) {
        d_x.push_back(energy.partial(l));
        d_xi.push_back(energy.partial(n + l));
    }
    std::vector<std::vector<Jet>> g(n);
    std::vector<Jet> rhs;
    for (int l = 0; l < n; ++l) {
        for (int m = 0; m < n; ++m) g[l].push_back(0.5 * d_xi[l].partial(n + m));
        Jet a = -d_x[l].truncated(order);
        for (int m = 0; m < n; ++m) a += d_xi[l].partial(m) * Jet::variable(2 * n, order, n + m, pv.xi[m]);
        rhs.push_back(0.25 * a);
    }
    return solve_spd(std::move(g), std::move(rhs));
}

auto spray(MetricDescriptor const& metric, PointedVector const& pv) -> SprayJet
{
    auto const n = metric.dim();
    auto const jets = spray_jets(metric, pv, 2);
    SprayJet s{Vector(n), Matrix(n, n), Matrix(n, n), std::vector<Matrix>(n, Matrix(n, n)),
               std::vector<Matrix>(n, Matrix(n, n))};
    for (int i = 0; i < n; ++i) {
        s.G[i] = jets[i].value();
        for (int k = 0; k < n; ++k) {
            s.dG_dx(i, k) = jets[i].gradient_entry(k);
            s.dG_dxi(i, k) = jets[i].gradient_entry(n + k);
            for (int j = 0; j < n; ++j) {
                s.d2G_dxi2[i](j, k) = jets[i].hessian_entry(n + j, n + k);
                s.d2G_dx_dxi[i](j, k) = jets[i].hessian_entry(j, n + k);
            }
        }
    }
    return s;
}

auto spray_coefficients(MetricDescriptor const& metric, Vector const& x, Vector const& xi) -> Vector
{
    return jet_values(spray_jets(metric, {x, xi}, 0));
}

auto connection_coefficients(MetricDescriptor const& metric, PointedVector const& pv) -> Matrix
{
    auto const n = metric.dim();
    auto const jets = spray_jets(metric, pv, 1);
    Matrix N(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) N(i, j) = jets[i].gradient_entry(n + j);
    return N;
}

auto riemann_operator(MetricDescriptor const& metric, PointedVector const& pv) -> CurvatureOperator
{
    return riemann_operator(spray(metric, pv), pv.xi);
}

auto riemann_operator(SprayJet const& s, Vector const& xi) -> CurvatureOperator
{
    auto const n = xi.size();
    Matrix R(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            double r = 2.0 * s.dG_dx(i, k);
            for (int j = 0; j < n; ++j) {
                r -= xi[j] * s.d2G_dx_dxi[i](j, k);
                r += 2.0 * s.G[j] * s.d2G_dxi2[i](j, k);
                r -= s.dG_dxi(i, j) * s.dG_dxi(j, k);
            }
            R(i, k) = r;
        }
    }
    return {R};
}

auto flag_curvature(FundamentalTensor const& g, CurvatureOperator const& r, Vector const& xi, Vector const& eta)
    -> double
{
    auto const gxx = g.norm_squared(xi);
    auto const gxe = g.inner(xi, eta);
    auto const gee = g.norm_squared(eta);
    auto const sine_sq = 1.0 - gxe * gxe / (gxx * gee);
    if (!(sine_sq >= kDegenerateFlagSine * kDegenerateFlagSine))
        throw DegenerateFlagError("flag_curvature: flagpole and transverse edge are nearly parallel");
    Vector const perp = eta - (gxe / gxx) * xi;
    return g.inner(r(perp), perp) / (gxx * g.norm_squared(perp));
}

auto flag_curvature(MetricDescriptor const& metric, Flag const& flag) -> double
{
    auto const g = fundamental_tensor(metric, flag.pv);
    auto const r = riemann_operator(metric, flag.pv);
    return flag_curvature(g, r, flag.pv.xi, flag.eta);
}

}  // namespace zermelo
