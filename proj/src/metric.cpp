#include "zermelo/metric.hpp"

#include "zermelo/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zermelo {

auto to_string(MetricKind kind) -> std::string
{
    switch (kind) {
    case MetricKind::riemannian: return "riemannian";
    case MetricKind::zermelo: return "zermelo";
    case MetricKind::custom: return "custom";
    }
    return "custom";
}

MetricDescriptor::MetricDescriptor(std::string name, int dim, MetricKind kind, FinslerEvaluator evaluator,
                                   RegionPredicate admissible)
    : name_{std::move(name)}, dim_{dim}, kind_{kind},
      evaluator_{std::make_shared<FinslerEvaluator const>(std::move(evaluator))},
      admissible_{admissible ? std::make_shared<RegionPredicate const>(std::move(admissible)) : nullptr}
{
    if (dim_ < 2 || 2 * dim_ > kMaxJetVars) throw std::invalid_argument("metric: dimension must be 2 or 3");
}

auto MetricDescriptor::admissible(Vector const& x) const -> bool
{
    if (x.size() != dim_) return false;
    for (auto c : x)
        if (!std::isfinite(c)) return false;
    return !admissible_ || (*admissible_)(x);
}

auto MetricDescriptor::evaluate(std::span<Jet const> x, std::span<Jet const> xi) const -> Jet
{
    return (*evaluator_)(x, xi);
}

auto MetricDescriptor::value(Vector const& x, Vector const& xi) const -> double
{
    auto const xs = constant_jets(x, 1, 0);
    auto const vs = constant_jets(xi, 1, 0);
    return evaluate(xs, vs).value();
}

auto MetricDescriptor::jet(PointedVector const& pv, int order) const -> Jet
{
    auto const vars = lift_pointed(pv, order);
    auto const span = std::span<Jet const>(vars);
    return evaluate(span.first(dim_), span.subspan(dim_));
}

auto MetricDescriptor::fiber_jet(PointedVector const& pv, int order) const -> Jet
{
    auto const xs = constant_jets(pv.x, dim_, order);
    std::vector<Jet> xi;
    for (int i = 0; i < dim_; ++i) xi.push_back(Jet::variable(dim_, order, i, pv.xi[i]));
    return evaluate(xs, xi);
}

auto FundamentalTensor::min_eigenvalue() const -> double
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(g, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void validate(MetricDescriptor const& metric, PointedVector const& pv)
{
    if (pv.x.size() != metric.dim() || pv.xi.size() != metric.dim())
        throw std::invalid_argument("pointed vector dimension does not match metric " + metric.name());
    if (!metric.admissible(pv.x)) {
        std::ostringstream msg;
        msg << "point (" << pv.x.transpose() << ") outside the admissible region of " << metric.name();
        throw DomainError(msg.str());
    }
    if (pv.xi.norm() == 0.0) throw DomainError("tangent vector must be nonzero");
}

auto finsler_eval(MetricDescriptor const& metric, PointedVector const& pv) -> double
{
    validate(metric, pv);
    auto const f = metric.value(pv.x, pv.xi);
    if (!(f > 0.0)) throw DomainError("metric " + metric.name() + " is not positive at the given vector");
    return f;
}

auto fundamental_tensor(MetricDescriptor const& metric, PointedVector const& pv) -> FundamentalTensor
{
    validate(metric, pv);
    auto const f = metric.fiber_jet(pv, 2);
    auto const energy = f * f;
    auto const n = metric.dim();
    FundamentalTensor t{Matrix(n, n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.g(i, j) = 0.5 * energy.hessian_entry(i, j);
    if (!(t.min_eigenvalue() > 0.0))
        throw ConvexityError("fundamental tensor of " + metric.name() + " is not positive definite");
    return t;
}

auto fiber_gradient(MetricDescriptor const& metric, PointedVector const& pv) -> Vector
{
    validate(metric, pv);
    auto const f = metric.fiber_jet(pv, 1);
    Vector d(metric.dim());
    for (int i = 0; i < metric.dim(); ++i) d[i] = f.gradient_entry(i);
    return d;
}

auto fiber_hessian(MetricDescriptor const& metric, PointedVector const& pv) -> Matrix
{
    validate(metric, pv);
    auto const f = metric.fiber_jet(pv, 2);
    Matrix h(metric.dim(), metric.dim());
    for (int i = 0; i < metric.dim(); ++i)
        for (int j = 0; j < metric.dim(); ++j) h(i, j) = f.hessian_entry(i, j);
    return h;
}

auto OrthogonalityPairing::discrepancy() const -> double { return std::abs(tensor_form - covector_form); }

auto orthogonality_residual(MetricDescriptor const& metric, PointedVector const& pv, Vector const& u)
    -> OrthogonalityPairing
{
    auto const g = fundamental_tensor(metric, pv);
    auto const df = fiber_gradient(metric, pv);
    auto const f = metric.value(pv.x, pv.xi);
    return {g.inner(pv.xi, u), f * df.dot(u)};
}

auto lift_pointed(PointedVector const& pv, int order) -> std::vector<Jet>
{
    auto const n = static_cast<int>(pv.x.size());
    std::vector<Jet> vars;
    vars.reserve(2 * n);
    for (int i = 0; i < n; ++i) vars.push_back(Jet::variable(2 * n, order, i, pv.x[i]));
    for (int i = 0; i < n; ++i) vars.push_back(Jet::variable(2 * n, order, n + i, pv.xi[i]));
    return vars;
}

auto constant_jets(Vector const& v, int num_vars, int order) -> std::vector<Jet>
{
    std::vector<Jet> out;
    out.reserve(v.size());
    for (auto c : v) out.emplace_back(num_vars, order, c);
    return out;
}

auto jet_values(std::span<Jet const> jets) -> Vector
{
    Vector v(static_cast<Eigen::Index>(jets.size()));
    for (std::size_t i = 0; i < jets.size(); ++i) v[static_cast<Eigen::Index>(i)] = jets[i].value();
    return v;
}

}  // namespace zermelo
