#pragma once

#include "zermelo/jet.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace zermelo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base point plus nonzero tangent vector; the argument of every anisotropic quantity.
struct PointedVector
{
    Vector x;
    Vector xi;
};

/// F(x, xi) written once against Jet arithmetic; x and xi carry the same Jet variable layout.
using FinslerEvaluator = std::function<Jet(std::span<Jet const> x, std::span<Jet const> xi)>;
using RegionPredicate = std::function<bool(Vector const&)>;

enum class MetricKind { riemannian, zermelo, custom };

auto to_string(MetricKind kind) -> std::string;

class MetricDescriptor
{
  public:
    MetricDescriptor(std::string name, int dim, MetricKind kind, FinslerEvaluator evaluator,
                     RegionPredicate admissible = {});

    auto name() const -> std::string const& { return name_; }
    auto dim() const noexcept -> int { return dim_; }
    auto kind() const noexcept -> MetricKind { return kind_; }

    auto admissible(Vector const& x) const -> bool;

    auto evaluate(std::span<Jet const> x, std::span<Jet const> xi) const -> Jet;

    /// F(x, xi) without validation.
    auto value(Vector const& x, Vector const& xi) const -> double;

    /// Jet of F in the 2n variables (x_1..x_n, xi_1..xi_n) expanded at pv.
    auto jet(PointedVector const& pv, int order) const -> Jet;

    /// Jet of F in the n variables xi_1..xi_n at fixed x.
    auto fiber_jet(PointedVector const& pv, int order) const -> Jet;

  private:
    std::string name_;
    int dim_;
    MetricKind kind_;
    std::shared_ptr<FinslerEvaluator const> evaluator_;
    std::shared_ptr<RegionPredicate const> admissible_;
};

/// g_ij = 1/2 d^2(F^2)/dxi_i dxi_j at a pointed vector.
struct FundamentalTensor
{
    Matrix g;

    auto inner(Vector const& u, Vector const& w) const -> double { return u.dot(g * w); }
    auto norm_squared(Vector const& u) const -> double { return inner(u, u); }
    auto min_eigenvalue() const -> double;
};

/// Throws DomainError if x is outside the admissible region or xi vanishes.
void validate(MetricDescriptor const& metric, PointedVector const& pv);

auto finsler_eval(MetricDescriptor const& metric, PointedVector const& pv) -> double;

/// Throws ConvexityError when the smallest eigenvalue is not positive.
auto fundamental_tensor(MetricDescriptor const& metric, PointedVector const& pv) -> FundamentalTensor;

/// dF at (x, xi) with respect to xi.
auto fiber_gradient(MetricDescriptor const& metric, PointedVector const& pv) -> Vector;

/// d^2F at (x, xi) with respect to xi.
auto fiber_hessian(MetricDescriptor const& metric, PointedVector const& pv) -> Matrix;

/// Two evaluations of the pairing of U with xi: g_(x,xi)(xi, U) from the fundamental tensor, and
/// F(x, xi) * sum_r U^r dF/dxi_r from the first derivatives alone. Homogeneity makes them equal.
struct OrthogonalityPairing
{
    double tensor_form;
    double covector_form;

    auto discrepancy() const -> double;
};

auto orthogonality_residual(MetricDescriptor const& metric, PointedVector const& pv, Vector const& u)
    -> OrthogonalityPairing;

/// Jet variables for the 2n-variable (x, xi) layout.
auto lift_pointed(PointedVector const& pv, int order) -> std::vector<Jet>;

/// Constant jets of a vector in a given layout.
auto constant_jets(Vector const& v, int num_vars, int order) -> std::vector<Jet>;

auto jet_values(std::span<Jet const> jets) -> Vector;

}  // namespace zermelo
