#pragma once

/// \file jet.hpp
/// Truncated multivariate Taylor arithmetic.
///
/// A Jet stores the Taylor coefficients c_a = f^(a)(p) / a! of a scalar function at an expansion point p for
/// every multi-index a with |a| <= order. Arithmetic on Jets is exact up to the truncation order, so derivatives
/// of composite expressions come out without truncation error. Multi-indices are enumerated in graded order,
/// which makes the coefficients of a lower-order Jet a prefix of the higher-order ones.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace zermelo {

inline constexpr int kMaxJetVars = 6;
inline constexpr int kMaxJetOrder = 4;

using MultiIndex = std::array<std::uint8_t, kMaxJetVars>;

namespace detail {

struct JetLayout;

auto jet_layout(int num_vars, int order) -> JetLayout const&;

}  // namespace detail

class Jet
{
  public:
    /// Constant jet.
    Jet(int num_vars, int order, double value = 0.0);

    /// The coordinate function u_index expanded at `value`.
    static auto variable(int num_vars, int order, int index, double value) -> Jet;

    auto num_vars() const noexcept -> int;
    auto order() const noexcept -> int;
    auto size() const noexcept -> std::size_t { return coeffs_.size(); }

    auto value() const noexcept -> double { return coeffs_[0]; }

    /// Taylor coefficient f^(a)/a!. Zero when |a| exceeds the order.
    auto coeff(MultiIndex const& alpha) const -> double;

    /// Partial derivative f^(a) at the expansion point.
    auto derivative(MultiIndex const& alpha) const -> double;

    auto gradient_entry(int var) const -> double;
    auto hessian_entry(int var_a, int var_b) const -> double;

    /// Jet of df/du_var, one order lower.
    auto partial(int var) const -> Jet;

    auto truncated(int order) const -> Jet;

    auto coeffs() const noexcept -> std::span<double const> { return coeffs_; }
    auto multi_index(std::size_t position) const -> MultiIndex const&;

    auto operator-() const -> Jet;
    auto operator+=(Jet const& rhs) -> Jet&;
    auto operator-=(Jet const& rhs) -> Jet&;
    auto operator*=(Jet const& rhs) -> Jet&;
    auto operator/=(Jet const& rhs) -> Jet&;
    auto operator+=(double rhs) -> Jet&;
    auto operator-=(double rhs) -> Jet&;
    auto operator*=(double rhs) -> Jet&;
    auto operator/=(double rhs) -> Jet&;

    friend auto operator*(Jet const& lhs, Jet const& rhs) -> Jet;

    /// Composes g(this) given the Taylor coefficients g^(k)(value)/k! of a univariate g, k = 0..order.
    auto compose(std::span<double const> taylor) const -> Jet;

  private:
    Jet(detail::JetLayout const* layout, std::vector<double> coeffs);

    detail::JetLayout const* layout_;
    std::vector<double> coeffs_;
};

auto operator+(Jet lhs, Jet const& rhs) -> Jet;
auto operator-(Jet lhs, Jet const& rhs) -> Jet;
auto operator/(Jet const& lhs, Jet const& rhs) -> Jet;
auto operator+(Jet lhs, double rhs) -> Jet;
auto operator+(double lhs, Jet rhs) -> Jet;
auto operator-(Jet lhs, double rhs) -> Jet;
auto operator-(double lhs, Jet const& rhs) -> Jet;
auto operator*(Jet lhs, double rhs) -> Jet;
auto operator*(double lhs, Jet rhs) -> Jet;
auto operator/(Jet lhs, double rhs) -> Jet;
auto operator/(double lhs, Jet const& rhs) -> Jet;

auto reciprocal(Jet const& x) -> Jet;
auto sqrt(Jet const& x) -> Jet;
auto pow(Jet const& x, double exponent) -> Jet;
auto exp(Jet const& x) -> Jet;
auto log(Jet const& x) -> Jet;
auto sin(Jet const& x) -> Jet;
auto cos(Jet const& x) -> Jet;

using JetFunction = std::function<Jet(std::span<Jet const>)>;
using ScalarFunction = std::function<double(std::span<double const>)>;

/// All partial derivatives of f at `point` up to `order`.
auto eval_jet(JetFunction const& f, std::span<double const> point, int order) -> Jet;

/// Scalar evaluation of a Jet-generic function through order-0 jets.
auto eval_scalar(JetFunction const& f, std::span<double const> point) -> double;

auto multi_index_degree(MultiIndex const& alpha) noexcept -> int;
auto multi_index_factorial(MultiIndex const& alpha) noexcept -> double;

}  // namespace zermelo
