#pragma once

#include "zermelo/metric.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace zermelo {

using VectorFieldEvaluator = std::function<std::vector<Jet>(std::span<Jet const> x)>;

/// Closed-form flow of a vector field together with its differential in the base point.
struct ClosedFormFlow
{
    std::function<Vector(Vector const& x, double t)> map;
    std::function<Matrix(Vector const& x, double t)> differential;
};

/// Smooth vector field x -> v(x), the translation applied to the unit balls.
class WindField
{
  public:
    WindField(std::string name, int dim, VectorFieldEvaluator evaluator, std::optional<ClosedFormFlow> flow = {});

    auto name() const -> std::string const& { return name_; }
    auto dim() const noexcept -> int { return dim_; }

    auto evaluate(std::span<Jet const> x) const -> std::vector<Jet>;
    auto operator()(Vector const& x) const -> Vector;

    /// Dv at x, rows indexed by component.
    auto jacobian(Vector const& x) const -> Matrix;

    auto closed_form() const -> ClosedFormFlow const* { return flow_ ? flow_.get() : nullptr; }

  private:
    std::string name_;
    int dim_;
    std::shared_ptr<VectorFieldEvaluator const> evaluator_;
    std::shared_ptr<ClosedFormFlow const> flow_;
};

}  // namespace zermelo
