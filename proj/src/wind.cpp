#include "zermelo/wind.hpp"

#include <stdexcept>

namespace zermelo {

WindField::WindField(std::string name, int dim, VectorFieldEvaluator evaluator, std::optional<ClosedFormFlow> flow)
    : name_{std::move(name)}, dim_{dim}, evaluator_{std::make_shared<VectorFieldEvaluator const>(std::move(evaluator))},
      flow_{flow ? std::make_shared<ClosedFormFlow const>(std::move(*flow)) : nullptr}
{
    if (dim_ < 1 || dim_ > kMaxJetVars) throw std::invalid_argument("wind: unsupported dimension");
}

auto WindField::evaluate(std::span<Jet const> x) const -> std::vector<Jet>
{
    auto v = (*evaluator_)(x);
    if (static_cast<int>(v.size()) != dim_) throw std::logic_error("wind " + name_ + " returned wrong dimension");
    return v;
}

auto WindField::operator()(Vector const& x) const -> Vector
{
    auto const xs = constant_jets(x, 1, 0);
    return jet_values(evaluate(xs));
}

auto WindField::jacobian(Vector const& x) const -> Matrix
{
    std::vector<Jet> xs;
    for (int i = 0; i < dim_; ++i) xs.push_back(Jet::variable(dim_, 1, i, x[i]));
    auto const v = evaluate(xs);
    Matrix d(dim_, dim_);
    for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) d(r, c) = v[r].gradient_entry(c);
    return d;
}

}  // namespace zermelo
