#include "zermelo/finite_difference.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace zermelo {
namespace {

struct Stencil
{
    std::array<int, 5> offsets;
    std::array<double, 5> weights;
    int count;
};

// Central stencils with O(h^2) error; weights are for a unit step.
auto stencil_for(int derivative_order) -> Stencil
{
    switch (derivative_order) {
    case 0: return {{0, 0, 0, 0, 0}, {1, 0, 0, 0, 0}, 1};
    case 1: return {{-1, 1, 0, 0, 0}, {-0.5, 0.5, 0, 0, 0}, 2};
    case 2: return {{-1, 0, 1, 0, 0}, {1, -2, 1, 0, 0}, 3};
    case 3: return {{-2, -1, 1, 2, 0}, {-0.5, 1, -1, 0.5, 0}, 4};
    case 4: return {{-2, -1, 0, 1, 2}, {1, -4, 6, -4, 1}, 5};
    default: throw std::invalid_argument("fd_oracle: derivative order above 4");
    }
}

auto central_difference(ScalarFunction const& f, std::span<double const> point, MultiIndex const& alpha, double h)
    -> double
{
    auto const n = point.size();
    std::vector<Stencil> stencils;
    std::vector<std::size_t> vars;
    for (std::size_t v = 0; v < n; ++v) {
        if (alpha[v] == 0) continue;
        stencils.push_back(stencil_for(alpha[v]));
        vars.push_back(v);
    }
    std::vector<double> x(point.begin(), point.end());
    double scale = 1.0;
    for (std::size_t v = 0; v < n; ++v) scale *= std::pow(h, alpha[v]);

    // Odometer over the tensor-product stencil.
    std::vector<int> pos(stencils.size(), 0);
    double sum = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t s = 0; s < stencils.size(); ++s) {
            w *= stencils[s].weights[pos[s]];
            x[vars[s]] = point[vars[s]] + stencils[s].offsets[pos[s]] * h;
        }
        sum += w * f(x);
        std::size_t s = 0;
        for (; s < stencils.size(); ++s) {
            if (++pos[s] < stencils[s].count) break;
            pos[s] = 0;
        }
        if (s == stencils.size()) break;
    }
    return sum / scale;
}

}  // namespace

auto fd_oracle(ScalarFunction const& f, std::span<double const> point, MultiIndex const& alpha,
               FdOptions const& options) -> double
{
    if (!(options.step > 0.0)) throw std::invalid_argument("fd_oracle: step must be positive");
    if (multi_index_degree(alpha) > 4) throw std::invalid_argument("fd_oracle: total degree above 4");
    for (std::size_t v = point.size(); v < alpha.size(); ++v)
        if (alpha[v] != 0) throw std::invalid_argument("fd_oracle: multi-index refers to a missing variable");
    auto const coarse = central_difference(f, point, alpha, options.step);
    if (!options.richardson) return coarse;
    auto const fine = central_difference(f, point, alpha, 0.5 * options.step);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace zermelo
