#pragma once

#include "zermelo/jet.hpp"

#include <span>

namespace zermelo {

struct FdOptions
{
    double step = 1e-4;
    bool richardson = false;  ///< combine steps h and h/2 to cancel the O(h^2) term
};

/// Central finite-difference estimate of the partial derivative d^a f at `point`, |a| <= 4.
///
/// Each variable gets the second-order accurate central stencil for its own derivative order and the
/// stencils are applied as a tensor product. Kept independent of the Jet arithmetic so it can serve as
/// an oracle for it.
auto fd_oracle(ScalarFunction const& f, std::span<double const> point, MultiIndex const& alpha,
               FdOptions const& options = {}) -> double;

}  // namespace zermelo
