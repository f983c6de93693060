#pragma once

#include <stdexcept>
#include <string>

namespace zermelo {

/// Evaluation outside a function's admissible region (sqrt of a negative constant term, chart exit, ...).
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

/// The wind violates F(x, -v(x)) < 1.
class AdmissibilityError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Fundamental tensor not positive definite.
class ConvexityError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class DegenerateFlagError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace zermelo
