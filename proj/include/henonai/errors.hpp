#pragma once

#include <stdexcept>
#include <string>

namespace henonai {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error { using Error::Error; };
struct ZeroJacobian : Error { using Error::Error; };
struct NotHyperbolic : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct NotOnLambda : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SingularJacobian : Error { using Error::Error; };
struct SingularAnchorJacobian : Error { using Error::Error; };
struct Divergence : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace henonai
