#pragma once

#include <stdexcept>
#include <string>

namespace plyap {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation at a pole (cot_p at multiples of pi_p, coth_p at zero).
class pole_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// Shooting trajectory left the representable regime.
class overflow_error : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace plyap
