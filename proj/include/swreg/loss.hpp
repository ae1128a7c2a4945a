#pragma once

#include <variant>

#include "swreg/domain.hpp"

namespace swreg {

/// f(x) = log(1 + exp(-y a^T x)), y in {-1, +1}.
struct LogisticLoss {
  Vector instance;
  double label = 1.0;
};

/// f(x) = <v, x>.
struct LinearLoss {
  Vector coefficients;
};

/// One round's loss f_t. Cheap to copy relative to an episode; streams hold
/// them by value.
class RoundLoss {
 public:
  RoundLoss(LogisticLoss loss);  // NOLINT(google-explicit-constructor)
  RoundLoss(LinearLoss loss);    // NOLINT(google-explicit-constructor)

  static RoundLoss logistic(Vector instance, double label);
  static RoundLoss linear(Vector coefficients);

  bool is_logistic() const noexcept { return std::holds_alternative<LogisticLoss>(loss_); }
  bool is_linear() const noexcept { return std::holds_alternative<LinearLoss>(loss_); }
  const LogisticLoss& as_logistic() const { return std::get<LogisticLoss>(loss_); }
  const LinearLoss& as_linear() const { return std::get<LinearLoss>(loss_); }

  int dimension() const;

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  /// Lipschitz constant of the gradient: ||a||^2 / 4 for logistic, 0 for linear.
  double lipschitz_gradient() const;

  /// Bound on ||grad f|| over the domain.
  double gradient_bound(const Domain& domain) const;

 private:
  std::variant<LogisticLoss, LinearLoss> loss_;
};

}  // namespace swreg
