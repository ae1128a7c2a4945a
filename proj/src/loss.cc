#include "swreg/loss.hpp"

#include <cmath>

#include "swreg/errors.hpp"

namespace swreg {

namespace {

// log(1 + exp(z)) without overflow
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

RoundLoss::RoundLoss(LogisticLoss loss) : loss_(std::move(loss)) {
  const auto& l = std::get<LogisticLoss>(loss_);
  if (l.instance.size() < 1 || !l.instance.allFinite()) throw InvalidInput("logistic loss: bad instance");
  if (l.label != 1.0 && l.label != -1.0) throw InvalidInput("logistic loss: label must be -1 or +1");
}

RoundLoss::RoundLoss(LinearLoss loss) : loss_(std::move(loss)) {
  const auto& l = std::get<LinearLoss>(loss_);
  if (l.coefficients.size() < 1 || !l.coefficients.allFinite()) {
    throw InvalidInput("linear loss: bad coefficients");
  }
}

RoundLoss RoundLoss::logistic(Vector instance, double label) {
  return RoundLoss(LogisticLoss{std::move(instance), label});
}

RoundLoss RoundLoss::linear(Vector coefficients) { return RoundLoss(LinearLoss{std::move(coefficients)}); }

int RoundLoss::dimension() const {
  return std::visit(Overloaded{[](const LogisticLoss& l) { return static_cast<int>(l.instance.size()); },
                               [](const LinearLoss& l) { return static_cast<int>(l.coefficients.size()); }},
                    loss_);
}

double RoundLoss::value(const Vector& x) const {
  if (x.size() != dimension()) throw InvalidInput("loss value: dimension mismatch");
  return std::visit(Overloaded{[&](const LogisticLoss& l) { return softplus(-l.label * l.instance.dot(x)); },
                               [&](const LinearLoss& l) { return l.coefficients.dot(x); }},
                    loss_);
}

Vector RoundLoss::gradient(const Vector& x) const {
  if (x.size() != dimension()) throw InvalidInput("loss gradient: dimension mismatch");
  return std::visit(Overloaded{[&](const LogisticLoss& l) -> Vector {
                                 const double margin = l.label * l.instance.dot(x);
                                 return (-l.label * sigmoid(-margin)) * l.instance;
                               },
                               [](const LinearLoss& l) -> Vector { return l.coefficients; }},
                    loss_);
}

double RoundLoss::lipschitz_gradient() const {
  return std::visit(Overloaded{[](const LogisticLoss& l) { return 0.25 * l.instance.squaredNorm(); },
                               [](const LinearLoss&) { return 0.0; }},
                    loss_);
}

double RoundLoss::gradient_bound(const Domain& domain) const {
  if (domain.dimension() != dimension()) throw InvalidInput("loss gradient bound: dimension mismatch");
  return std::visit(Overloaded{[](const LogisticLoss& l) { return l.instance.norm(); },
                               [](const LinearLoss& l) { return l.coefficients.norm(); }},
                    loss_);
}

}  // namespace swreg
