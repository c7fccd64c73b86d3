#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "invstab/algebra.hpp"

namespace invstab {

enum class ControlKind { kPowerSum, kPowerProduct, kCustom };
std::string_view ToString(ControlKind kind);

// The perturbation envelope phi(x, y).
//   PowerSum      theta (|x|^r + |y|^r)
//   PowerProduct  theta |xy|^r
//   Custom        custom_eval(x, y)
struct ControlFunction {
  ControlKind kind = ControlKind::kPowerSum;
  double theta = 0.0;
  double r = 0.5;
  std::function<double(const Element&, const Element&)> custom_eval;

  static ControlFunction PowerSum(double theta, double r) {
    return {ControlKind::kPowerSum, theta, r, {}};
  }
  static ControlFunction PowerProduct(double theta, double r) {
    return {ControlKind::kPowerProduct, theta, r, {}};
  }
  static ControlFunction Custom(std::function<double(const Element&, const Element&)> fn) {
    return {ControlKind::kCustom, 0.0, 0.0, std::move(fn)};
  }

  void Validate() const;
};

double ControlEval(const ControlFunction& phi, const Element& x, const Element& y);

// phi(x, 0)
double ControlAtZero(const ControlFunction& phi, const Element& x);

// q = 2 with index 0, or q = 1/2 with index 1; L is the Lipschitz constant
// of the scaling operator g -> g(q .)/q in the phi-weighted metric.
struct ScalingDirection {
  double q = 2.0;
  int index = 0;
  double lipschitz = 0.5;
  // Analytic L when the control kind has one.
  std::optional<double> analytic_lipschitz;
  // Empirical sup of phi(qx,qy) / (q phi(x,y)) when it was measured.
  std::optional<double> measured_lipschitz;
};

// Custom controls need sample pairs to estimate L; analytic kinds ignore them.
ScalingDirection SelectDirection(const ControlFunction& phi,
                                 const std::vector<std::pair<Element, Element>>& samples = {});

// Analytic scaling direction rules for the power controls.
ScalingDirection DirectionForPowerSum(double r);
ScalingDirection DirectionForPowerProduct(double r);

}  // namespace invstab
