#pragma once

// The scaling-limit construction I(x) = lim q^{-n} f(q^n x) and the
// quantities that control it.

#include <cstddef>
#include <vector>

#include "invstab/algebra.hpp"
#include "invstab/control.hpp"
#include "invstab/fixedpoint.hpp"
#include "invstab/maps.hpp"

namespace invstab {

struct StabilizeOptions {
  int max_n = 48;
  double tol_rel = 1e-10;
  // Iterate or argument norms above this abort with Overflow.
  double overflow_norm = 1e300;
  // NonCauchy fires when a difference fails to drop below the one this many
  // steps earlier.
  int cauchy_window = 8;
};

struct StabilizationTrace {
  Element x;
  // a_n = q^{-n} f(q^n x), n = 0..n_used
  std::vector<Element> iterates;
  // |a_{n+1} - a_n|, n = 0..n_used-1
  std::vector<double> diffs;
  // |a_n - result|, n = 0..n_used
  std::vector<double> errors_vs_limit;
  Element result;
  int n_used = 0;
  // True when a difference met tol_rel * max(1, |a_n|) before max_n.
  bool converged = false;
};

// Differences are formed separately for the involution and perturbation
// parts of f, which avoids cancellation against the dominant term. Throws
// Overflow or NonCauchy.
StabilizationTrace StabilizePoint(const ApproxMap& f, const ScalingDirection& dir, const Element& x,
                                  const StabilizeOptions& opts = {});

// x -> StabilizePoint(f, dir, x, opts).result
ElementMap StabilizedMap(const ApproxMap& f, const ScalingDirection& dir,
                         const StabilizeOptions& opts = {});

// L^{1-i} / (1 - L) * phi(x, 0)
double ErrorBound(const ScalingDirection& dir, const ControlFunction& phi, const Element& x);

// Coefficient multiplying L^{1-i}/(1-L), i.e. ErrorBound = coefficient * phi(x, 0).
double ErrorBoundCoefficient(const ScalingDirection& dir);

enum class CorollaryRegime { kSumRLessThanOne, kSumRGreaterThanOne, kProduct };

struct CorollaryConstant {
  // L^{1-i}/(1-L), the coefficient of theta |x|^r that actually follows.
  double derived = 0.0;
  // The coefficient as printed in the published corollary statement:
  // 2/(2-2^r) for r < 1, 2^r/(2-2^r) for r > 1, and 0 for the product case.
  double stated = 0.0;
  // The printed r > 1 coefficient is negative; it is reported, not corrected.
  bool stated_sign_anomaly = false;
};

CorollaryConstant CorollaryConstantFor(double r, CorollaryRegime regime);

// |I(I(x)) - x| with I the finite-depth scaling limit.
double InvolutivityResidual(const ApproxMap& f, const ScalingDirection& dir, const Element& x,
                            const StabilizeOptions& opts = {});

}  // namespace invstab
