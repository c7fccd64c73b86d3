#include "invstab/stabilizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "invstab/errors.hpp"

namespace invstab {

std::string_view ToString(ControlKind kind) {
  switch (kind) {
    case ControlKind::kPowerSum: return "power_sum";
    case ControlKind::kPowerProduct: return "power_product";
    case ControlKind::kCustom: return "custom";
  }
  return "unknown";
}

void ControlFunction::Validate() const {
  if (kind == ControlKind::kCustom) {
    if (!custom_eval) throw Error(ErrorCode::kInvalidArgument, "custom control needs an evaluator");
    return;
  }
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw Error(ErrorCode::kInvalidArgument, "control theta must be finite and >= 0");
  }
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::kInvalidArgument, "control exponent r must be positive");
  }
}

double ControlEval(const ControlFunction& phi, const Element& x, const Element& y) {
  if (!(x.spec() == y.spec())) throw Error(ErrorCode::kSpecMismatch, "control arguments differ");
  switch (phi.kind) {
    case ControlKind::kPowerSum:
      return phi.theta * (std::pow(Norm(x), phi.r) + std::pow(Norm(y), phi.r));
    case ControlKind::kPowerProduct:
      return phi.theta * std::pow(Norm(Mul(x, y)), phi.r);
    case ControlKind::kCustom: {
      const double v = phi.custom_eval(x, y);
      if (!(v >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "custom control returned < 0");
      return v;
    }
  }
  return 0.0;
}

double ControlAtZero(const ControlFunction& phi, const Element& x) {
  switch (phi.kind) {
    case ControlKind::kPowerSum:
      return phi.theta * std::pow(Norm(x), phi.r);
    case ControlKind::kPowerProduct:
      return 0.0;
    case ControlKind::kCustom:
      return ControlEval(phi, x, Element::Zero(x.spec()));
  }
  return 0.0;
}

ScalingDirection DirectionForPowerSum(double r) {
  if (r < 1.0) {
    const double l = std::exp2(r - 1.0);
    return {2.0, 0, l, l, {}};
  }
  if (r > 1.0) {
    const double l = std::exp2(1.0 - r);
    return {0.5, 1, l, l, {}};
  }
  throw Error(ErrorCode::kNoContraction, "power-sum control with r = 1 gives L = 1 in both directions");
}

ScalingDirection DirectionForPowerProduct(double r) {
  if (r < 0.5) {
    const double l = std::exp2(2.0 * r - 1.0);
    return {2.0, 0, l, l, {}};
  }
  if (r > 0.5) {
    const double l = std::exp2(1.0 - 2.0 * r);
    return {0.5, 1, l, l, {}};
  }
  throw Error(ErrorCode::kNoContraction,
              "power-product control with r = 1/2 gives L = 1 in both directions");
}

namespace {

// sup phi(q x, q y) / (q phi(x, y)) over the samples.
double MeasuredLipschitz(const ControlFunction& phi, double q,
                         const std::vector<std::pair<Element, Element>>& samples) {
  double worst = 0.0;
  for (const auto& [x, y] : samples) {
    const ExtReal ratio = SafeRatio(ControlEval(phi, Scale(q, x), Scale(q, y)),
                                    q * ControlEval(phi, x, y));
    if (ratio.is_infinite()) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, ratio.value());
  }
  return worst;
}

}  // namespace

ScalingDirection SelectDirection(const ControlFunction& phi,
                                 const std::vector<std::pair<Element, Element>>& samples) {
  phi.Validate();
  ScalingDirection dir;
  switch (phi.kind) {
    case ControlKind::kPowerSum:
      dir = DirectionForPowerSum(phi.r);
      break;
    case ControlKind::kPowerProduct:
      dir = DirectionForPowerProduct(phi.r);
      break;
    case ControlKind::kCustom: {
      if (samples.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "custom control needs sample pairs to estimate L");
      }
      constexpr double kSafety = 1.05;
      const double up = MeasuredLipschitz(phi, 2.0, samples);
      const double down = MeasuredLipschitz(phi, 0.5, samples);
      const double up_l = up * kSafety;
      const double down_l = down * kSafety;
      if (!(up_l < 1.0) && !(down_l < 1.0)) {
        throw Error(ErrorCode::kNoContraction, "measured L >= 1 for both q = 2 and q = 1/2");
      }
      if (up_l <= down_l) return {2.0, 0, up_l, {}, up};
      return {0.5, 1, down_l, {}, down};
    }
  }
  if (!samples.empty()) dir.measured_lipschitz = MeasuredLipschitz(phi, dir.q, samples);
  return dir;
}

StabilizationTrace StabilizePoint(const ApproxMap& f, const ScalingDirection& dir, const Element& x,
                                  const StabilizeOptions& opts) {
  if (opts.max_n < 1) throw Error(ErrorCode::kInvalidArgument, "max_n must be >= 1");
  if (!(opts.tol_rel > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tol_rel must be > 0");
  if (dir.q != 2.0 && dir.q != 0.5) throw Error(ErrorCode::kInvalidArgument, "q must be 2 or 1/2");

  auto check_size = [&](const Element& e, int n, const char* what) {
    if (!e.AllFinite() || Norm(e) > opts.overflow_norm) {
      throw Error(ErrorCode::kOverflow, std::string(what) + " norm exceeds " +
                                            std::to_string(opts.overflow_norm) + " at n = " +
                                            std::to_string(n));
    }
  };

  StabilizationTrace trace{x, {}, {}, {}, Element::Zero(x.spec()), 0, false};
  std::vector<SplitValue> parts;
  std::vector<double> iterate_norms;

  Element arg = x;
  double inv_scale = 1.0;  // q^{-n}, exact: powers of two
  for (int n = 0; n <= opts.max_n; ++n) {
    check_size(arg, n, "argument");
    SplitValue sv = f.EvalSplit(arg);
    SplitValue a{Scale(inv_scale, sv.base), Scale(inv_scale, sv.perturbation)};
    Element sum = a.Sum();
    check_size(sum, n, "iterate");
    iterate_norms.push_back(Norm(sum));
    trace.iterates.push_back(std::move(sum));
    parts.push_back(std::move(a));

    if (n > 0) {
      const SplitValue& prev = parts[n - 1];
      const SplitValue& cur = parts[n];
      const double diff =
          Norm(Add(Sub(cur.base, prev.base), Sub(cur.perturbation, prev.perturbation)));
      trace.diffs.push_back(diff);
      const double floor = opts.tol_rel * std::max(1.0, iterate_norms[n - 1]);
      if (diff <= floor) {
        trace.converged = true;
        trace.n_used = n;
        break;
      }
      const int w = opts.cauchy_window;
      const int k = n - 1;
      if (k >= w && diff >= trace.diffs[k - w]) {
        throw Error(ErrorCode::kNonCauchy, "successive differences stopped decreasing at n = " +
                                               std::to_string(k));
      }
    }
    trace.n_used = n;
    arg = Scale(dir.q, arg);
    inv_scale /= dir.q;
  }

  const SplitValue& last = parts[trace.n_used];
  trace.result = trace.iterates[trace.n_used];
  for (const auto& p : parts) {
    trace.errors_vs_limit.push_back(
        Norm(Add(Sub(p.base, last.base), Sub(p.perturbation, last.perturbation))));
  }
  return trace;
}

ElementMap StabilizedMap(const ApproxMap& f, const ScalingDirection& dir,
                         const StabilizeOptions& opts) {
  return [f, dir, opts](const Element& x) { return StabilizePoint(f, dir, x, opts).result; };
}

double ErrorBoundCoefficient(const ScalingDirection& dir) {
  const double l = dir.lipschitz;
  return std::pow(l, 1 - dir.index) / (1.0 - l);
}

double ErrorBound(const ScalingDirection& dir, const ControlFunction& phi, const Element& x) {
  return ErrorBoundCoefficient(dir) * ControlAtZero(phi, x);
}

CorollaryConstant CorollaryConstantFor(double r, CorollaryRegime regime) {
  switch (regime) {
    case CorollaryRegime::kSumRLessThanOne: {
      if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCode::kOutOfRange, "regime needs 0 < r < 1");
      const double derived = ErrorBoundCoefficient(DirectionForPowerSum(r));
      const double stated = 2.0 / (2.0 - std::exp2(r));
      return {derived, stated, stated < 0.0};
    }
    case CorollaryRegime::kSumRGreaterThanOne: {
      if (!(r > 1.0) || !std::isfinite(r)) throw Error(ErrorCode::kOutOfRange, "regime needs r > 1");
      const double derived = ErrorBoundCoefficient(DirectionForPowerSum(r));
      const double stated = std::exp2(r) / (2.0 - std::exp2(r));
      return {derived, stated, stated < 0.0};
    }
    case CorollaryRegime::kProduct:
      if (!(r > 0.0) || r == 0.5 || !std::isfinite(r)) {
        throw Error(ErrorCode::kOutOfRange, "product regime needs r > 0, r != 1/2");
      }
      return {0.0, 0.0, false};
  }
  return {};
}

double InvolutivityResidual(const ApproxMap& f, const ScalingDirection& dir, const Element& x,
                            const StabilizeOptions& opts) {
  const Element y = StabilizePoint(f, dir, x, opts).result;
  const Element z = StabilizePoint(f, dir, y, opts).result;
  return Norm(Sub(z, x));
}

}  // namespace invstab
