#pragma once

// Generalized metric spaces (distances in [0, +inf]) and the fixed-point
// alternative for strict contractions on them: either every consecutive
// orbit distance is infinite, or from some index n0 on the orbit is finite,
// converges to a fixed point y*, and d(y, y*) <= d(T y, y) / (1 - L).
//
// Also the weighted sup-metric on maps E -> E,
//   d(g, h) = inf { c : |g(x) - h(x)| <= c phi(x, 0) for all x },
// estimated over a probe set, and the scaling operator g -> g(q .)/q.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "invstab/algebra.hpp"
#include "invstab/control.hpp"
#include "invstab/errors.hpp"
#include "invstab/ext_real.hpp"

namespace invstab {

template <class P>
struct GeneralizedMetricSpace {
  std::string name;
  std::function<ExtReal(const P&, const P&)> distance;
  std::function<bool(const P&, const P&)> same = [](const P& a, const P& b) { return a == b; };
};

enum class MetricAxiom { kNone, kM1, kM2, kM3 };

struct GMetricReport {
  bool pass = true;
  MetricAxiom failed = MetricAxiom::kNone;
  // Index of the first failing triple and which of its points the witness uses.
  std::size_t triple_index = 0;
  std::string detail;
};

template <class P>
struct Triple {
  P x, y, z;
};

// Checks M1 (d = 0 exactly on the diagonal), M2 (symmetry) and M3 (triangle
// inequality, infinity absorbing) on each triple. A distance that cannot be
// represented in [0, inf] at a diagonal pair counts as an M1 failure.
template <class P>
GMetricReport GMetricCheck(const GeneralizedMetricSpace<P>& space,
                           const std::vector<Triple<P>>& triples, double rel_slack = 1e-12) {
  if (triples.empty()) throw Error(ErrorCode::kInvalidArgument, "need at least one triple");
  auto fail = [](MetricAxiom ax, std::size_t i, std::string detail) {
    return GMetricReport{false, ax, i, std::move(detail)};
  };
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& [x, y, z] = triples[i];
    for (const P* p : {&x, &y, &z}) {
      try {
        if (space.distance(*p, *p) != ExtReal(0.0)) return fail(MetricAxiom::kM1, i, "d(p,p) != 0");
      } catch (const std::domain_error& e) {
        return fail(MetricAxiom::kM1, i, std::string("d(p,p) outside [0,inf]: ") + e.what());
      }
    }
    ExtReal dxy, dyx, dyz, dxz;
    try {
      dxy = space.distance(x, y);
      dyx = space.distance(y, x);
      dyz = space.distance(y, z);
      dxz = space.distance(x, z);
    } catch (const std::domain_error& e) {
      return fail(MetricAxiom::kM1, i, std::string("distance outside [0,inf]: ") + e.what());
    }
    if ((dxy == ExtReal(0.0)) != space.same(x, y)) {
      return fail(MetricAxiom::kM1, i, "d(x,y) = 0 does not match x == y");
    }
    if (dxy != dyx) return fail(MetricAxiom::kM2, i, "d(x,y) != d(y,x)");
    const ExtReal rhs = dxy + dyz;
    if (rhs.is_finite() && (dxz.is_infinite() || dxz.value() > rhs.value() * (1.0 + rel_slack))) {
      return fail(MetricAxiom::kM3, i, "d(x,z) > d(x,y) + d(y,z)");
    }
  }
  return {};
}

enum class AlternativeBranch { kAllInfinite, kConverged };

template <class P>
struct AlternativeOutcome {
  AlternativeBranch branch = AlternativeBranch::kAllInfinite;
  std::optional<P> fixed_point;
  // First n with d(T^n x, T^{n+1} x) finite.
  std::optional<std::size_t> n0;
  std::vector<ExtReal> orbit_distances;
  // d(T y, y) / (1 - L) for y = T^{n0} x; infinite when n0 is absent.
  ExtReal aposteriori_bound = ExtReal::Infinity();
  std::size_t iterations = 0;
};

struct AlternativeOptions {
  std::size_t max_iter = 64;
  double tol = 1e-10;
};

inline ExtReal AposterioriBound(double lipschitz, ExtReal d_ty_y) {
  if (!(lipschitz > 0.0 && lipschitz < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "Lipschitz constant must lie in (0,1)");
  }
  if (d_ty_y.is_infinite()) return d_ty_y;
  return ExtReal(d_ty_y.value() / (1.0 - lipschitz));
}

// Runs the orbit x0, T x0, T^2 x0, ... and classifies it. Throws
// NotContractive when a finite consecutive distance exceeds L times its
// predecessor (1e-9 relative slack), Exhausted when distances are finite but
// tol is not met within max_iter.
template <class P, class Map>
AlternativeOutcome<P> IterateAlternative(const Map& t, const P& x0, double lipschitz,
                                         const GeneralizedMetricSpace<P>& space,
                                         const AlternativeOptions& opts = {}) {
  if (!(lipschitz > 0.0 && lipschitz < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "Lipschitz constant must lie in (0,1)");
  }
  if (opts.max_iter < 1) throw Error(ErrorCode::kInvalidArgument, "max_iter must be >= 1");

  AlternativeOutcome<P> out;
  P current = x0;
  for (std::size_t n = 0; n < opts.max_iter; ++n) {
    P next = t(current);
    const ExtReal d = space.distance(current, next);
    out.orbit_distances.push_back(d);
    out.iterations = n + 1;
    if (d.is_finite()) {
      if (!out.n0) {
        out.n0 = n;
        out.aposteriori_bound = AposterioriBound(lipschitz, d);
      } else {
        const ExtReal& prev = out.orbit_distances[n - 1];
        if (d.value() > lipschitz * prev.value() * (1.0 + 1e-9)) {
          throw Error(ErrorCode::kNotContractive,
                      "orbit distance ratio exceeds L at step " + std::to_string(n));
        }
      }
      if (d.value() <= opts.tol) {
        out.branch = AlternativeBranch::kConverged;
        out.fixed_point = current;
        return out;
      }
    } else if (out.n0) {
      throw Error(ErrorCode::kNotContractive, "orbit distance became infinite after n0");
    }
    current = std::move(next);
  }
  if (out.n0) {
    throw Error(ErrorCode::kExhausted, "orbit distances finite but tolerance unmet");
  }
  out.branch = AlternativeBranch::kAllInfinite;
  return out;
}

using ElementMap = std::function<Element(const Element&)>;

// Probe points organised as rays {q^k x0 : k = 0..K}. The scaling operator
// maps every probe except the last on each ray onto another probe.
class FunctionSpaceMetric {
 public:
  FunctionSpaceMetric(ControlFunction control, double q, std::vector<std::vector<Element>> rays);

  // Rays q^k x0, k = 0..depth, through each base point.
  static FunctionSpaceMetric FromBasePoints(ControlFunction control, double q,
                                            const std::vector<Element>& base_points,
                                            std::size_t depth);

  const ControlFunction& control() const { return control_; }
  double q() const { return q_; }
  std::vector<Element> Probes() const;
  // Probes whose q-image is still a probe.
  std::vector<Element> InteriorProbes() const;

 private:
  ControlFunction control_;
  double q_;
  std::vector<std::vector<Element>> rays_;
};

// max over probes of |g(x) - h(x)| / phi(x, 0), 0/0 := 0, pos/0 := inf.
// A lower estimate of the true supremum over E.
ExtReal FunctionSpaceDistance(const ElementMap& g, const ElementMap& h,
                              const std::vector<Element>& probes, const ControlFunction& control);

inline ExtReal FunctionSpaceDistance(const ElementMap& g, const ElementMap& h,
                                     const FunctionSpaceMetric& m) {
  return FunctionSpaceDistance(g, h, m.Probes(), m.control());
}

// x -> g(q x) / q
ElementMap ScalingOperator(ElementMap g, double q);

}  // namespace invstab
