#pragma once

// Candidate maps f: E -> E built from a reference involution plus a radial
// perturbation, and the defect functionals the stability hypotheses bound.

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "invstab/algebra.hpp"

namespace invstab {

class InvolutionKind {
 public:
  enum class Tag { kAdjoint, kTwistedAdjoint, kConjugation };

  static InvolutionKind Adjoint() { return InvolutionKind(Tag::kAdjoint); }
  static InvolutionKind Conjugation() { return InvolutionKind(Tag::kConjugation); }
  // x -> s^{-1} x^* s. Requires s Hermitian with smallest singular value
  // above 1e-8; the inverse is computed once here.
  static InvolutionKind TwistedAdjoint(const Element& s);

  Tag tag() const { return tag_; }
  std::string_view name() const;
  const std::optional<Element>& twist() const { return s_; }
  const std::optional<Element>& twist_inverse() const { return s_inv_; }

  // Throws KindSpecMismatch when this kind cannot act on `spec`.
  void CheckSpec(const AlgebraSpec& spec) const;

 private:
  explicit InvolutionKind(Tag tag) : tag_(tag) {}

  Tag tag_;
  std::optional<Element> s_;
  std::optional<Element> s_inv_;
};

Element EvalInvolution(const InvolutionKind& kind, const Element& x);

enum class PerturbationKind { kNone, kFixedDirectionRadial, kRandomDirectionRadial };

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kNone;
  double theta_delta = 0.0;
  double r = 1.0;
  std::uint64_t direction_seed = 0;
  // Overrides the seeded unit direction of FixedDirectionRadial. Must have
  // unit norm.
  std::optional<Element> direction;

  void Validate() const;
};

// The unit direction FixedDirectionRadial uses on `spec`.
Element FixedDirection(const PerturbationSpec& p, const AlgebraSpec& spec);

// theta_delta * |x|^r * u, with u fixed or a deterministic function of x.
Element EvalPerturbation(const PerturbationSpec& p, const Element& x);

// The pieces of f(x) = involution(x) + perturbation(x), kept apart so the
// scaling limit can difference each part without cancellation against the
// (much larger) involution term.
struct SplitValue {
  Element base;
  Element perturbation;
  Element Sum() const { return Add(base, perturbation); }
};

class ApproxMap {
 public:
  using RawFn = std::function<Element(const Element&)>;

  ApproxMap(InvolutionKind base, PerturbationSpec perturbation, AlgebraSpec spec);
  // Opaque map; f(0) = 0 is enforced by evaluation.
  static ApproxMap Raw(AlgebraSpec spec, RawFn fn);

  const AlgebraSpec& spec() const { return spec_; }
  const std::optional<InvolutionKind>& base() const { return base_; }
  const PerturbationSpec& perturbation() const { return perturbation_; }
  bool is_raw() const { return static_cast<bool>(raw_); }

  Element operator()(const Element& x) const;
  SplitValue EvalSplit(const Element& x) const;

 private:
  ApproxMap(AlgebraSpec spec, RawFn fn) : spec_(spec), raw_(std::move(fn)) {}

  AlgebraSpec spec_;
  std::optional<InvolutionKind> base_;
  PerturbationSpec perturbation_;
  RawFn raw_;
};

inline Element EvalF(const ApproxMap& f, const Element& x) { return f(x); }

// 2 conj(lambda) f((x+y)/2) - f(lambda x) - f(lambda y)
Element JensenDefect(const ApproxMap& f, Complex lambda, const Element& x, const Element& y);

// f(xy) - f(y) f(x)
Element AntimulDefect(const ApproxMap& f, const Element& x, const Element& y);

// | |x f(x)| - |x|^2 |
double CstarDefect(const ApproxMap& f, const Element& x);
// | |f(x) x| - |x|^2 |, reported alongside for information.
double CstarDefectReversed(const ApproxMap& f, const Element& x);

enum class LambdaStage { kArc, kCircle, kPositiveReal, kComplex };
std::string_view ToString(LambdaStage stage);

struct LambdaSampler {
  int n0 = 1;
  int arc = 1;
  int circle = 1;
  int reals = 1;
  int complex = 1;
  std::uint64_t seed = 0;
};

struct TaggedLambda {
  LambdaStage stage;
  Complex value;
};

// Arc samples e^{i t}, t in [0, 1/n0] (the first is always t = 0); circle
// samples on |lambda| = 1; log-uniform positive reals in [0.1, 10]; general
// complex values with modulus in [0.1, 10]. Concatenated in that order.
std::vector<TaggedLambda> SampleLambdas(const LambdaSampler& ls);

// Two points of modulus n whose midpoint is the real alpha (0 < alpha < n):
// alpha +- i sqrt(n^2 - alpha^2). The imaginary unit is what places them on
// the circle; alpha +- sqrt(n^2 - alpha^2) would not have modulus n.
std::pair<Complex, Complex> CircleDecomposition(double alpha, double n);

}  // namespace invstab
