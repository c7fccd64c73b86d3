#include "invstab/maps.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "invstab/errors.hpp"

namespace invstab {

namespace {

Element InvertMatrix(const Element& s) {
  const std::size_t n = s.spec().dim;
  Eigen::MatrixXcd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = s.at(i, j);
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) throw Error(ErrorCode::kInvalidArgument, "twist matrix is singular");
  const Eigen::MatrixXcd inv = lu.inverse();
  std::vector<Complex> data(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) data[i * n + j] = inv(i, j);
  }
  return Element(s.spec(), std::move(data));
}

std::uint64_t Fnv1a(std::uint64_t h, std::uint64_t word) {
  constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  for (int b = 0; b < 8; ++b) {
    h ^= (word >> (8 * b)) & 0xffU;
    h *= kPrime;
  }
  return h;
}

// Entries are rounded to a 1e-6 grid before hashing so the direction is a
// function of x alone.
std::uint64_t QuantizedHash(const Element& x, std::uint64_t seed) {
  std::uint64_t h = Fnv1a(0xcbf29ce484222325ULL, seed);
  for (const auto& z : x.data()) {
    for (double v : {z.real(), z.imag()}) {
      double q = std::nearbyint(v * 1e6);
      if (q == 0.0) q = 0.0;  // fold -0 into +0
      h = Fnv1a(h, std::bit_cast<std::uint64_t>(q));
    }
  }
  return h;
}

}  // namespace

InvolutionKind InvolutionKind::TwistedAdjoint(const Element& s) {
  if (s.spec().kind != AlgebraKind::kMatrix) {
    throw Error(ErrorCode::kKindSpecMismatch, "twisted adjoint needs a matrix twist");
  }
  if (!(ConjTranspose(s) == s)) {
    throw Error(ErrorCode::kInvalidArgument, "twist matrix must be Hermitian");
  }
  InvolutionKind k(Tag::kTwistedAdjoint);
  k.s_inv_ = InvertMatrix(s);
  // smallest singular value of s = 1 / |s^{-1}|
  if (1.0 / Norm(*k.s_inv_) <= 1e-8) {
    throw Error(ErrorCode::kInvalidArgument, "twist matrix is numerically singular");
  }
  k.s_ = s;
  return k;
}

std::string_view InvolutionKind::name() const {
  switch (tag_) {
    case Tag::kAdjoint: return "adjoint";
    case Tag::kTwistedAdjoint: return "twisted_adjoint";
    case Tag::kConjugation: return "conjugation";
  }
  return "unknown";
}

void InvolutionKind::CheckSpec(const AlgebraSpec& spec) const {
  switch (tag_) {
    case Tag::kAdjoint:
      return;
    case Tag::kTwistedAdjoint:
      if (!(s_->spec() == spec)) {
        throw Error(ErrorCode::kKindSpecMismatch, "twist matrix does not match the algebra");
      }
      return;
    case Tag::kConjugation:
      if (spec.kind == AlgebraKind::kMatrix) {
        throw Error(ErrorCode::kKindSpecMismatch,
                    "entrywise conjugation is not anti-multiplicative on matrices");
      }
      return;
  }
}

Element EvalInvolution(const InvolutionKind& kind, const Element& x) {
  kind.CheckSpec(x.spec());
  switch (kind.tag()) {
    case InvolutionKind::Tag::kAdjoint:
      return ConjTranspose(x);
    case InvolutionKind::Tag::kTwistedAdjoint:
      return Mul(Mul(*kind.twist_inverse(), ConjTranspose(x)), *kind.twist());
    case InvolutionKind::Tag::kConjugation:
      return Conjugate(x);
  }
  return x;
}

void PerturbationSpec::Validate() const {
  if (!(theta_delta >= 0.0) || !std::isfinite(theta_delta)) {
    throw Error(ErrorCode::kInvalidArgument, "theta_delta must be a finite non-negative number");
  }
  if (kind != PerturbationKind::kNone && !(r > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "perturbation exponent r must be positive");
  }
  if (direction && std::abs(Norm(*direction) - 1.0) > 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "explicit perturbation direction must have unit norm");
  }
}

Element FixedDirection(const PerturbationSpec& p, const AlgebraSpec& spec) {
  if (p.direction) {
    if (!(p.direction->spec() == spec)) {
      throw Error(ErrorCode::kSpecMismatch, "perturbation direction does not match the algebra");
    }
    return *p.direction;
  }
  std::mt19937_64 rng(p.direction_seed);
  return SampleUnitElement(spec, rng);
}

Element EvalPerturbation(const PerturbationSpec& p, const Element& x) {
  if (p.kind == PerturbationKind::kNone || p.theta_delta == 0.0 || x.IsZero()) {
    return Element::Zero(x.spec());
  }
  const double amplitude = p.theta_delta * std::pow(Norm(x), p.r);
  if (p.kind == PerturbationKind::kFixedDirectionRadial) {
    return Scale(amplitude, FixedDirection(p, x.spec()));
  }
  std::mt19937_64 rng(QuantizedHash(x, p.direction_seed));
  return Scale(amplitude, SampleUnitElement(x.spec(), rng));
}

ApproxMap::ApproxMap(InvolutionKind base, PerturbationSpec perturbation, AlgebraSpec spec)
    : spec_(spec), base_(std::move(base)), perturbation_(std::move(perturbation)) {
  base_->CheckSpec(spec_);
  perturbation_.Validate();
  // Resolve the seeded direction once; every later evaluation reuses it.
  if (perturbation_.kind == PerturbationKind::kFixedDirectionRadial && !perturbation_.direction) {
    perturbation_.direction = FixedDirection(perturbation_, spec_);
  }
}

ApproxMap ApproxMap::Raw(AlgebraSpec spec, RawFn fn) { return ApproxMap(spec, std::move(fn)); }

SplitValue ApproxMap::EvalSplit(const Element& x) const {
  if (!(x.spec() == spec_)) throw Error(ErrorCode::kSpecMismatch, "argument outside the map domain");
  if (x.IsZero()) return {Element::Zero(spec_), Element::Zero(spec_)};
  if (raw_) return {raw_(x), Element::Zero(spec_)};
  return {EvalInvolution(*base_, x), EvalPerturbation(perturbation_, x)};
}

Element ApproxMap::operator()(const Element& x) const {
  if (raw_) {
    if (!(x.spec() == spec_)) {
      throw Error(ErrorCode::kSpecMismatch, "argument outside the map domain");
    }
    return x.IsZero() ? Element::Zero(spec_) : raw_(x);
  }
  return EvalSplit(x).Sum();
}

Element JensenDefect(const ApproxMap& f, Complex lambda, const Element& x, const Element& y) {
  const Element mid = Scale(0.5, Add(x, y));
  const Element lhs = Scale(2.0 * std::conj(lambda), f(mid));
  return Sub(Sub(lhs, f(Scale(lambda, x))), f(Scale(lambda, y)));
}

Element AntimulDefect(const ApproxMap& f, const Element& x, const Element& y) {
  return Sub(f(Mul(x, y)), Mul(f(y), f(x)));
}

double CstarDefect(const ApproxMap& f, const Element& x) {
  const double nx = Norm(x);
  return std::abs(Norm(Mul(x, f(x))) - nx * nx);
}

double CstarDefectReversed(const ApproxMap& f, const Element& x) {
  const double nx = Norm(x);
  return std::abs(Norm(Mul(f(x), x)) - nx * nx);
}

std::string_view ToString(LambdaStage stage) {
  switch (stage) {
    case LambdaStage::kArc: return "arc";
    case LambdaStage::kCircle: return "circle";
    case LambdaStage::kPositiveReal: return "positive_real";
    case LambdaStage::kComplex: return "complex";
  }
  return "unknown";
}

std::vector<TaggedLambda> SampleLambdas(const LambdaSampler& ls) {
  if (ls.n0 < 1 || ls.arc < 1 || ls.circle < 1 || ls.reals < 1 || ls.complex < 1) {
    throw Error(ErrorCode::kInvalidArgument, "lambda sampler needs n0 >= 1 and counts >= 1");
  }
  std::mt19937_64 rng(ls.seed);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::uniform_real_distribution<double> arc_angle(0.0, 1.0 / ls.n0);
  std::uniform_real_distribution<double> full_angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> log_mod(std::log(0.1), std::log(10.0));

  std::vector<TaggedLambda> out;
  out.reserve(static_cast<std::size_t>(ls.arc + ls.circle + ls.reals + ls.complex));
  out.push_back({LambdaStage::kArc, Complex(1.0, 0.0)});
  for (int k = 1; k < ls.arc; ++k) out.push_back({LambdaStage::kArc, std::polar(1.0, arc_angle(rng))});
  for (int k = 0; k < ls.circle; ++k) {
    out.push_back({LambdaStage::kCircle, std::polar(1.0, full_angle(rng))});
  }
  for (int k = 0; k < ls.reals; ++k) {
    out.push_back({LambdaStage::kPositiveReal, Complex(std::exp(log_mod(rng)), 0.0)});
  }
  for (int k = 0; k < ls.complex; ++k) {
    const double mod = std::exp(log_mod(rng));
    out.push_back({LambdaStage::kComplex, std::polar(mod, full_angle(rng))});
  }
  return out;
}

std::pair<Complex, Complex> CircleDecomposition(double alpha, double n) {
  if (!(alpha > 0.0) || !(alpha < n)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < alpha < n");
  }
  const double h = std::sqrt(n * n - alpha * alpha);
  return {Complex(alpha, h), Complex(alpha, -h)};
}

}  // namespace invstab
