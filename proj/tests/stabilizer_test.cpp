#include "invstab/stabilizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "invstab/errors.hpp"
#include "test_support.hpp"

namespace invstab {
namespace {

using testing::Dist;
using testing::RandomElements;

const double kSqrt2 = std::sqrt(2.0);

PerturbationSpec Radial(double theta, double r, std::optional<Element> u = std::nullopt) {
  PerturbationSpec p;
  p.kind = PerturbationKind::kFixedDirectionRadial;
  p.theta_delta = theta;
  p.r = r;
  p.direction_seed = 11;
  p.direction = std::move(u);
  return p;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

TEST(ControlTest, Examples) {
  const Complex d[] = {4.0, 1.0};
  const Element x = Element::Diagonal(d);
  const Element zero = Element::Zero(x.spec());
  EXPECT_NEAR(ControlEval(ControlFunction::PowerSum(0.3, 0.5), x, zero), 0.6, 1e-15);
  EXPECT_EQ(ControlEval(ControlFunction::PowerProduct(0.7, 0.3), x, zero), 0.0);
  EXPECT_EQ(ControlEval(ControlFunction::PowerSum(0.0, 0.5), x, x), 0.0);
  EXPECT_NEAR(ControlEval(ControlFunction::PowerProduct(0.5, 0.5), x, x), 0.5 * 4.0, 1e-12);
  EXPECT_THROW(ControlEval(ControlFunction::PowerSum(0.3, 0.5), x, Element::FromScalar(1.0)), Error);
  EXPECT_THROW(ControlFunction::PowerSum(-1.0, 0.5).Validate(), Error);
  EXPECT_THROW(ControlFunction::PowerSum(1.0, 0.0).Validate(), Error);
}

TEST(ControlTest, ScalingLaw) {
  // phi(q^n x, q^n y) = (q L)^n phi(x, y)
  const auto xs = RandomElements(AlgebraSpec::Matrix(2), 100, 1);
  const auto ys = RandomElements(AlgebraSpec::Matrix(2), 100, 2);
  for (const ControlFunction& phi :
       {ControlFunction::PowerSum(0.3, 0.5), ControlFunction::PowerSum(0.3, 3.0),
        ControlFunction::PowerProduct(0.2, 0.25), ControlFunction::PowerProduct(0.2, 0.8)}) {
    const ScalingDirection dir = SelectDirection(phi);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double base = ControlEval(phi, xs[k], ys[k]);
      for (int n : {1, 5, 20}) {
        const double qn = std::pow(dir.q, n);
        const double scaled = ControlEval(phi, Scale(qn, xs[k]), Scale(qn, ys[k]));
        const double expected = std::pow(dir.q * dir.lipschitz, n) * base;
        EXPECT_NEAR(scaled, expected, 1e-10 * expected);
      }
    }
  }
}

TEST(SelectDirectionTest, PowerSum) {
  const ScalingDirection half = SelectDirection(ControlFunction::PowerSum(0.3, 0.5));
  EXPECT_EQ(half.q, 2.0);
  EXPECT_EQ(half.index, 0);
  EXPECT_NEAR(half.lipschitz, 0.70711, 1e-5);
  EXPECT_DOUBLE_EQ(half.lipschitz, 1.0 / kSqrt2);

  const ScalingDirection cube = SelectDirection(ControlFunction::PowerSum(0.3, 3.0));
  EXPECT_EQ(cube.q, 0.5);
  EXPECT_EQ(cube.index, 1);
  EXPECT_DOUBLE_EQ(cube.lipschitz, 0.25);

  EXPECT_EQ(CodeOf([] { SelectDirection(ControlFunction::PowerSum(0.3, 1.0)); }),
            ErrorCode::kNoContraction);
}

TEST(SelectDirectionTest, PowerProduct) {
  const ScalingDirection low = SelectDirection(ControlFunction::PowerProduct(0.1, 0.25));
  EXPECT_EQ(low.q, 2.0);
  EXPECT_DOUBLE_EQ(low.lipschitz, 1.0 / kSqrt2);
  const ScalingDirection high = SelectDirection(ControlFunction::PowerProduct(0.1, 1.0));
  EXPECT_EQ(high.q, 0.5);
  EXPECT_EQ(high.index, 1);
  EXPECT_DOUBLE_EQ(high.lipschitz, 0.5);
  EXPECT_EQ(CodeOf([] { SelectDirection(ControlFunction::PowerProduct(0.1, 0.5)); }),
            ErrorCode::kNoContraction);
}

TEST(SelectDirectionTest, CustomUsesMeasuredLipschitzWithSafetyFactor) {
  // theta (|x|^0.5 + |y|^0.5) wrapped as a custom control: true L = 2^-0.5.
  const ControlFunction phi = ControlFunction::Custom([](const Element& x, const Element& y) {
    return 0.3 * (std::sqrt(Norm(x)) + std::sqrt(Norm(y)));
  });
  const auto xs = RandomElements(AlgebraSpec::Matrix(2), 50, 3);
  std::vector<std::pair<Element, Element>> samples;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) samples.emplace_back(xs[k], xs[k + 1]);
  const ScalingDirection dir = SelectDirection(phi, samples);
  EXPECT_EQ(dir.q, 2.0);
  ASSERT_TRUE(dir.measured_lipschitz.has_value());
  EXPECT_NEAR(*dir.measured_lipschitz, 1.0 / kSqrt2, 1e-12);
  EXPECT_NEAR(dir.lipschitz, 1.05 / kSqrt2, 1e-12);
  EXPECT_FALSE(dir.analytic_lipschitz.has_value());
  EXPECT_THROW(SelectDirection(phi), Error);

  const ControlFunction linear = ControlFunction::Custom(
      [](const Element& x, const Element& y) { return Norm(x) + Norm(y); });
  EXPECT_EQ(CodeOf([&] { SelectDirection(linear, samples); }), ErrorCode::kNoContraction);
}

// f(z) = conj(z) + 0.1 |z|^{1/2}
ApproxMap ScalarExample() {
  return ApproxMap(InvolutionKind::Conjugation(), Radial(0.1, 0.5, Element::FromScalar(1.0)),
                   AlgebraSpec::Scalar());
}

TEST(StabilizePointTest, ExactInvolutionIsFixed) {
  const Complex d[] = {1.0, 2.0};
  for (const ApproxMap& f :
       {ApproxMap(InvolutionKind::Adjoint(), {}, AlgebraSpec::Matrix(2)),
        ApproxMap(InvolutionKind::TwistedAdjoint(Element::Diagonal(d)), {}, AlgebraSpec::Matrix(2))}) {
    for (const ScalingDirection& dir : {DirectionForPowerSum(0.5), DirectionForPowerSum(3.0)}) {
      for (const Element& x : RandomElements(AlgebraSpec::Matrix(2), 20, 4)) {
        const StabilizationTrace t = StabilizePoint(f, dir, x);
        EXPECT_TRUE(t.converged);
        for (const Element& a : t.iterates) EXPECT_EQ(a, f(x));
        EXPECT_EQ(t.result, f(x));
        EXPECT_EQ(t.diffs.front(), 0.0);
      }
    }
  }
}

TEST(StabilizePointTest, ScalarClosedForm) {
  const StabilizationTrace t =
      StabilizePoint(ScalarExample(), DirectionForPowerSum(0.5), Element::FromScalar(4.0));
  EXPECT_EQ(t.n_used, 48);
  EXPECT_FALSE(t.converged);
  ASSERT_EQ(t.iterates.size(), 49u);
  for (int n = 0; n <= 48; ++n) {
    const double a_n = 4.0 + 0.2 * std::pow(2.0, -n / 2.0);
    EXPECT_NEAR(t.iterates[n][0].real(), a_n, 1e-15 * a_n) << "n = " << n;
  }
  for (int n = 0; n < 48; ++n) {
    const double d_n = 0.2 * (1.0 - 1.0 / kSqrt2) * std::pow(2.0, -n / 2.0);
    EXPECT_NEAR(t.diffs[n], d_n, 1e-10 * d_n) << "n = " << n;
  }
  EXPECT_NEAR(t.result[0].real(), 4.0, 1e-7);
}

TEST(StabilizePointTest, ConvergesByToleranceWithDeeperCap) {
  StabilizeOptions opts;
  opts.max_n = 80;
  const StabilizationTrace t =
      StabilizePoint(ScalarExample(), DirectionForPowerSum(0.5), Element::FromScalar(4.0), opts);
  EXPECT_TRUE(t.converged);
  EXPECT_LT(t.n_used, 80);
  EXPECT_LE(t.diffs.back(), 1e-10 * 4.0 * (1 + 1e-10));
  EXPECT_NEAR(t.result[0].real(), 4.0, 1e-9);
  EXPECT_EQ(t.errors_vs_limit.back(), 0.0);
}

TEST(StabilizePointTest, ZeroStaysZero) {
  const ApproxMap f(InvolutionKind::Adjoint(), Radial(0.1, 0.5), AlgebraSpec::Matrix(2));
  const StabilizationTrace t =
      StabilizePoint(f, DirectionForPowerSum(0.5), Element::Zero(AlgebraSpec::Matrix(2)));
  for (const Element& a : t.iterates) EXPECT_TRUE(a.IsZero());
  EXPECT_TRUE(t.result.IsZero());
}

TEST(StabilizePointTest, DownwardDirection) {
  // r = 3: q = 1/2 and a_n = 2^n f(2^-n x), perturbation 0.1 |x|^3 4^-n.
  const ApproxMap f(InvolutionKind::Adjoint(), Radial(0.1, 3.0), AlgebraSpec::Matrix(2));
  for (const Element& x : RandomElements(AlgebraSpec::Matrix(2), 20, 5)) {
    const StabilizationTrace t = StabilizePoint(f, DirectionForPowerSum(3.0), x);
    EXPECT_TRUE(t.converged);
    EXPECT_LE(Dist(t.result, ConjTranspose(x)), 1e-9 * std::max(1.0, Norm(x)));
  }
}

TEST(StabilizePointTest, OverflowOnWrongDirection) {
  // A cubic perturbation pushed upward grows like 4^n.
  const ApproxMap f(InvolutionKind::Adjoint(), Radial(0.1, 3.0), AlgebraSpec::Matrix(2));
  StabilizeOptions opts;
  opts.max_n = 2000;
  opts.cauchy_window = 100000;
  const Element x = RandomElements(AlgebraSpec::Matrix(2), 1, 6)[0];
  EXPECT_EQ(CodeOf([&] { StabilizePoint(f, DirectionForPowerSum(0.5), x, opts); }),
            ErrorCode::kOverflow);
}

TEST(StabilizePointTest, NonCauchyWhenDifferencesStall) {
  // A sign that flips with every doubling keeps |a_{n+1} - a_n| constant.
  const ApproxMap f = ApproxMap::Raw(AlgebraSpec::Scalar(), [](const Element& z) {
    const double nz = Norm(z);
    const double sign = (static_cast<long>(std::floor(std::log2(nz))) % 2 == 0) ? 1.0 : -1.0;
    return Add(Conjugate(z), Element::FromScalar(0.1 * sign * nz));
  });
  EXPECT_EQ(CodeOf([&] {
              StabilizePoint(f, DirectionForPowerSum(0.5), Element::FromScalar(1.5));
            }),
            ErrorCode::kNonCauchy);
}

TEST(StabilizePointTest, RejectsBadOptions) {
  const ApproxMap f = ScalarExample();
  const Element x = Element::FromScalar(1.0);
  EXPECT_THROW(StabilizePoint(f, DirectionForPowerSum(0.5), x, {0, 1e-10}), Error);
  EXPECT_THROW(StabilizePoint(f, DirectionForPowerSum(0.5), x, {48, 0.0}), Error);
}

TEST(StabilizePointTest, GeometricRateMatchesLipschitz) {
  const ApproxMap f(InvolutionKind::Adjoint(), Radial(0.1, 0.5), AlgebraSpec::Matrix(2));
  const ScalingDirection dir = DirectionForPowerSum(0.5);
  for (const Element& x : RandomElements(AlgebraSpec::Matrix(2), 20, 7)) {
    const StabilizationTrace t = StabilizePoint(f, dir, x);
    for (std::size_t n = 1; n < t.diffs.size(); ++n) {
      EXPECT_NEAR(t.diffs[n] / t.diffs[n - 1], dir.lipschitz, 0.05);
    }
    EXPECT_LE(Dist(t.result, ConjTranspose(x)), 1e-7);
  }
}

TEST(ErrorBoundTest, Examples) {
  const Complex d[] = {4.0, 1.0};
  const Element x = Element::Diagonal(d);
  const double b = ErrorBound(DirectionForPowerSum(0.5), ControlFunction::PowerSum(0.1, 0.5), x);
  EXPECT_NEAR(b, (1.0 + kSqrt2) * 0.2, 1e-14);
  EXPECT_NEAR(b, 0.482843, 1e-6);

  const ControlFunction unit = ControlFunction::Custom(
      [](const Element& a, const Element& c) { return Norm(a) > 0 || Norm(c) > 0 ? 1.0 : 0.0; });
  EXPECT_NEAR(ErrorBound(ScalingDirection{0.5, 1, 0.25, 0.25, {}}, unit, x), 4.0 / 3.0, 1e-15);

  EXPECT_EQ(ErrorBound(DirectionForPowerProduct(0.25), ControlFunction::PowerProduct(0.1, 0.25), x),
            0.0);
}

TEST(CorollaryConstantTest, Examples) {
  const CorollaryConstant low = CorollaryConstantFor(0.5, CorollaryRegime::kSumRLessThanOne);
  EXPECT_NEAR(low.derived, 1.0 + kSqrt2, 1e-12);
  EXPECT_NEAR(low.stated, 2.0 / (2.0 - kSqrt2), 1e-12);
  EXPECT_NEAR(low.stated, 3.41421, 1e-5);
  EXPECT_FALSE(low.stated_sign_anomaly);

  const CorollaryConstant high = CorollaryConstantFor(2.0, CorollaryRegime::kSumRGreaterThanOne);
  EXPECT_NEAR(high.derived, 2.0, 1e-12);
  EXPECT_NEAR(high.stated, -2.0, 1e-12);
  EXPECT_TRUE(high.stated_sign_anomaly);

  for (double r : {0.1, 0.25, 1.0, 3.0}) {
    EXPECT_EQ(CorollaryConstantFor(r, CorollaryRegime::kProduct).derived, 0.0);
  }
  EXPECT_EQ(CodeOf([] { CorollaryConstantFor(1.5, CorollaryRegime::kSumRLessThanOne); }),
            ErrorCode::kOutOfRange);
  EXPECT_EQ(CodeOf([] { CorollaryConstantFor(0.5, CorollaryRegime::kSumRGreaterThanOne); }),
            ErrorCode::kOutOfRange);
  EXPECT_EQ(CodeOf([] { CorollaryConstantFor(0.5, CorollaryRegime::kProduct); }),
            ErrorCode::kOutOfRange);
}

TEST(CorollaryConstantTest, DerivedMatchesClosedForms) {
  for (double r : {0.1, 0.3, 0.5, 0.9}) {
    const double two_r = std::pow(2.0, r);
    EXPECT_NEAR(CorollaryConstantFor(r, CorollaryRegime::kSumRLessThanOne).derived,
                two_r / (2.0 - two_r), 1e-12 * two_r / (2.0 - two_r));
  }
  for (double r : {1.5, 2.0, 3.0}) {
    const double two_r = std::pow(2.0, r);
    EXPECT_NEAR(CorollaryConstantFor(r, CorollaryRegime::kSumRGreaterThanOne).derived,
                two_r / (two_r - 2.0), 1e-12 * two_r);
  }
}

TEST(InvolutivityResidualTest, Examples) {
  const ScalingDirection dir = DirectionForPowerSum(0.5);
  const ApproxMap exact(InvolutionKind::Adjoint(), {}, AlgebraSpec::Matrix(2));
  const ApproxMap f(InvolutionKind::Adjoint(), Radial(0.1, 0.5), AlgebraSpec::Matrix(2));
  for (const Element& x : RandomElements(AlgebraSpec::Matrix(2), 30, 8)) {
    EXPECT_LE(InvolutivityResidual(exact, dir, x), 1e-12);
    EXPECT_LE(InvolutivityResidual(f, dir, x), 1e-6);
  }
  EXPECT_EQ(InvolutivityResidual(f, dir, Element::Zero(AlgebraSpec::Matrix(2))), 0.0);
}

}  // namespace
}  // namespace invstab
