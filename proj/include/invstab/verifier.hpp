#pragma once

// Sampled checks of the stability hypotheses on f and of the involution
// laws, error bound, uniqueness and C*-identity for the scaling limit I.
// Every supremum is over the declared probe region only.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "invstab/algebra.hpp"
#include "invstab/control.hpp"
#include "invstab/ext_real.hpp"
#include "invstab/maps.hpp"
#include "invstab/stabilizer.hpp"

namespace invstab {

// How the second argument of a sampled pair relates to the probe list.
enum class PairRole { kNone, kZero, kSame, kNext };
std::string_view ToString(PairRole role);

struct Witness {
  std::size_t x_index = 0;
  PairRole y_role = PairRole::kNone;
  std::optional<Element> x;
  std::optional<Element> y;
  std::optional<TaggedLambda> lambda;
};

struct HypothesisEntry {
  std::string name;  // e2_jensen, e3_antimul, e4_involutive, e6_cstar
  // Sup of |defect| / phi for e2, e3, e6; sup of the absolute residual for e4.
  ExtReal sup_ratio;
  std::optional<Witness> witness;
  std::size_t samples_used = 0;
  // e2/e3/e6 pass when sup_ratio <= threshold (1); e4 when the residual does.
  double threshold = 1.0;
  bool pass = true;
};

struct DefectReport {
  std::vector<HypothesisEntry> entries;
  // |(|f(x) x| - |x|^2)| / phi(x,x), reported and never asserted.
  ExtReal e6_reversed_sup;

  const HypothesisEntry& Get(std::string_view name) const;
};

struct ScanOptions {
  StabilizeOptions stabilizer;
  double e4_tolerance = 1e-6;
  // Relative size below which a defect is treated as exactly zero.
  double rounding_floor = 1e-12;
};

// e2 is sampled over the arc stage of the lambdas only (the hypothesis is
// stated for that set). Pairs per probe x_i: (x_i, 0), (x_i, x_i) and
// (x_i, x_{i+1}).
DefectReport ScanHypotheses(const ApproxMap& f, const ControlFunction& phi,
                            const ScalingDirection& dir, const std::vector<TaggedLambda>& lambdas,
                            const std::vector<Element>& probes, const ScanOptions& opts = {});

std::vector<StabilizationTrace> StabilizeAll(const ApproxMap& f, const ScalingDirection& dir,
                                             const std::vector<Element>& probes,
                                             const StabilizeOptions& opts = {});

struct LawEntry {
  std::string law;  // additivity, conj_homogeneity, antimultiplicativity, involutivity
  std::optional<LambdaStage> stage;
  double max_defect = 0.0;
  std::optional<Witness> witness;
  std::size_t samples = 0;
  bool pass = true;
};

struct LawReport {
  std::vector<LawEntry> entries;
  double tolerance = 1e-6;
  std::size_t total_samples = 0;
  double MaxDefect() const;
  bool AllPass() const;
};

struct LawOptions {
  StabilizeOptions stabilizer;
  double tolerance = 1e-6;
};

// Defects are normalized by max(1, input norms): |x|, |y| for additivity,
// |x|, |lambda||x| for homogeneity, additionally |x||y| for products.
LawReport VerifyInvolutionLaws(const ApproxMap& f, const ScalingDirection& dir,
                               const std::vector<TaggedLambda>& lambdas,
                               const std::vector<Element>& probes, const LawOptions& opts = {});

struct BoundReport {
  // Per probe |I(x) - f(x)|, the bound L^{1-i}/(1-L) phi(x,0) and their ratio.
  std::vector<double> deviation;
  std::vector<double> bound;
  std::vector<ExtReal> ratio;
  ExtReal max_ratio;
  std::size_t witness_index = 0;
  std::size_t probes_checked = 0;
  // Where the bound is 0 the deviation must be at most this.
  double superstable_tolerance = 1e-9;
  bool pass = true;
};

BoundReport VerifyBound(const ApproxMap& f, const ControlFunction& phi, const ScalingDirection& dir,
                        const std::vector<StabilizationTrace>& traces);
BoundReport VerifyBound(const ApproxMap& f, const ControlFunction& phi, const ScalingDirection& dir,
                        const std::vector<Element>& probes, const StabilizeOptions& opts = {});

struct UniquenessReport {
  double max_difference = 0.0;
  std::size_t witness_index = 0;
  double tolerance = 1e-6;
  bool pass = true;
};

UniquenessReport VerifyUniqueness(const std::vector<StabilizationTrace>& first,
                                  const std::vector<StabilizationTrace>& second);
UniquenessReport VerifyUniqueness(const ApproxMap& f1, const ApproxMap& f2,
                                  const ScalingDirection& dir, const std::vector<Element>& probes,
                                  const StabilizeOptions& opts = {});

struct CstarReport {
  // Per probe |(|x I(x)| - |x|^2)| / |x|^2.
  std::vector<double> ratio;
  double max_ratio = 0.0;
  std::size_t witness_index = 0;
  std::optional<Element> witness;
  // Same with I(x) x, informational.
  double max_ratio_reversed = 0.0;
  double tolerance = 1e-8;
  bool pass = true;
};

CstarReport VerifyCstar(const std::vector<StabilizationTrace>& traces);
CstarReport VerifyCstar(const ApproxMap& f, const ScalingDirection& dir,
                        const std::vector<Element>& probes, const StabilizeOptions& opts = {});

}  // namespace invstab
