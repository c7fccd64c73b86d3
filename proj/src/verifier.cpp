#include "invstab/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "invstab/errors.hpp"
#include "invstab/parallel.hpp"

namespace invstab {

std::string_view ToString(PairRole role) {
  switch (role) {
    case PairRole::kNone: return "none";
    case PairRole::kZero: return "zero";
    case PairRole::kSame: return "same";
    case PairRole::kNext: return "next";
  }
  return "unknown";
}

const HypothesisEntry& DefectReport::Get(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.name == name) return e;
  }
  throw Error(ErrorCode::kInvalidArgument, "no hypothesis entry named " + std::string(name));
}

namespace {

struct Candidate {
  ExtReal value;
  std::optional<Witness> witness;
  std::size_t samples = 0;
};

// Strictly larger replaces, so ties keep the earliest sample.
void Offer(Candidate& best, ExtReal value, const Witness& w) {
  ++best.samples;
  if (!best.witness || value > best.value) {
    best.value = value;
    best.witness = w;
  }
}

// Reduces per-probe candidates in probe order.
Candidate Reduce(std::vector<Candidate>& parts) {
  Candidate out;
  for (auto& c : parts) {
    out.samples += c.samples;
    if (c.witness && (!out.witness || c.value > out.value)) {
      out.value = c.value;
      out.witness = std::move(c.witness);
    }
  }
  return out;
}

struct PairSample {
  PairRole role;
  Element y;
};

std::vector<PairSample> PairsFor(const std::vector<Element>& probes, std::size_t i) {
  std::vector<PairSample> out;
  out.push_back({PairRole::kZero, Element::Zero(probes[i].spec())});
  out.push_back({PairRole::kSame, probes[i]});
  if (i + 1 < probes.size()) out.push_back({PairRole::kNext, probes[i + 1]});
  return out;
}

// Defects at or below rounding_floor * scale are rounding noise and count as
// exactly zero, so a vanishing control is not charged for them.
ExtReal FlooredRatio(double defect, double control, double scale, double rounding_floor) {
  if (defect <= rounding_floor * scale) return ExtReal(0.0);
  return SafeRatio(defect, control);
}

void RequireProbes(const std::vector<Element>& probes) {
  if (probes.empty()) throw Error(ErrorCode::kInvalidArgument, "probe set is empty");
}

}  // namespace

DefectReport ScanHypotheses(const ApproxMap& f, const ControlFunction& phi,
                            const ScalingDirection& dir, const std::vector<TaggedLambda>& lambdas,
                            const std::vector<Element>& probes, const ScanOptions& opts) {
  RequireProbes(probes);
  std::vector<TaggedLambda> arc;
  for (const auto& l : lambdas) {
    if (l.stage == LambdaStage::kArc) arc.push_back(l);
  }
  if (arc.empty()) throw Error(ErrorCode::kInvalidArgument, "no arc-stage lambdas to scan");

  const std::size_t n = probes.size();
  std::vector<Candidate> e2(n), e3(n), e4(n), e6(n), e6r(n);
  ParallelFor(n, [&](std::size_t i) {
    const Element& x = probes[i];
    const double nx = Norm(x);
    const double floor = opts.rounding_floor;
    for (const auto& [role, y] : PairsFor(probes, i)) {
      const double control = ControlEval(phi, x, y);
      const double scale = nx + Norm(y);
      for (const auto& lambda : arc) {
        const double defect = Norm(JensenDefect(f, lambda.value, x, y));
        Offer(e2[i], FlooredRatio(defect, control, scale, floor), Witness{i, role, x, y, lambda});
      }
      const double anti = Norm(AntimulDefect(f, x, y));
      Offer(e3[i], FlooredRatio(anti, control, scale * scale, floor),
            Witness{i, role, x, y, std::nullopt});
    }
    const double residual = InvolutivityResidual(f, dir, x, opts.stabilizer);
    Offer(e4[i], ExtReal(residual), Witness{i, PairRole::kNone, x, std::nullopt, std::nullopt});
    const double control_xx = ControlEval(phi, x, x);
    Offer(e6[i], FlooredRatio(CstarDefect(f, x), control_xx, nx * nx, floor),
          Witness{i, PairRole::kSame, x, x, std::nullopt});
    Offer(e6r[i], FlooredRatio(CstarDefectReversed(f, x), control_xx, nx * nx, floor),
          Witness{i, PairRole::kSame, x, x, std::nullopt});
  });

  DefectReport report;
  auto entry = [](std::string name, Candidate c, double threshold) {
    HypothesisEntry e{std::move(name), c.value, std::move(c.witness), c.samples, threshold, true};
    e.pass = e.sup_ratio <= ExtReal(threshold);
    return e;
  };
  report.entries.push_back(entry("e2_jensen", Reduce(e2), 1.0));
  report.entries.push_back(entry("e3_antimul", Reduce(e3), 1.0));
  report.entries.push_back(entry("e4_involutive", Reduce(e4), opts.e4_tolerance));
  report.entries.push_back(entry("e6_cstar", Reduce(e6), 1.0));
  report.e6_reversed_sup = Reduce(e6r).value;
  return report;
}

std::vector<StabilizationTrace> StabilizeAll(const ApproxMap& f, const ScalingDirection& dir,
                                             const std::vector<Element>& probes,
                                             const StabilizeOptions& opts) {
  std::vector<std::optional<StabilizationTrace>> slots(probes.size());
  ParallelFor(probes.size(),
              [&](std::size_t i) { slots[i] = StabilizePoint(f, dir, probes[i], opts); });
  std::vector<StabilizationTrace> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

double LawReport::MaxDefect() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.max_defect);
  return m;
}

bool LawReport::AllPass() const {
  return std::all_of(entries.begin(), entries.end(), [](const LawEntry& e) { return e.pass; });
}

LawReport VerifyInvolutionLaws(const ApproxMap& f, const ScalingDirection& dir,
                               const std::vector<TaggedLambda>& lambdas,
                               const std::vector<Element>& probes, const LawOptions& opts) {
  RequireProbes(probes);
  const std::size_t n = probes.size();
  const auto involution = [&](const Element& x) {
    return StabilizePoint(f, dir, x, opts.stabilizer).result;
  };

  constexpr std::size_t kStages = 4;
  const LambdaStage stages[kStages] = {LambdaStage::kArc, LambdaStage::kCircle,
                                       LambdaStage::kPositiveReal, LambdaStage::kComplex};
  std::vector<Candidate> additivity(n), antimul(n), involutivity(n);
  std::vector<std::vector<Candidate>> homogeneity(kStages, std::vector<Candidate>(n));

  ParallelFor(n, [&](std::size_t i) {
    const Element& x = probes[i];
    const double nx = Norm(x);
    const Element ix = involution(x);

    const Element iix = involution(ix);
    Offer(involutivity[i], ExtReal(Norm(Sub(iix, x)) / std::max(1.0, nx)),
          Witness{i, PairRole::kNone, x, std::nullopt, std::nullopt});

    for (const auto& lambda : lambdas) {
      const Element lx = Scale(lambda.value, x);
      const double defect = Norm(Sub(involution(lx), Scale(std::conj(lambda.value), ix)));
      const double scale = std::max({1.0, nx, std::abs(lambda.value) * nx});
      const auto stage = static_cast<std::size_t>(lambda.stage);
      Offer(homogeneity[stage][i], ExtReal(defect / scale),
            Witness{i, PairRole::kNone, x, std::nullopt, lambda});
    }

    if (i + 1 < n) {
      const Element& y = probes[i + 1];
      const double ny = Norm(y);
      const Element iy = involution(y);
      const double add = Norm(Sub(involution(Add(x, y)), Add(ix, iy)));
      Offer(additivity[i], ExtReal(add / std::max({1.0, nx, ny})),
            Witness{i, PairRole::kNext, x, y, std::nullopt});
      const double anti = Norm(Sub(involution(Mul(x, y)), Mul(iy, ix)));
      Offer(antimul[i], ExtReal(anti / std::max({1.0, nx, ny, nx * ny})),
            Witness{i, PairRole::kNext, x, y, std::nullopt});
    }
  });

  LawReport report;
  report.tolerance = opts.tolerance;
  auto add_entry = [&](std::string law, std::optional<LambdaStage> stage, Candidate c) {
    if (!c.witness) return;
    LawEntry e{std::move(law), stage, c.value.value(), std::move(c.witness), c.samples, true};
    e.pass = e.max_defect <= opts.tolerance;
    report.total_samples += e.samples;
    report.entries.push_back(std::move(e));
  };
  add_entry("additivity", std::nullopt, Reduce(additivity));
  for (std::size_t s = 0; s < kStages; ++s) {
    add_entry("conj_homogeneity", stages[s], Reduce(homogeneity[s]));
  }
  add_entry("antimultiplicativity", std::nullopt, Reduce(antimul));
  add_entry("involutivity", std::nullopt, Reduce(involutivity));
  return report;
}

BoundReport VerifyBound(const ApproxMap& f, const ControlFunction& phi, const ScalingDirection& dir,
                        const std::vector<StabilizationTrace>& traces) {
  if (traces.empty()) throw Error(ErrorCode::kInvalidArgument, "no traces to check");
  BoundReport report;
  report.max_ratio = ExtReal(0.0);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& t = traces[i];
    const double deviation = Norm(Sub(t.result, f(t.x)));
    const double bound = ErrorBound(dir, phi, t.x);
    ExtReal ratio;
    if (bound == 0.0) {
      ratio = deviation <= report.superstable_tolerance ? ExtReal(0.0) : ExtReal::Infinity();
    } else {
      ratio = ExtReal(deviation / bound);
    }
    report.deviation.push_back(deviation);
    report.bound.push_back(bound);
    report.ratio.push_back(ratio);
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.witness_index = i;
    }
  }
  report.probes_checked = traces.size();
  report.pass = report.max_ratio <= ExtReal(1.0 + 1e-9);
  return report;
}

BoundReport VerifyBound(const ApproxMap& f, const ControlFunction& phi, const ScalingDirection& dir,
                        const std::vector<Element>& probes, const StabilizeOptions& opts) {
  RequireProbes(probes);
  return VerifyBound(f, phi, dir, StabilizeAll(f, dir, probes, opts));
}

UniquenessReport VerifyUniqueness(const std::vector<StabilizationTrace>& first,
                                  const std::vector<StabilizationTrace>& second) {
  if (first.size() != second.size() || first.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "uniqueness check needs matching, nonempty traces");
  }
  UniquenessReport report;
  for (std::size_t i = 0; i < first.size(); ++i) {
    const double d = Norm(Sub(first[i].result, second[i].result));
    if (d > report.max_difference) {
      report.max_difference = d;
      report.witness_index = i;
    }
  }
  report.pass = report.max_difference <= report.tolerance;
  return report;
}

UniquenessReport VerifyUniqueness(const ApproxMap& f1, const ApproxMap& f2,
                                  const ScalingDirection& dir, const std::vector<Element>& probes,
                                  const StabilizeOptions& opts) {
  RequireProbes(probes);
  return VerifyUniqueness(StabilizeAll(f1, dir, probes, opts), StabilizeAll(f2, dir, probes, opts));
}

CstarReport VerifyCstar(const std::vector<StabilizationTrace>& traces) {
  if (traces.empty()) throw Error(ErrorCode::kInvalidArgument, "no traces to check");
  CstarReport report;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& t = traces[i];
    const double nx = Norm(t.x);
    double ratio = 0.0;
    double reversed = 0.0;
    if (nx > 0.0) {
      const double sq = nx * nx;
      ratio = std::abs(Norm(Mul(t.x, t.result)) - sq) / sq;
      reversed = std::abs(Norm(Mul(t.result, t.x)) - sq) / sq;
    }
    report.ratio.push_back(ratio);
    report.max_ratio_reversed = std::max(report.max_ratio_reversed, reversed);
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.witness_index = i;
    }
  }
  report.witness = traces[report.witness_index].x;
  report.pass = report.max_ratio <= report.tolerance;
  return report;
}

CstarReport VerifyCstar(const ApproxMap& f, const ScalingDirection& dir,
                        const std::vector<Element>& probes, const StabilizeOptions& opts) {
  RequireProbes(probes);
  return VerifyCstar(StabilizeAll(f, dir, probes, opts));
}

}  // namespace invstab
