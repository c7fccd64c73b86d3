#pragma once

// Config-driven runs of the whole pipeline: direction selection, probe
// generation, hypothesis scan, stabilization, and the bound / law /
// uniqueness / C* checks, persisted as manifest.json, report.json and
// trace.csv.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "invstab/algebra.hpp"
#include "invstab/control.hpp"
#include "invstab/json_io.hpp"
#include "invstab/maps.hpp"
#include "invstab/stabilizer.hpp"
#include "invstab/verifier.hpp"

namespace invstab {

inline constexpr const char* kToolVersion = "0.3.1";

struct SamplingConfig {
  int num_probes = 0;
  double radius_min = 0.1;
  double radius_max = 10.0;
  std::uint64_t seed = 0;
  // Appended after the sampled probes, in order.
  std::vector<Element> extra_probes;
};

struct ScenarioConfig {
  Json source;  // the parsed input, echoed into the manifest
  AlgebraSpec algebra;
  InvolutionKind involution = InvolutionKind::Adjoint();
  PerturbationSpec perturbation;
  std::optional<PerturbationSpec> perturbation2;
  ControlFunction control;
  StabilizeOptions stabilizer;
  SamplingConfig sampling;
  LambdaSampler lambda;
  double e4_tolerance = 1e-6;
  double law_tolerance = 1e-6;
};

// Throws Error(kConfigError) naming the offending key, e.g. "sampling.seed".
ScenarioConfig ParseScenario(const Json& j);
ScenarioConfig LoadScenario(const std::filesystem::path& path);
Json LoadJsonFile(const std::filesystem::path& path);

// Sampled probes followed by the configured extra probes.
std::vector<Element> BuildProbes(const ScenarioConfig& cfg);

struct ScenarioResult {
  ScalingDirection direction;
  std::vector<Element> probes;
  DefectReport hypotheses;
  std::vector<StabilizationTrace> traces;
  BoundReport bound;
  LawReport laws;
  std::optional<UniquenessReport> uniqueness;
  CstarReport cstar;
  CorollaryConstant corollary;
  std::string corollary_regime;
};

// Throws NoContraction from direction selection and Overflow / NonCauchy
// from stabilization.
ScenarioResult RunScenario(const ScenarioConfig& cfg);

Json ReportJson(const ScenarioResult& result);
// Columns: probe_id, radius, n, diff_norm, error_vs_limit, bound, ratio.
// Row n carries the envelope L^n times the error bound and the ratio of
// |a_n - I(x)| to it; diff_norm is empty on each probe's last row.
std::string TraceCsv(const ScenarioResult& result);
Json ManifestJson(const ScenarioConfig& cfg, const ScenarioResult& result,
                  const std::filesystem::path& out_dir, const std::string& timestamp);

// Runs the scenario and writes manifest.json, report.json and trace.csv
// into out_dir (created if missing).
ScenarioResult RunScenarioToDirectory(const ScenarioConfig& cfg,
                                      const std::filesystem::path& out_dir);

struct SweepRow {
  std::string value;
  std::string status;  // "ok" or the error name
  std::optional<double> lipschitz;
  std::optional<ExtReal> max_bound_ratio;
  std::optional<double> max_law_defect;
  std::optional<bool> hypotheses_pass;
  std::optional<bool> bound_pass;
  std::optional<bool> laws_pass;
  std::optional<bool> cstar_pass;
};

// Re-runs the scenario once per value of `param` (theta, r, dim or
// num_probes) and writes sweep.csv plus one run directory per value.
// theta sets the control amplitude and each perturbation to theta/3;
// r sets the control and perturbation exponents together.
std::vector<SweepRow> RunSweep(const Json& base, const std::string& param,
                               const std::vector<std::string>& values,
                               const std::filesystem::path& out_dir);

std::string SweepCsv(const std::string& param, const std::vector<SweepRow>& rows);

}  // namespace invstab
