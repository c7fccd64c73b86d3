// invstab: run stabilization scenarios from JSON configs.
//
//   invstab run <config.json> [--out DIR]
//   invstab sweep <config.json> --param P --values v1,v2,... [--out DIR]
//   invstab demo-fixedpoint
//
// Exit codes: 0 success, 2 config error, 3 no contracting direction,
// 4 stabilization failure, 1 anything else.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "invstab/errors.hpp"
#include "invstab/fixedpoint.hpp"
#include "invstab/json_io.hpp"
#include "invstab/scenario.hpp"

namespace fs = std::filesystem;
using namespace invstab;

namespace {

int ExitCodeFor(const Error& e) {
  if (e.code() == ErrorCode::kConfigError) return 2;
  if (e.code() == ErrorCode::kNoContraction) return 3;
  if (e.IsStabilizationFailure()) return 4;
  return 1;
}

int RunCommand(const std::string& config, const std::string& out) {
  const ScenarioConfig cfg = LoadScenario(config);
  const fs::path dir = out.empty() ? fs::path("out") / fs::path(config).stem() : fs::path(out);
  const ScenarioResult res = RunScenarioToDirectory(cfg, dir);
  std::cout << "direction: q=" << res.direction.q << " i=" << res.direction.index
            << " L=" << FormatDouble17(res.direction.lipschitz) << "\n";
  for (const auto& e : res.hypotheses.entries) {
    std::cout << "hypothesis " << e.name << ": sup=" << e.sup_ratio.ToString()
              << (e.pass ? " pass" : " FAIL") << "\n";
  }
  std::cout << "bound: max_ratio=" << res.bound.max_ratio.ToString()
            << (res.bound.pass ? " pass" : " FAIL") << "\n";
  std::cout << "laws: max_defect=" << res.laws.MaxDefect()
            << (res.laws.AllPass() ? " pass" : " FAIL") << "\n";
  if (res.uniqueness) {
    std::cout << "uniqueness: max_difference=" << res.uniqueness->max_difference
              << (res.uniqueness->pass ? " pass" : " FAIL") << "\n";
  }
  std::cout << "cstar: max_ratio=" << res.cstar.max_ratio << (res.cstar.pass ? " pass" : " FAIL")
            << " (witness probe " << res.cstar.witness_index << ")\n";
  std::cout << "wrote " << (dir / "report.json").string() << "\n";
  return 0;
}

int SweepCommand(const std::string& config, const std::string& param,
                 const std::vector<std::string>& values, const std::string& out) {
  const Json base = LoadJsonFile(config);
  const fs::path dir =
      out.empty() ? fs::path("out") / (fs::path(config).stem().string() + "_sweep_" + param)
                  : fs::path(out);
  const auto rows = RunSweep(base, param, values, dir);
  std::cout << SweepCsv(param, rows);
  std::cout << "wrote " << (dir / "sweep.csv").string() << "\n";
  return 0;
}

int DemoFixedPoint() {
  const GeneralizedMetricSpace<double> line{
      "|s - t| on [0, inf)", [](const double& s, const double& t) { return ExtReal(std::abs(s - t)); }};
  const AlternativeOptions opts{64, 1e-14};
  const auto affine =
      IterateAlternative<double>([](double t) { return 0.5 * t + 1.0; }, 0.0, 0.5, line, opts);
  const double fixed = *affine.fixed_point;
  const double bound = affine.aposteriori_bound.value();
  std::cout << "affine T(t) = t/2 + 1 from 0: converged after " << affine.iterations
            << " steps, n0 = " << *affine.n0 << ", fixed point " << FormatDouble17(fixed) << "\n"
            << "  bound d(Tx0,x0)/(1-L) = " << FormatDouble17(bound)
            << ", d(x0, x*) = " << FormatDouble17(fixed)
            << ", ratio = " << FormatDouble17(fixed / bound) << "\n";

  const GeneralizedMetricSpace<std::int64_t> discrete{
      "discrete infinite metric on Z", [](const std::int64_t& m, const std::int64_t& n) {
        return m == n ? ExtReal(0.0) : ExtReal::Infinity();
      }};
  const auto shift = IterateAlternative<std::int64_t>([](std::int64_t n) { return n + 1; },
                                                      std::int64_t{0}, 0.5, discrete);
  std::cout << "shift T(n) = n + 1 on Z: "
            << (shift.branch == AlternativeBranch::kAllInfinite ? "AllInfinite" : "Converged")
            << " (" << shift.iterations << " infinite distances)\n";

  const auto ident = IterateAlternative<double>([](double t) { return t; }, 3.0, 0.5, line);
  std::cout << "identity from 3: "
            << (ident.branch == AlternativeBranch::kConverged ? "Converged" : "AllInfinite")
            << " at n = " << *ident.n0 << ", fixed point " << FormatDouble17(*ident.fixed_point)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilize approximate involutions on concrete Banach algebras"};
  app.require_subcommand(1);

  std::string run_config, run_out;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("config", run_config, "Scenario JSON")->required();
  run->add_option("--out", run_out, "Output directory (default out/<config stem>)");

  std::string sweep_config, sweep_param, sweep_out;
  std::vector<std::string> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Re-run a scenario over one parameter");
  sweep->add_option("config", sweep_config, "Scenario JSON")->required();
  sweep->add_option("--param", sweep_param, "theta, r, dim or num_probes")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "Output directory");

  auto* demo = app.add_subcommand("demo-fixedpoint", "Show both branches of the fixed-point alternative");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) return RunCommand(run_config, run_out);
    if (*sweep) return SweepCommand(sweep_config, sweep_param, sweep_values, sweep_out);
    if (*demo) return DemoFixedPoint();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
