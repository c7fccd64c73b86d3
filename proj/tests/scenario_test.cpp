#include "invstab/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "invstab/errors.hpp"
#include "test_support.hpp"

namespace invstab {
namespace {

namespace fs = std::filesystem;

Json SmallAdjoint() {
  Json j = LoadJsonFile(testing::ScenarioDir() / "adjoint_rsum_r05.json");
  j["sampling"]["num_probes"] = 12;
  return j;
}

std::string ConfigErrorMessage(const Json& j) {
  try {
    ParseScenario(j);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
    return e.what();
  }
  ADD_FAILURE() << "config parsed without error";
  return "";
}

std::string ReadFile(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("invstab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(ParseScenarioTest, BundledScenariosParse) {
  for (const char* name : {"adjoint_rsum_r05.json", "adjoint_cstar.json", "twisted_cstar.json",
                           "scalar_rate.json", "product_superstable.json",
                           "product_perturbed.json"}) {
    EXPECT_NO_THROW(LoadScenario(testing::ScenarioDir() / name)) << name;
  }
}

TEST(ParseScenarioTest, DefaultsAndValues) {
  const ScenarioConfig cfg = ParseScenario(SmallAdjoint());
  EXPECT_EQ(cfg.algebra, AlgebraSpec::Matrix(2));
  EXPECT_EQ(cfg.perturbation.kind, PerturbationKind::kFixedDirectionRadial);
  EXPECT_DOUBLE_EQ(cfg.perturbation.theta_delta, 0.1);
  ASSERT_TRUE(cfg.perturbation2.has_value());
  EXPECT_EQ(cfg.perturbation2->kind, PerturbationKind::kRandomDirectionRadial);
  EXPECT_EQ(cfg.stabilizer.max_n, 48);
  EXPECT_EQ(BuildProbes(cfg).size(), 13u);
  EXPECT_EQ(BuildProbes(cfg).back(), Element::MatrixFromRows({{0, 1}, {0, 0}}));

  Json j = SmallAdjoint();
  j["perturbation"].erase("theta_delta");
  EXPECT_DOUBLE_EQ(ParseScenario(j).perturbation.theta_delta, 0.1);  // theta / 3
}

TEST(ParseScenarioTest, ErrorsNameTheKey) {
  Json j = SmallAdjoint();
  j["sampling"].erase("seed");
  EXPECT_NE(ConfigErrorMessage(j).find("sampling.seed"), std::string::npos);

  j = SmallAdjoint();
  j["lambda"].erase("seed");
  EXPECT_NE(ConfigErrorMessage(j).find("lambda.seed"), std::string::npos);

  j = SmallAdjoint();
  j["algebra"]["kind"] = "quaternion";
  EXPECT_NE(ConfigErrorMessage(j).find("algebra.kind"), std::string::npos);

  j = SmallAdjoint();
  j["control"]["theta"] = "big";
  EXPECT_NE(ConfigErrorMessage(j).find("control.theta"), std::string::npos);

  j = SmallAdjoint();
  j["involution"]["kind"] = "conjugation";
  EXPECT_NE(ConfigErrorMessage(j).find("involution"), std::string::npos);

  j = SmallAdjoint();
  j["sampling"]["extra_probes"][0]["re"] = Json::array({1, 2, 3});
  EXPECT_NE(ConfigErrorMessage(j).find("sampling.extra_probes[0]"), std::string::npos);

  j = SmallAdjoint();
  j["lambda"]["n0"] = 0;
  EXPECT_NE(ConfigErrorMessage(j).find("lambda.n0"), std::string::npos);

  j = SmallAdjoint();
  j["perturbation"]["theta_delta"] = -1.0;
  EXPECT_NE(ConfigErrorMessage(j).find("perturbation"), std::string::npos);

  j = SmallAdjoint();
  j.erase("control");
  EXPECT_NE(ConfigErrorMessage(j).find("control"), std::string::npos);

  EXPECT_NE(ConfigErrorMessage(Json::array()).find("<root>"), std::string::npos);
}

TEST(LoadScenarioTest, MissingAndMalformedFiles) {
  EXPECT_THROW(LoadScenario("/nonexistent/config.json"), Error);
  const fs::path dir = FreshDir("malformed");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << "{ not json";
  try {
    LoadScenario(dir / "bad.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
  }
}

TEST(RunScenarioTest, NoContractionForLinearControl) {
  Json j = SmallAdjoint();
  j["control"]["r"] = 1.0;
  try {
    RunScenario(ParseScenario(j));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoContraction);
  }
}

TEST(RunScenarioTest, ReportShape) {
  const ScenarioResult res = RunScenario(ParseScenario(SmallAdjoint()));
  const Json report = ReportJson(res);
  std::vector<std::string> keys;
  for (const auto& [k, v] : report.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"direction", "hypotheses", "bound", "laws", "uniqueness",
                                            "cstar", "corollary_audit"}));
  EXPECT_TRUE(report["bound"]["pass"].get<bool>());
  EXPECT_TRUE(report["uniqueness"]["pass"].get<bool>());
  EXPECT_NEAR(report["corollary_audit"]["derived"].get<double>(), 1.0 + std::sqrt(2.0), 1e-12);

  const std::string csv = TraceCsv(res);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "probe_id,radius,n,diff_norm,error_vs_limit,bound,ratio");
  std::size_t rows = 0;
  for (const auto& t : res.traces) rows += t.iterates.size();
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), rows + 1);
}

TEST(RunScenarioTest, TwistedReportsCstarFailure) {
  Json j = LoadJsonFile(testing::ScenarioDir() / "twisted_cstar.json");
  j["sampling"]["num_probes"] = 10;
  const ScenarioResult res = RunScenario(ParseScenario(j));
  EXPECT_FALSE(res.cstar.pass);
  EXPECT_TRUE(res.cstar.witness.has_value());
  EXPECT_NEAR(res.cstar.ratio.back(), 0.5, 1e-7);
  EXPECT_TRUE(res.laws.AllPass());
}

TEST(RunScenarioTest, ByteIdenticalAcrossRuns) {
  const ScenarioConfig cfg = ParseScenario(SmallAdjoint());
  const fs::path a = FreshDir("det_a"), b = FreshDir("det_b");
  RunScenarioToDirectory(cfg, a);
  RunScenarioToDirectory(cfg, b);
  for (const char* file : {"report.json", "trace.csv"}) {
    const std::string ta = ReadFile(a / file);
    EXPECT_FALSE(ta.empty());
    EXPECT_EQ(ta, ReadFile(b / file)) << file;
  }
  const Json manifest = LoadJsonFile(a / "manifest.json");
  EXPECT_EQ(manifest["tool_version"], kToolVersion);
  EXPECT_TRUE(manifest.contains("timestamp"));
  EXPECT_EQ(manifest["config"], Json(cfg.source));
  EXPECT_FALSE(fs::exists(a / "report.json.tmp"));
}

TEST(RunScenarioTest, FloatsRoundTrip) {
  const ScenarioResult res = RunScenario(ParseScenario(SmallAdjoint()));
  const Json parsed = Json::parse(DumpJson17(ReportJson(res)));
  EXPECT_EQ(parsed["direction"]["L"].get<double>(), res.direction.lipschitz);
  EXPECT_EQ(parsed["laws"]["max_defect"].get<double>(), res.laws.MaxDefect());
}

std::vector<std::string> CsvColumn(const std::string& csv, std::size_t col) {
  std::vector<std::string> out;
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string cell;
    for (std::size_t k = 0; k <= col; ++k) std::getline(ls, cell, ',');
    out.push_back(cell);
  }
  return out;
}

TEST(SweepTest, ExponentRowsCarryL) {
  const fs::path dir = FreshDir("sweep_r");
  const auto rows = RunSweep(SmallAdjoint(), "r", {"0.25", "0.5", "0.75"}, dir);
  ASSERT_EQ(rows.size(), 3u);
  const double expected[] = {std::pow(2.0, -0.75), std::pow(2.0, -0.5), std::pow(2.0, -0.25)};
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(rows[k].status, "ok");
    EXPECT_NEAR(*rows[k].lipschitz, expected[k], 1e-15);
    EXPECT_TRUE(*rows[k].bound_pass);
  }
  const std::string csv = ReadFile(dir / "sweep.csv");
  EXPECT_EQ(CsvColumn(csv, 0), (std::vector<std::string>{"0.25", "0.5", "0.75"}));
  EXPECT_TRUE(fs::exists(dir / "r_0.5" / "report.json"));
}

TEST(SweepTest, ZeroThetaGivesZeroDefects) {
  const auto rows = RunSweep(SmallAdjoint(), "theta", {"0", "0.3"}, FreshDir("sweep_theta"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].status, "ok");
  EXPECT_EQ(*rows[0].max_bound_ratio, ExtReal(0.0));
  EXPECT_LE(*rows[0].max_law_defect, 1e-12);
  EXPECT_TRUE(*rows[0].hypotheses_pass);
  EXPECT_TRUE(*rows[1].bound_pass);
}

TEST(SweepTest, DimAndErrorRows) {
  Json j = SmallAdjoint();
  j["sampling"]["num_probes"] = 4;
  const auto rows = RunSweep(j, "dim", {"1", "2", "4"}, FreshDir("sweep_dim"));
  for (const auto& row : rows) EXPECT_EQ(row.status, "ok") << row.value;

  const auto bad = RunSweep(j, "r", {"1", "0.5"}, FreshDir("sweep_bad"));
  EXPECT_EQ(bad[0].status, "NoContraction");
  EXPECT_FALSE(bad[0].lipschitz.has_value());
  EXPECT_EQ(bad[1].status, "ok");

  EXPECT_THROW(RunSweep(j, "seed", {"1"}, FreshDir("sweep_param")), Error);
  EXPECT_THROW(RunSweep(j, "r", {"abc"}, FreshDir("sweep_value")), Error);
}

}  // namespace
}  // namespace invstab
