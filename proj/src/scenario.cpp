#include "invstab/scenario.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "invstab/errors.hpp"

namespace invstab {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void ConfigFail(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::kConfigError, key + ": " + why);
}

std::string Join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const Json& RequireObject(const Json& parent, const std::string& prefix, const std::string& key) {
  const std::string path = Join(prefix, key);
  if (!parent.contains(key)) ConfigFail(path, "missing");
  const Json& j = parent.at(key);
  if (!j.is_object()) ConfigFail(path, "must be an object");
  return j;
}

template <class T>
T Get(const Json& obj, const std::string& prefix, const std::string& key,
      std::optional<T> fallback = std::nullopt) {
  const std::string path = Join(prefix, key);
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    ConfigFail(path, "missing");
  }
  const Json& v = obj.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) ConfigFail(path, "must be a string");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) ConfigFail(path, "must be a number");
  } else {
    if (!v.is_number_integer()) ConfigFail(path, "must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.get<long long>() < 0) ConfigFail(path, "must be non-negative");
    }
  }
  return v.get<T>();
}

// Accepts {"re": ..., "im": ...} with flat arrays or, for matrices, nested rows.
std::vector<double> FlattenNumbers(const Json& j, const std::string& path) {
  std::vector<double> out;
  if (!j.is_array()) ConfigFail(path, "must be an array");
  for (const auto& v : j) {
    if (v.is_array()) {
      for (const auto& w : v) {
        if (!w.is_number()) ConfigFail(path, "entries must be numbers");
        out.push_back(w.get<double>());
      }
    } else if (v.is_number()) {
      out.push_back(v.get<double>());
    } else {
      ConfigFail(path, "entries must be numbers");
    }
  }
  return out;
}

Element ParseElement(const Json& j, const AlgebraSpec& spec, const std::string& path) {
  if (!j.is_object() || !j.contains("re")) ConfigFail(path, "element needs a \"re\" array");
  const std::vector<double> re = FlattenNumbers(j.at("re"), path + ".re");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = FlattenNumbers(j.at("im"), path + ".im");
  if (re.size() != spec.size() || im.size() != spec.size()) {
    ConfigFail(path, "expected " + std::to_string(spec.size()) + " entries");
  }
  std::vector<Complex> data(re.size());
  for (std::size_t k = 0; k < data.size(); ++k) data[k] = Complex(re[k], im[k]);
  try {
    return Element(spec, std::move(data));
  } catch (const Error& e) {
    ConfigFail(path, e.what());
  }
}

PerturbationSpec ParsePerturbation(const Json& j, const std::string& prefix,
                                   const AlgebraSpec& spec, const ControlFunction& control) {
  PerturbationSpec p;
  const auto kind = Get<std::string>(j, prefix, "kind");
  if (kind == "none") {
    p.kind = PerturbationKind::kNone;
  } else if (kind == "fixed_direction_radial") {
    p.kind = PerturbationKind::kFixedDirectionRadial;
  } else if (kind == "random_direction_radial") {
    p.kind = PerturbationKind::kRandomDirectionRadial;
  } else {
    ConfigFail(Join(prefix, "kind"), "unknown perturbation kind '" + kind + "'");
  }
  // Default amplitude theta/3 keeps the Jensen defect within the control.
  p.theta_delta = Get<double>(j, prefix, "theta_delta", control.theta / 3.0);
  p.r = Get<double>(j, prefix, "r", control.r);
  p.direction_seed = Get<std::uint64_t>(j, prefix, "direction_seed", 0);
  if (j.contains("direction")) {
    p.direction = ParseElement(j.at("direction"), spec, Join(prefix, "direction"));
  }
  try {
    p.Validate();
  } catch (const Error& e) {
    ConfigFail(prefix, e.what());
  }
  return p;
}

std::string TimestampUtc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json ToJson(ExtReal v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

Json ToJson(const Element& e) {
  Json re = Json::array();
  Json im = Json::array();
  for (const auto& z : e.data()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return Json{{"re", re}, {"im", im}};
}

Json ToJson(const TaggedLambda& l) {
  return Json{{"stage", std::string(ToString(l.stage))},
              {"re", l.value.real()},
              {"im", l.value.imag()}};
}

Json ToJson(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  Json j;
  j["x_index"] = w->x_index;
  j["y_role"] = std::string(ToString(w->y_role));
  j["lambda"] = w->lambda ? ToJson(*w->lambda) : Json(nullptr);
  j["x"] = w->x ? ToJson(*w->x) : Json(nullptr);
  j["y"] = w->y ? ToJson(*w->y) : Json(nullptr);
  return j;
}

std::string AlgebraName(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::kScalar: return "scalar";
    case AlgebraKind::kMatrix: return "matrix";
    case AlgebraKind::kPointwise: return "pointwise";
  }
  return "unknown";
}

}  // namespace

Json LoadJsonFile(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kConfigError, path.string() + ": cannot open");
  try {
    return Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kConfigError, path.string() + ": " + e.what());
  }
}

ScenarioConfig ParseScenario(const Json& j) {
  if (!j.is_object()) ConfigFail("<root>", "config must be a JSON object");
  ScenarioConfig cfg;
  cfg.source = j;

  const Json& alg = RequireObject(j, "", "algebra");
  const auto kind = Get<std::string>(alg, "algebra", "kind");
  const auto dim = Get<std::size_t>(alg, "algebra", "dim", std::size_t{1});
  AlgebraKind ak;
  if (kind == "scalar") {
    ak = AlgebraKind::kScalar;
  } else if (kind == "matrix") {
    ak = AlgebraKind::kMatrix;
  } else if (kind == "pointwise") {
    ak = AlgebraKind::kPointwise;
  } else {
    ConfigFail("algebra.kind", "unknown algebra kind '" + kind + "'");
  }
  try {
    cfg.algebra = AlgebraSpec::Make(ak, dim);
  } catch (const Error& e) {
    ConfigFail("algebra.dim", e.what());
  }

  const Json& ctl = RequireObject(j, "", "control");
  const auto ckind = Get<std::string>(ctl, "control", "kind");
  const double theta = Get<double>(ctl, "control", "theta");
  const double r = Get<double>(ctl, "control", "r");
  if (ckind == "power_sum") {
    cfg.control = ControlFunction::PowerSum(theta, r);
  } else if (ckind == "power_product") {
    cfg.control = ControlFunction::PowerProduct(theta, r);
  } else {
    ConfigFail("control.kind", "unknown control kind '" + ckind + "'");
  }
  if (!(theta >= 0.0)) ConfigFail("control.theta", "must be >= 0");
  if (!(r > 0.0)) ConfigFail("control.r", "must be > 0");

  const Json& inv = RequireObject(j, "", "involution");
  const auto ikind = Get<std::string>(inv, "involution", "kind");
  try {
    if (ikind == "adjoint") {
      cfg.involution = InvolutionKind::Adjoint();
    } else if (ikind == "conjugation") {
      cfg.involution = InvolutionKind::Conjugation();
    } else if (ikind == "twisted_adjoint") {
      if (!inv.contains("s")) ConfigFail("involution.s", "missing");
      if (cfg.algebra.kind != AlgebraKind::kMatrix) {
        ConfigFail("involution.kind", "twisted_adjoint needs a matrix algebra");
      }
      cfg.involution = InvolutionKind::TwistedAdjoint(ParseElement(inv.at("s"), cfg.algebra,
                                                                   "involution.s"));
    } else {
      ConfigFail("involution.kind", "unknown involution kind '" + ikind + "'");
    }
    cfg.involution.CheckSpec(cfg.algebra);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    ConfigFail("involution", e.what());
  }

  cfg.perturbation =
      ParsePerturbation(RequireObject(j, "", "perturbation"), "perturbation", cfg.algebra, cfg.control);
  if (j.contains("perturbation2")) {
    cfg.perturbation2 = ParsePerturbation(RequireObject(j, "", "perturbation2"), "perturbation2",
                                          cfg.algebra, cfg.control);
  }

  if (j.contains("stabilizer")) {
    const Json& st = RequireObject(j, "", "stabilizer");
    cfg.stabilizer.max_n = Get<int>(st, "stabilizer", "max_n", 48);
    cfg.stabilizer.tol_rel = Get<double>(st, "stabilizer", "tol_rel", 1e-10);
    if (cfg.stabilizer.max_n < 1) ConfigFail("stabilizer.max_n", "must be >= 1");
    if (!(cfg.stabilizer.tol_rel > 0.0)) ConfigFail("stabilizer.tol_rel", "must be > 0");
  }

  const Json& smp = RequireObject(j, "", "sampling");
  cfg.sampling.num_probes = Get<int>(smp, "sampling", "num_probes");
  cfg.sampling.radius_min = Get<double>(smp, "sampling", "radius_min", 0.1);
  cfg.sampling.radius_max = Get<double>(smp, "sampling", "radius_max", 10.0);
  cfg.sampling.seed = Get<std::uint64_t>(smp, "sampling", "seed");
  if (cfg.sampling.num_probes < 0) ConfigFail("sampling.num_probes", "must be >= 0");
  if (!(cfg.sampling.radius_min > 0.0)) ConfigFail("sampling.radius_min", "must be > 0");
  if (!(cfg.sampling.radius_max >= cfg.sampling.radius_min)) {
    ConfigFail("sampling.radius_max", "must be >= radius_min");
  }
  if (smp.contains("extra_probes")) {
    const Json& extra = smp.at("extra_probes");
    if (!extra.is_array()) ConfigFail("sampling.extra_probes", "must be an array");
    for (std::size_t k = 0; k < extra.size(); ++k) {
      const std::string path = "sampling.extra_probes[" + std::to_string(k) + "]";
      Element e = ParseElement(extra[k], cfg.algebra, path);
      if (e.IsZero()) ConfigFail(path, "probe must be nonzero");
      cfg.sampling.extra_probes.push_back(std::move(e));
    }
  }
  if (cfg.sampling.num_probes + cfg.sampling.extra_probes.size() == 0) {
    ConfigFail("sampling.num_probes", "probe set would be empty");
  }

  const Json& lam = RequireObject(j, "", "lambda");
  cfg.lambda.n0 = Get<int>(lam, "lambda", "n0");
  cfg.lambda.arc = Get<int>(lam, "lambda", "arc");
  cfg.lambda.circle = Get<int>(lam, "lambda", "circle");
  cfg.lambda.reals = Get<int>(lam, "lambda", "reals");
  cfg.lambda.complex = Get<int>(lam, "lambda", "complex");
  cfg.lambda.seed = Get<std::uint64_t>(lam, "lambda", "seed");
  for (const char* key : {"n0", "arc", "circle", "reals", "complex"}) {
    if (lam.at(key).get<int>() < 1) ConfigFail(std::string("lambda.") + key, "must be >= 1");
  }

  if (j.contains("tolerances")) {
    const Json& tol = RequireObject(j, "", "tolerances");
    cfg.e4_tolerance = Get<double>(tol, "tolerances", "e4", 1e-6);
    cfg.law_tolerance = Get<double>(tol, "tolerances", "laws", 1e-6);
  }
  return cfg;
}

ScenarioConfig LoadScenario(const fs::path& path) { return ParseScenario(LoadJsonFile(path)); }

std::vector<Element> BuildProbes(const ScenarioConfig& cfg) {
  std::mt19937_64 rng(cfg.sampling.seed);
  std::vector<Element> probes;
  probes.reserve(cfg.sampling.num_probes + cfg.sampling.extra_probes.size());
  for (int k = 0; k < cfg.sampling.num_probes; ++k) {
    probes.push_back(
        SampleElement(cfg.algebra, cfg.sampling.radius_min, cfg.sampling.radius_max, rng));
  }
  probes.insert(probes.end(), cfg.sampling.extra_probes.begin(), cfg.sampling.extra_probes.end());
  return probes;
}

ScenarioResult RunScenario(const ScenarioConfig& cfg) {
  ScenarioResult res;
  res.direction = SelectDirection(cfg.control);
  res.probes = BuildProbes(cfg);
  const std::vector<TaggedLambda> lambdas = SampleLambdas(cfg.lambda);
  const ApproxMap f(cfg.involution, cfg.perturbation, cfg.algebra);

  res.hypotheses = ScanHypotheses(f, cfg.control, res.direction, lambdas, res.probes,
                                  {cfg.stabilizer, cfg.e4_tolerance});
  res.traces = StabilizeAll(f, res.direction, res.probes, cfg.stabilizer);
  res.bound = VerifyBound(f, cfg.control, res.direction, res.traces);
  res.laws = VerifyInvolutionLaws(f, res.direction, lambdas, res.probes,
                                  {cfg.stabilizer, cfg.law_tolerance});
  if (cfg.perturbation2) {
    const ApproxMap f2(cfg.involution, *cfg.perturbation2, cfg.algebra);
    res.uniqueness =
        VerifyUniqueness(res.traces, StabilizeAll(f2, res.direction, res.probes, cfg.stabilizer));
  }
  res.cstar = VerifyCstar(res.traces);

  const double r = cfg.control.r;
  if (cfg.control.kind == ControlKind::kPowerProduct) {
    res.corollary_regime = "product";
    res.corollary = CorollaryConstantFor(r, CorollaryRegime::kProduct);
  } else if (r < 1.0) {
    res.corollary_regime = "sum_r_lt_1";
    res.corollary = CorollaryConstantFor(r, CorollaryRegime::kSumRLessThanOne);
  } else {
    res.corollary_regime = "sum_r_gt_1";
    res.corollary = CorollaryConstantFor(r, CorollaryRegime::kSumRGreaterThanOne);
  }
  return res;
}

Json ReportJson(const ScenarioResult& res) {
  Json report;

  Json dir;
  dir["q"] = res.direction.q;
  dir["i"] = res.direction.index;
  dir["L"] = res.direction.lipschitz;
  dir["error_bound_coefficient"] = ErrorBoundCoefficient(res.direction);
  report["direction"] = dir;

  Json hyp;
  for (const auto& e : res.hypotheses.entries) {
    Json h;
    h["sup_ratio"] = ToJson(e.sup_ratio);
    h["threshold"] = e.threshold;
    h["pass"] = e.pass;
    h["samples_used"] = e.samples_used;
    h["witness"] = ToJson(e.witness);
    hyp[e.name] = h;
  }
  hyp["e6_reversed_sup"] = ToJson(res.hypotheses.e6_reversed_sup);
  report["hypotheses"] = hyp;

  Json bound;
  bound["max_ratio"] = ToJson(res.bound.max_ratio);
  bound["witness_index"] = res.bound.witness_index;
  bound["probes_checked"] = res.bound.probes_checked;
  bound["superstable_tolerance"] = res.bound.superstable_tolerance;
  bound["pass"] = res.bound.pass;
  report["bound"] = bound;

  Json laws;
  laws["tolerance"] = res.laws.tolerance;
  laws["total_samples"] = res.laws.total_samples;
  laws["max_defect"] = res.laws.MaxDefect();
  laws["pass"] = res.laws.AllPass();
  Json entries = Json::array();
  for (const auto& e : res.laws.entries) {
    Json le;
    le["law"] = e.law;
    le["stage"] = e.stage ? Json(std::string(ToString(*e.stage))) : Json(nullptr);
    le["max_defect"] = e.max_defect;
    le["samples"] = e.samples;
    le["pass"] = e.pass;
    le["witness"] = ToJson(e.witness);
    entries.push_back(le);
  }
  laws["entries"] = entries;
  report["laws"] = laws;

  if (res.uniqueness) {
    Json u;
    u["max_difference"] = res.uniqueness->max_difference;
    u["witness_index"] = res.uniqueness->witness_index;
    u["tolerance"] = res.uniqueness->tolerance;
    u["pass"] = res.uniqueness->pass;
    report["uniqueness"] = u;
  } else {
    report["uniqueness"] = nullptr;
  }

  Json cstar;
  cstar["max_ratio"] = res.cstar.max_ratio;
  cstar["max_ratio_reversed"] = res.cstar.max_ratio_reversed;
  cstar["witness_index"] = res.cstar.witness_index;
  cstar["witness"] = res.cstar.witness ? ToJson(*res.cstar.witness) : Json(nullptr);
  cstar["tolerance"] = res.cstar.tolerance;
  cstar["pass"] = res.cstar.pass;
  report["cstar"] = cstar;

  Json audit;
  audit["regime"] = res.corollary_regime;
  audit["derived"] = res.corollary.derived;
  audit["stated"] = res.corollary.stated;
  audit["stated_sign_anomaly"] = res.corollary.stated_sign_anomaly;
  report["corollary_audit"] = audit;
  return report;
}

std::string TraceCsv(const ScenarioResult& res) {
  std::ostringstream os;
  os << "probe_id,radius,n,diff_norm,error_vs_limit,bound,ratio\n";
  const double l = res.direction.lipschitz;
  for (std::size_t p = 0; p < res.traces.size(); ++p) {
    const auto& t = res.traces[p];
    const double radius = Norm(t.x);
    const double base_bound = res.bound.bound[p];
    double envelope = base_bound;
    for (std::size_t n = 0; n < t.iterates.size(); ++n) {
      const double err = t.errors_vs_limit[n];
      const ExtReal ratio = SafeRatio(err, envelope);
      os << p << ',' << FormatDouble17(radius) << ',' << n << ',';
      if (n < t.diffs.size()) os << FormatDouble17(t.diffs[n]);
      os << ',' << FormatDouble17(err) << ',' << FormatDouble17(envelope) << ','
         << (ratio.is_infinite() ? std::string("inf") : FormatDouble17(ratio.value())) << '\n';
      envelope *= l;
    }
  }
  return os.str();
}

Json ManifestJson(const ScenarioConfig& cfg, const ScenarioResult& res, const fs::path& out_dir,
                  const std::string& timestamp) {
  Json m;
  m["tool"] = "invstab";
  m["tool_version"] = kToolVersion;
  m["timestamp"] = timestamp;
  m["config"] = cfg.source;
  m["algebra"] = Json{{"kind", AlgebraName(cfg.algebra.kind)}, {"dim", cfg.algebra.dim}};
  m["direction"] = Json{{"q", res.direction.q},
                        {"i", res.direction.index},
                        {"L", res.direction.lipschitz}};
  m["corollary_constants"] = Json{{"regime", res.corollary_regime},
                                  {"derived", res.corollary.derived},
                                  {"stated", res.corollary.stated},
                                  {"stated_sign_anomaly", res.corollary.stated_sign_anomaly}};
  m["num_probes"] = res.probes.size();
  m["files"] = Json{{"manifest", (out_dir / "manifest.json").string()},
                    {"report", (out_dir / "report.json").string()},
                    {"trace", (out_dir / "trace.csv").string()}};
  return m;
}

ScenarioResult RunScenarioToDirectory(const ScenarioConfig& cfg, const fs::path& out_dir) {
  ScenarioResult res = RunScenario(cfg);
  fs::create_directories(out_dir);
  WriteFileAtomic(out_dir / "report.json", DumpJson17(ReportJson(res)));
  WriteFileAtomic(out_dir / "trace.csv", TraceCsv(res));
  WriteFileAtomic(out_dir / "manifest.json",
                  DumpJson17(ManifestJson(cfg, res, out_dir, TimestampUtc())));
  return res;
}

namespace {

Json ParseSweepValue(const std::string& param, const std::string& text) {
  try {
    std::size_t used = 0;
    if (param == "dim" || param == "num_probes") {
      const long long v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    }
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kConfigError, "sweep value '" + text + "' is not a number for " + param);
  }
}

void ApplySweepValue(Json& cfg, const std::string& param, const Json& value) {
  if (param == "theta") {
    const double theta = value.get<double>();
    cfg["control"]["theta"] = theta;
    for (const char* key : {"perturbation", "perturbation2"}) {
      if (cfg.contains(key) && cfg[key].is_object()) cfg[key]["theta_delta"] = theta / 3.0;
    }
  } else if (param == "r") {
    cfg["control"]["r"] = value;
    for (const char* key : {"perturbation", "perturbation2"}) {
      if (cfg.contains(key) && cfg[key].is_object()) cfg[key]["r"] = value;
    }
  } else if (param == "dim") {
    cfg["algebra"]["dim"] = value;
    // Hand-written probes are sized for the original dimension.
    if (cfg.contains("sampling") && cfg["sampling"].is_object()) {
      cfg["sampling"].erase("extra_probes");
    }
  } else if (param == "num_probes") {
    cfg["sampling"]["num_probes"] = value;
  } else {
    throw Error(ErrorCode::kConfigError,
                "sweep param must be one of theta, r, dim, num_probes (got '" + param + "')");
  }
}

}  // namespace

std::vector<SweepRow> RunSweep(const Json& base, const std::string& param,
                               const std::vector<std::string>& values, const fs::path& out_dir) {
  if (values.empty()) throw Error(ErrorCode::kConfigError, "sweep needs at least one value");
  std::vector<std::pair<std::string, Json>> parsed;
  for (const auto& v : values) {
    Json cfg = base;
    ApplySweepValue(cfg, param, ParseSweepValue(param, v));
    parsed.emplace_back(v, std::move(cfg));
  }
  fs::create_directories(out_dir);

  std::vector<SweepRow> rows;
  for (const auto& [text, cfg_json] : parsed) {
    SweepRow row;
    row.value = text;
    try {
      const ScenarioConfig cfg = ParseScenario(cfg_json);
      const ScenarioResult res = RunScenarioToDirectory(cfg, out_dir / (param + "_" + text));
      row.status = "ok";
      row.lipschitz = res.direction.lipschitz;
      row.max_bound_ratio = res.bound.max_ratio;
      row.max_law_defect = res.laws.MaxDefect();
      bool hyp = true;
      for (const auto& e : res.hypotheses.entries) hyp = hyp && e.pass;
      row.hypotheses_pass = hyp;
      row.bound_pass = res.bound.pass;
      row.laws_pass = res.laws.AllPass();
      row.cstar_pass = res.cstar.pass;
    } catch (const Error& e) {
      row.status = std::string(ToString(e.code()));
    }
    rows.push_back(std::move(row));
  }
  WriteFileAtomic(out_dir / "sweep.csv", SweepCsv(param, rows));
  return rows;
}

std::string SweepCsv(const std::string& param, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << param
     << ",status,L,max_bound_ratio,max_law_defect,hypotheses_pass,bound_pass,laws_pass,cstar_pass\n";
  auto flag = [](const std::optional<bool>& b) -> std::string {
    return b ? (*b ? "true" : "false") : "";
  };
  for (const auto& r : rows) {
    os << r.value << ',' << r.status << ',';
    if (r.lipschitz) os << FormatDouble17(*r.lipschitz);
    os << ',';
    if (r.max_bound_ratio) {
      os << (r.max_bound_ratio->is_infinite() ? std::string("inf")
                                              : FormatDouble17(r.max_bound_ratio->value()));
    }
    os << ',';
    if (r.max_law_defect) os << FormatDouble17(*r.max_law_defect);
    os << ',' << flag(r.hypotheses_pass) << ',' << flag(r.bound_pass) << ',' << flag(r.laws_pass)
       << ',' << flag(r.cstar_pass) << '\n';
  }
  return os.str();
}

}  // namespace invstab
