#include "invstab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "invstab/errors.hpp"

namespace invstab {

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSpecMismatch: return "SpecMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kDegenerateDirection: return "DegenerateDirection";
    case ErrorCode::kKindSpecMismatch: return "KindSpecMismatch";
    case ErrorCode::kNotContractive: return "NotContractive";
    case ErrorCode::kExhausted: return "Exhausted";
    case ErrorCode::kNoContraction: return "NoContraction";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kNonCauchy: return "NonCauchy";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

AlgebraSpec AlgebraSpec::Make(AlgebraKind kind, std::size_t dim) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "algebra dimension must be >= 1");
  if (kind == AlgebraKind::kScalar && dim != 1) {
    throw Error(ErrorCode::kInvalidArgument, "scalar algebra has dimension 1");
  }
  return {kind, dim};
}

Element::Element(AlgebraSpec spec, std::vector<Complex> data)
    : spec_(spec), data_(std::move(data)) {
  if (spec_.dim < 1 || (spec_.kind == AlgebraKind::kScalar && spec_.dim != 1)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid algebra spec");
  }
  if (data_.size() != spec_.size()) {
    throw Error(ErrorCode::kSpecMismatch, "element has " + std::to_string(data_.size()) +
                                              " entries, spec requires " +
                                              std::to_string(spec_.size()));
  }
  if (!AllFinite()) throw Error(ErrorCode::kInvalidArgument, "element entries must be finite");
}

Element Element::Zero(AlgebraSpec spec) {
  return Element(Unchecked{}, spec, std::vector<Complex>(spec.size()));
}

Element Element::Identity(AlgebraSpec spec) {
  std::vector<Complex> data(spec.size());
  if (spec.kind == AlgebraKind::kMatrix) {
    for (std::size_t k = 0; k < spec.dim; ++k) data[k * spec.dim + k] = 1.0;
  } else {
    std::fill(data.begin(), data.end(), Complex(1.0));
  }
  return Element(Unchecked{}, spec, std::move(data));
}

Element Element::MatrixFromRows(const std::vector<std::vector<Complex>>& rows) {
  const std::size_t n = rows.size();
  std::vector<Complex> data;
  data.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw Error(ErrorCode::kSpecMismatch, "matrix rows must be square");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Element(AlgebraSpec::Matrix(n), std::move(data));
}

Element Element::Diagonal(std::span<const Complex> diag) {
  const std::size_t n = diag.size();
  std::vector<Complex> data(n * n);
  for (std::size_t k = 0; k < n; ++k) data[k * n + k] = diag[k];
  return Element(AlgebraSpec::Matrix(n), std::move(data));
}

bool Element::IsZero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return z.real() == 0.0 && z.imag() == 0.0; });
}

bool Element::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

namespace {

void RequireSameSpec(const Element& a, const Element& b) {
  if (!(a.spec() == b.spec())) throw Error(ErrorCode::kSpecMismatch, "operands differ in spec");
}

std::vector<Complex> MatVec(const std::vector<Complex>& h, std::size_t n,
                            const std::vector<Complex>& v) {
  std::vector<Complex> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += h[i * n + k] * v[k];
    w[i] = acc;
  }
  return w;
}

// h^(2^kSquarings), rescaled after each squaring to stay in range. Iterating
// with it instead of h keeps near-degenerate top eigenvalues within the cap.
constexpr int kSquarings = 6;
constexpr int kQuickIterations = 64;

std::vector<Complex> RescaledPower(const std::vector<Complex>& h, std::size_t n) {
  std::vector<Complex> g = h;
  for (int s = 0; s < kSquarings; ++s) {
    std::vector<Complex> sq(n * n);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += g[i * n + k] * g[k * n + j];
        sq[i * n + j] = acc;
        m = std::max(m, std::abs(acc));
      }
    }
    if (!(m > 0.0) || !std::isfinite(m)) break;
    for (auto& z : sq) z /= m;
    g = std::move(sq);
  }
  return g;
}

// Largest eigenvalue of the Hermitian positive semidefinite matrix h (n x n,
// row-major), by power iteration with g (a positive power of h) from `start`.
// Returns a negative value when the iterate collapses onto the null space.
double PowerIterate(const std::vector<Complex>& h, const std::vector<Complex>& g, std::size_t n,
                    std::vector<Complex> v, const NormOptions& opts, bool* converged) {
  std::vector<Complex> w(n);
  double mu_prev = -1.0;
  *converged = false;
  for (int it = 0; it < opts.max_iter; ++it) {
    // Rayleigh quotient <v, Hv> with |v| = 1.
    const std::vector<Complex> hv = MatVec(h, n, v);
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += (std::conj(v[i]) * hv[i]).real();
    w = MatVec(g, n, v);
    double wn = 0.0;
    for (const auto& z : w) wn += std::norm(z);
    wn = std::sqrt(wn);
    if (!std::isfinite(wn)) {
      throw Error(ErrorCode::kConvergenceFailure, "power iteration produced non-finite values");
    }
    if (wn == 0.0) {
      *converged = true;
      return -1.0;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
    if (mu_prev >= 0.0 && std::abs(mu - mu_prev) <= opts.rel_tol * std::abs(mu)) {
      *converged = true;
      return mu;
    }
    mu_prev = mu;
  }
  return mu_prev;
}

double MatrixOperatorNorm(const Element& a, const NormOptions& opts) {
  const std::size_t n = a.spec().dim;
  if (a.IsZero()) return 0.0;
  if (!a.AllFinite()) return std::numeric_limits<double>::infinity();
  // Work with a / s so that a^* a neither overflows nor underflows.
  double s = 0.0;
  for (const auto& z : a.data()) s = std::max(s, std::abs(z));
  auto entry = [&](std::size_t i, std::size_t j) { return a.at(i, j) / s; };
  // h = (a/s)^* (a/s)
  std::vector<Complex> h(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += std::conj(entry(k, i)) * entry(k, j);
      h[i * n + j] = acc;
    }
  }
  // Column norms squared are lower bounds for the top eigenvalue; they flag a
  // start vector with no component along the dominant eigenspace.
  std::size_t best_col = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (h[k * n + k].real() > h[best_col * n + best_col].real()) best_col = k;
  }
  const double diag_max = h[best_col * n + best_col].real();

  auto top = [&](const std::vector<Complex>& v0) {
    bool converged = false;
    // Plain iteration first; the squared operator only when the top
    // eigenvalues are too close for it.
    NormOptions quick = opts;
    quick.max_iter = std::min(opts.max_iter, kQuickIterations);
    double mu = PowerIterate(h, h, n, v0, quick, &converged);
    if (!converged && quick.max_iter < opts.max_iter) {
      mu = PowerIterate(h, RescaledPower(h, n), n, v0, opts, &converged);
    }
    if (!converged) {
      throw Error(ErrorCode::kConvergenceFailure, "operator norm iteration cap reached");
    }
    return mu;
  };
  double mu = top(std::vector<Complex>(n, Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0)));
  if (mu < diag_max * (1.0 - 1e-9)) {
    std::vector<Complex> basis(n);
    basis[best_col] = 1.0;
    mu = std::max(mu, top(basis));
  }
  return s * std::sqrt(std::max(mu, diag_max));
}

}  // namespace

Element Add(const Element& a, const Element& b) {
  RequireSameSpec(a, b);
  std::vector<Complex> out(a.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] + b[k];
  return Element(Element::Unchecked{}, a.spec(), std::move(out));
}

Element Sub(const Element& a, const Element& b) {
  RequireSameSpec(a, b);
  std::vector<Complex> out(a.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] - b[k];
  return Element(Element::Unchecked{}, a.spec(), std::move(out));
}

Element Scale(Complex lambda, const Element& a) {
  std::vector<Complex> out(a.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = lambda * a[k];
  return Element(Element::Unchecked{}, a.spec(), std::move(out));
}

Element Mul(const Element& a, const Element& b) {
  RequireSameSpec(a, b);
  const AlgebraSpec& spec = a.spec();
  std::vector<Complex> out(a.size());
  if (spec.kind == AlgebraKind::kMatrix) {
    const std::size_t n = spec.dim;
    // Fixed summation order: the anti-multiplicativity of the adjoint then
    // holds bit-for-bit, (ab)^* == b^* a^*.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += a.at(i, k) * b.at(k, j);
        out[i * n + j] = acc;
      }
    }
  } else {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] * b[k];
  }
  return Element(Element::Unchecked{}, spec, std::move(out));
}

double Norm(const Element& a, const NormOptions& opts) {
  switch (a.spec().kind) {
    case AlgebraKind::kScalar:
      return std::abs(a[0]);
    case AlgebraKind::kPointwise: {
      double m = 0.0;
      for (const auto& z : a.data()) m = std::max(m, std::abs(z));
      return m;
    }
    case AlgebraKind::kMatrix:
      return MatrixOperatorNorm(a, opts);
  }
  return 0.0;
}

Element ConjTranspose(const Element& a) {
  const AlgebraSpec& spec = a.spec();
  std::vector<Complex> out(a.size());
  if (spec.kind == AlgebraKind::kMatrix) {
    const std::size_t n = spec.dim;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] = std::conj(a.at(j, i));
    }
  } else {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::conj(a[k]);
  }
  return Element(Element::Unchecked{}, spec, std::move(out));
}

Element Conjugate(const Element& a) {
  std::vector<Complex> out(a.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::conj(a[k]);
  return Element(Element::Unchecked{}, a.spec(), std::move(out));
}

Element SampleUnitElement(const AlgebraSpec& spec, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<Complex> data(spec.size());
    for (auto& z : data) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z = Complex(re, im);
    }
    Element g(spec, std::move(data));
    const double n = Norm(g);
    if (n > 0.0) return Scale(1.0 / n, g);
  }
  throw Error(ErrorCode::kDegenerateDirection, "gaussian direction was zero on every redraw");
}

Element SampleElement(const AlgebraSpec& spec, double r_min, double r_max, std::mt19937_64& rng) {
  if (!(r_min > 0.0) || !(r_min <= r_max)) {
    throw Error(ErrorCode::kInvalidArgument, "radius range must satisfy 0 < r_min <= r_max");
  }
  Element u = SampleUnitElement(spec, rng);
  std::uniform_real_distribution<double> unif(std::log(r_min), std::log(r_max));
  const double radius = r_min == r_max ? r_min : std::clamp(std::exp(unif(rng)), r_min, r_max);
  return Scale(radius, u);
}

}  // namespace invstab
