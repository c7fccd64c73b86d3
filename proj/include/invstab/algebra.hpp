#pragma once

// Concrete finite-dimensional Banach algebras over the complex numbers:
//   Scalar     C with the modulus,
//   Matrix     M_n(C) with the operator (spectral) norm,
//   Pointwise  C^n with entrywise product and the sup norm.
// Each carries its reference adjoint (conjugate transpose / conjugation).

#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace invstab {

using Complex = std::complex<double>;

enum class AlgebraKind { kScalar, kMatrix, kPointwise };

struct AlgebraSpec {
  AlgebraKind kind = AlgebraKind::kScalar;
  std::size_t dim = 1;

  // Validating factory; Scalar requires dim = 1.
  static AlgebraSpec Make(AlgebraKind kind, std::size_t dim);
  static AlgebraSpec Scalar() { return {AlgebraKind::kScalar, 1}; }
  static AlgebraSpec Matrix(std::size_t n) { return Make(AlgebraKind::kMatrix, n); }
  static AlgebraSpec Pointwise(std::size_t n) { return Make(AlgebraKind::kPointwise, n); }

  // Number of complex entries in an element's storage.
  std::size_t size() const { return kind == AlgebraKind::kMatrix ? dim * dim : dim; }

  friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;
};

class Element {
 public:
  // Validates length and finiteness of every entry. Matrix data is row-major.
  Element(AlgebraSpec spec, std::vector<Complex> data);

  static Element Zero(AlgebraSpec spec);
  static Element Identity(AlgebraSpec spec);
  static Element FromScalar(Complex z) { return Element(AlgebraSpec::Scalar(), {z}); }
  static Element MatrixFromRows(const std::vector<std::vector<Complex>>& rows);
  static Element Diagonal(std::span<const Complex> diag);

  const AlgebraSpec& spec() const { return spec_; }
  std::span<const Complex> data() const { return data_; }
  std::size_t size() const { return data_.size(); }

  const Complex& operator[](std::size_t k) const { return data_[k]; }
  // Matrix entry (row, col).
  const Complex& at(std::size_t row, std::size_t col) const { return data_[row * spec_.dim + col]; }

  bool IsZero() const;
  bool AllFinite() const;

  // Bitwise-exact equality of spec and entries.
  friend bool operator==(const Element&, const Element&) = default;

 private:
  struct Unchecked {};
  Element(Unchecked, AlgebraSpec spec, std::vector<Complex> data)
      : spec_(spec), data_(std::move(data)) {}

  friend Element Add(const Element&, const Element&);
  friend Element Sub(const Element&, const Element&);
  friend Element Scale(Complex, const Element&);
  friend Element Mul(const Element&, const Element&);
  friend Element ConjTranspose(const Element&);
  friend Element Conjugate(const Element&);

  AlgebraSpec spec_;
  std::vector<Complex> data_;
};

// Power-iteration controls for the matrix operator norm.
struct NormOptions {
  double rel_tol = 1e-12;
  int max_iter = 10000;
};

Element Add(const Element& a, const Element& b);
Element Sub(const Element& a, const Element& b);
Element Scale(Complex lambda, const Element& a);
inline Element Scale(double t, const Element& a) { return Scale(Complex(t, 0.0), a); }
Element Mul(const Element& a, const Element& b);

// Scalar: modulus. Pointwise: max modulus. Matrix: largest singular value,
// by power iteration on a^* a started from the normalized all-ones vector.
// Non-finite entries give +inf.
double Norm(const Element& a, const NormOptions& opts = {});

// Scalar/Pointwise: entrywise conjugate. Matrix: conjugate transpose.
Element ConjTranspose(const Element& a);
// Entrywise conjugate for every kind (for matrices this is not the adjoint).
Element Conjugate(const Element& a);

// Direction with i.i.d. standard complex Gaussian entries, normalized to unit
// norm, scaled by a radius drawn log-uniformly from [r_min, r_max].
Element SampleElement(const AlgebraSpec& spec, double r_min, double r_max, std::mt19937_64& rng);

// Unit-norm element with a Gaussian direction.
Element SampleUnitElement(const AlgebraSpec& spec, std::mt19937_64& rng);

}  // namespace invstab
