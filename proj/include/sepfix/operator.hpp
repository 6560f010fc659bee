#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <utility>

namespace sepfix {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Per-entry tolerance for the conjugate-symmetry invariant.
inline constexpr double kHermitianTol = 1e-12;
// Tolerance used after floating-point accumulation, before re-symmetrizing.
inline constexpr double kAccumulatedHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

// Subsystem dimensions (n_A, n_B). Composite index is i = i_A * n_B + i_B.
struct Dims {
  std::size_t a = 1;
  std::size_t b = 1;

  std::size_t total() const { return a * b; }
  bool single_party() const { return b == 1; }
  bool operator==(const Dims&) const = default;
};

enum class Subsystem { First, Second };

/// Dense self-adjoint operator on a small Hilbert space.
///
/// The stored matrix is always exactly Hermitian: construction checks the
/// input against a tolerance and then replaces it by (M + M^dagger)/2.
class HermitianOperator {
 public:
  HermitianOperator() : m_(Matrix::Zero(1, 1)) {}

  // Throws ValidationError if |M_ij - conj(M_ji)| > tol for some entry.
  explicit HermitianOperator(const Matrix& m, double tol = kHermitianTol);

  static HermitianOperator zero(std::size_t dim);
  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator diagonal(const Eigen::VectorXd& d);
  static HermitianOperator projector(const Vector& v);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  cplx operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.norm(); }

  // Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const;

  HermitianOperator& operator+=(const HermitianOperator& o);
  HermitianOperator& operator-=(const HermitianOperator& o);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) {
    return a += b;
  }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) {
    return a -= b;
  }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }

 private:
  struct Unchecked {};
  HermitianOperator(Matrix m, Unchecked) : m_(std::move(m)) {}

  Matrix m_;
};

// Largest |M_ij - conj(M_ji)| over all entries.
double hermiticity_defect(const Matrix& m);

/// Unit vector in C^dim; normalized on construction.
class UnitVector {
 public:
  // Throws ValidationError unless the norm is 1 within 1e-12.
  explicit UnitVector(Vector v);
  // Normalizes a nonzero vector.
  static UnitVector normalized(const Vector& v);
  static UnitVector basis(std::size_t dim, std::size_t k);

  std::size_t dim() const { return static_cast<std::size_t>(v_.size()); }
  const Vector& amplitudes() const { return v_; }

 private:
  struct Unchecked {};
  UnitVector(Vector v, Unchecked) : v_(std::move(v)) {}

  Vector v_;
};

/// Density matrix of a (possibly single-party) bipartite system.
class DensityMatrix {
 public:
  // Throws DimensionError when dims do not match the operator, and
  // ValidationError when trace != 1 or the spectrum dips below -1e-10.
  DensityMatrix(HermitianOperator op, Dims dims);

  static DensityMatrix maximally_mixed(Dims dims);

  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  Dims dims() const { return dims_; }
  std::size_t dim() const { return op_.dim(); }
  double min_eigenvalue() const;

 private:
  HermitianOperator op_;
  Dims dims_;
};

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
Vector tensor(const Vector& a, const Vector& b);

HermitianOperator partial_trace(const HermitianOperator& a, Dims dims, Subsystem traced_out);

// Transposes the second-factor indices. Requires n_B >= 2.
HermitianOperator partial_transpose(const DensityMatrix& rho);
HermitianOperator partial_transpose(const HermitianOperator& a, Dims dims);

double trace_norm(const HermitianOperator& a);
double min_eigenvalue(const HermitianOperator& a);
double max_eigenvalue(const HermitianOperator& a);

// <v|a|v>. Throws ValidationError if the imaginary part exceeds 1e-10.
double expectation(const HermitianOperator& a, const UnitVector& v);

}  // namespace sepfix
