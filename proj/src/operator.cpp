#include "sepfix/operator.hpp"

#include "sepfix/errors.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <string>

namespace sepfix {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_dims(const HermitianOperator& a, Dims dims, const char* where) {
  if (dims.a == 0 || dims.b == 0 || dims.total() != a.dim()) {
    throw DimensionError(std::string(where) + ": dims (" + std::to_string(dims.a) + "," +
                         std::to_string(dims.b) + ") do not match operator dimension " +
                         std::to_string(a.dim()));
  }
}

}  // namespace

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(const Matrix& m, double tol) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionError("HermitianOperator: matrix must be square and non-empty");
  }
  const double defect = hermiticity_defect(m);
  if (!(defect <= tol)) {
    throw ValidationError("HermitianOperator: conjugate-symmetry defect " +
                          std::to_string(defect) + " exceeds tolerance");
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  if (dim == 0) throw DimensionError("HermitianOperator::zero: dim must be >= 1");
  return {Matrix::Zero(idx(dim), idx(dim)), Unchecked{}};
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  if (dim == 0) throw DimensionError("HermitianOperator::identity: dim must be >= 1");
  return {Matrix::Identity(idx(dim), idx(dim)), Unchecked{}};
}

HermitianOperator HermitianOperator::diagonal(const Eigen::VectorXd& d) {
  if (d.size() == 0) throw DimensionError("HermitianOperator::diagonal: empty");
  return {d.cast<cplx>().asDiagonal(), Unchecked{}};
}

HermitianOperator HermitianOperator::projector(const Vector& v) {
  if (v.size() == 0) throw DimensionError("HermitianOperator::projector: empty");
  Matrix p = v * v.adjoint();
  return {0.5 * (p + p.adjoint()), Unchecked{}};
}

Eigen::VectorXd HermitianOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  if (o.dim() != dim()) throw DimensionError("HermitianOperator: dimension mismatch in +");
  m_ += o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& o) {
  if (o.dim() != dim()) throw DimensionError("HermitianOperator: dimension mismatch in -");
  m_ -= o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  m_ *= s;
  return *this;
}

UnitVector::UnitVector(Vector v) : v_(std::move(v)) {
  if (v_.size() == 0) throw DimensionError("UnitVector: empty");
  const double err = std::abs(v_.norm() - 1.0);
  if (!(err <= 1e-12)) {
    throw ValidationError("UnitVector: norm deviates from 1 by " + std::to_string(err));
  }
}

UnitVector UnitVector::normalized(const Vector& v) {
  const double nrm = v.norm();
  if (v.size() == 0 || !(nrm > 0.0) || !std::isfinite(nrm)) {
    throw ValidationError("UnitVector::normalized: zero or non-finite vector");
  }
  return {v / nrm, Unchecked{}};
}

UnitVector UnitVector::basis(std::size_t dim, std::size_t k) {
  if (k >= dim) throw DimensionError("UnitVector::basis: index out of range");
  Vector v = Vector::Zero(idx(dim));
  v(idx(k)) = 1.0;
  return {std::move(v), Unchecked{}};
}

DensityMatrix::DensityMatrix(HermitianOperator op, Dims dims) : op_(std::move(op)), dims_(dims) {
  require_dims(op_, dims_, "DensityMatrix");
  const double tr = op_.trace();
  if (!(std::abs(tr - 1.0) <= kTraceTol)) {
    throw ValidationError("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
  }
  const double lo = sepfix::min_eigenvalue(op_);
  if (!(lo >= -kPsdTol)) {
    throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(lo));
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Dims dims) {
  return {HermitianOperator::identity(dims.total()) * (1.0 / static_cast<double>(dims.total())),
          dims};
}

double DensityMatrix::min_eigenvalue() const { return sepfix::min_eigenvalue(op_); }

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  Matrix k = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return HermitianOperator(k, kAccumulatedHermitianTol);
}

Vector tensor(const Vector& a, const Vector& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

HermitianOperator partial_trace(const HermitianOperator& a, Dims dims, Subsystem traced_out) {
  require_dims(a, dims, "partial_trace");
  const auto na = idx(dims.a);
  const auto nb = idx(dims.b);
  const Matrix& m = a.matrix();
  if (traced_out == Subsystem::Second) {
    Matrix r = Matrix::Zero(na, na);
    for (Eigen::Index i = 0; i < na; ++i)
      for (Eigen::Index j = 0; j < na; ++j)
        for (Eigen::Index k = 0; k < nb; ++k) r(i, j) += m(i * nb + k, j * nb + k);
    return HermitianOperator(r, kAccumulatedHermitianTol);
  }
  Matrix r = Matrix::Zero(nb, nb);
  for (Eigen::Index i = 0; i < nb; ++i)
    for (Eigen::Index j = 0; j < nb; ++j)
      for (Eigen::Index k = 0; k < na; ++k) r(i, j) += m(k * nb + i, k * nb + j);
  return HermitianOperator(r, kAccumulatedHermitianTol);
}

HermitianOperator partial_transpose(const HermitianOperator& a, Dims dims) {
  require_dims(a, dims, "partial_transpose");
  if (dims.b < 2) throw DimensionError("partial_transpose: single-party input (n_B = 1)");
  const auto na = idx(dims.a);
  const auto nb = idx(dims.b);
  const Matrix& m = a.matrix();
  Matrix r(m.rows(), m.cols());
  for (Eigen::Index ia = 0; ia < na; ++ia)
    for (Eigen::Index ib = 0; ib < nb; ++ib)
      for (Eigen::Index ja = 0; ja < na; ++ja)
        for (Eigen::Index jb = 0; jb < nb; ++jb)
          r(ia * nb + ib, ja * nb + jb) = m(ia * nb + jb, ja * nb + ib);
  return HermitianOperator(r, kAccumulatedHermitianTol);
}

HermitianOperator partial_transpose(const DensityMatrix& rho) {
  return partial_transpose(rho.op(), rho.dims());
}

double trace_norm(const HermitianOperator& a) { return a.eigenvalues().cwiseAbs().sum(); }

double min_eigenvalue(const HermitianOperator& a) { return a.eigenvalues().minCoeff(); }

double max_eigenvalue(const HermitianOperator& a) { return a.eigenvalues().maxCoeff(); }

double expectation(const HermitianOperator& a, const UnitVector& v) {
  if (a.dim() != v.dim()) throw DimensionError("expectation: dimension mismatch");
  const cplx e = v.amplitudes().dot(a.matrix() * v.amplitudes());
  if (!(std::abs(e.imag()) < 1e-10)) {
    throw ValidationError("expectation: imaginary part " + std::to_string(e.imag()));
  }
  return e.real();
}

}  // namespace sepfix
