#include "doctest.h"

#include "sepfix/criteria.hpp"
#include "sepfix/errors.hpp"
#include "sepfix/operator.hpp"

#include "oracles.hpp"

using namespace sepfix;

namespace {

Matrix random_matrix(Eigen::Index d, unsigned seed) {
  std::srand(seed);
  return Matrix::Random(d, d);
}

}  // namespace

TEST_CASE("hermitian operator rejects non-hermitian input") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianOperator{m}, ValidationError);
  m(1, 0) = 1.0 + 1e-14;
  const HermitianOperator h{m};
  CHECK(hermiticity_defect(h.matrix()) == 0.0);
}

TEST_CASE("factories and arithmetic") {
  const auto id = HermitianOperator::identity(3);
  CHECK(id.trace() == doctest::Approx(3.0));
  CHECK(HermitianOperator::zero(3).frobenius_norm() == 0.0);
  const auto p = HermitianOperator::projector(UnitVector::basis(3, 1).amplitudes());
  CHECK(p(1, 1).real() == doctest::Approx(1.0));
  const auto sum = id + 2.0 * p - p;
  CHECK(sum.trace() == doctest::Approx(4.0));
  Eigen::VectorXd diag(3);
  diag << -1.0, 0.5, 2.0;
  const auto d = HermitianOperator::diagonal(diag);
  CHECK(trace_norm(d) == doctest::Approx(3.5));
  CHECK(min_eigenvalue(d) == doctest::Approx(-1.0));
  CHECK(max_eigenvalue(d) == doctest::Approx(2.0));
  CHECK(d.eigenvalues()(0) == doctest::Approx(-1.0));
}

TEST_CASE("unit vectors are checked") {
  Vector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(UnitVector{v}, ValidationError);
  const auto u = UnitVector::normalized(v);
  CHECK(u.amplitudes().norm() == doctest::Approx(1.0));
  CHECK_THROWS(UnitVector::normalized(Vector::Zero(2)));
}

TEST_CASE("density matrix validation") {
  CHECK_THROWS_AS(DensityMatrix(HermitianOperator::identity(4), {2, 2}), ValidationError);
  CHECK_THROWS_AS(DensityMatrix(HermitianOperator::identity(4) * 0.25, {2, 3}), DimensionError);
  Eigen::VectorXd p(2);
  p << 1.5, -0.5;
  CHECK_THROWS_AS(DensityMatrix(HermitianOperator::diagonal(p), {2, 1}), ValidationError);
  const auto mm = DensityMatrix::maximally_mixed({2, 3});
  CHECK(mm.min_eigenvalue() == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("partial trace of a tensor product recovers the factors") {
  const HermitianOperator a = random_hermitian(2, 3);
  const HermitianOperator b = random_hermitian(3, 4);
  const HermitianOperator ab = tensor(a, b);
  const Dims dims{2, 3};
  const auto tb = partial_trace(ab, dims, Subsystem::Second);
  const auto ta = partial_trace(ab, dims, Subsystem::First);
  CHECK((tb.matrix() - a.matrix() * b.trace()).norm() < 1e-12);
  CHECK((ta.matrix() - b.matrix() * a.trace()).norm() < 1e-12);
}

TEST_CASE("partial trace preserves the trace on random operators") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Matrix g = random_matrix(6, seed);
    const HermitianOperator h(Matrix(g + g.adjoint()));
    const double t = h.trace();
    CHECK(partial_trace(h, {2, 3}, Subsystem::First).trace() == doctest::Approx(t));
    CHECK(partial_trace(h, {2, 3}, Subsystem::Second).trace() == doctest::Approx(t));
  }
}

TEST_CASE("partial transpose is an involution and keeps the trace") {
  const DensityMatrix rho = random_full_rank({2, 3}, 9);
  const auto t = partial_transpose(rho);
  CHECK(t.trace() == doctest::Approx(1.0));
  const auto back = partial_transpose(t, {2, 3});
  CHECK((back.matrix() - rho.matrix()).norm() < 1e-14);
  CHECK_THROWS_AS(partial_transpose(HermitianOperator::identity(3), {3, 1}), DimensionError);
}

TEST_CASE("partial transpose of the singlet") {
  // PT of |psi-><psi-| has eigenvalues {1/2, 1/2, 1/2, -1/2}.
  const auto t = partial_transpose(werner(1.0));
  CHECK(min_eigenvalue(t) == doctest::Approx(-0.5));
  CHECK(trace_norm(t) == doctest::Approx(2.0));
}

TEST_CASE("trace norm agrees with the eigenvalue oracle") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const HermitianOperator h = random_hermitian(4, seed);
    CHECK(trace_norm(h) == doctest::Approx(oracle::trace_norm(h.matrix())));
    CHECK(trace_norm(h) == doctest::Approx(1.0));
  }
}

TEST_CASE("expectation values") {
  const auto z = HermitianOperator::diagonal(Eigen::Vector2d(1.0, -1.0));
  CHECK(expectation(z, UnitVector::basis(2, 0)) == doctest::Approx(1.0));
  Vector plus(2);
  plus << 1.0, 1.0;
  CHECK(std::abs(expectation(z, UnitVector::normalized(plus))) < 1e-15);
}
