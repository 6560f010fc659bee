#include "doctest.h"

#include "sepfix/criteria.hpp"
#include "sepfix/ensemble.hpp"
#include "sepfix/errors.hpp"
#include "sepfix/params.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace sepfix;

namespace {

DensityMatrix diag2(double a) { return diagonal_state(Eigen::Vector2d(a, 1.0 - a)); }

}  // namespace

TEST_CASE("choose_K is the smallest admissible order") {
  CHECK(choose_K(0.5, 2) == 1);
  CHECK(choose_K(0.3, 2) == 1);   // 1/(0.6) - 1 = 0.67
  CHECK(choose_K(0.1, 2) == 4);   // 1/(0.2) - 1 = 4
  CHECK(choose_K(0.05, 2) == 9);  // 1/(0.1) - 1 = 9
  CHECK(choose_K(0.01, 3) == 33);
  for (double p0 : {0.3, 0.11, 0.07, 0.013}) {
    const std::uint64_t K = choose_K(p0, 2);
    CHECK((K + 1) * 2 * p0 >= 1.0 - 1e-12);
    if (K > 1) CHECK(K * 2 * p0 < 1.0);
  }
  CHECK_THROWS_AS(choose_K(0.0, 2), DomainError);
  CHECK_THROWS_AS(choose_K(0.6, 2), DomainError);
}

TEST_CASE("smeared spectrum validation") {
  const std::vector<UnitVector> e{UnitVector::basis(2, 0), UnitVector::basis(2, 1)};
  CHECK_THROWS_AS(SmearedSpectrum(Eigen::Vector2d(0.9, 0.2), e, 5), ValidationError);
  // K = 1 needs (K+1) n p0 = 4 p0 >= 1.
  CHECK_THROWS_AS(SmearedSpectrum(Eigen::Vector2d(0.9, 0.1), e, 1), ValidationError);
  CHECK_NOTHROW(SmearedSpectrum(Eigen::Vector2d(0.9, 0.1), e, 4));
  const std::vector<UnitVector> bad{UnitVector::basis(2, 0), UnitVector::basis(2, 0)};
  CHECK_THROWS_AS(SmearedSpectrum(Eigen::Vector2d(0.5, 0.5), bad, 1), ValidationError);
  CHECK_THROWS_AS(SmearedSpectrum::from_density(diagonal_state(Eigen::Vector2d(1.0, 0.0))),
                  DomainError);
  CHECK_THROWS_AS(SmearedSpectrum::from_density(werner(0.5)), DimensionError);
}

TEST_CASE("smeared density is nonnegative and within its analytic range") {
  const auto spec = SmearedSpectrum::from_density(diag2(0.8));
  const LogRange r = ln_mu_range(spec);
  const SampleSet s = make_sample_set(4, 5000, {2, 1}, 1);
  for (std::size_t i = 0; i < s.count(); ++i) {
    const double m = mu_smeared(spec, s[i].phi);
    CHECK(m >= 0.0);
    CHECK(std::log(m) >= r.lo - 1e-9);
    CHECK(std::log(m) <= r.hi + 1e-9);
  }
  // The range is attained on the eigenvectors.
  CHECK(std::log(mu_smeared(spec, UnitVector::basis(2, 0))) == doctest::Approx(r.hi));
}

TEST_CASE("smeared density evaluated directly") {
  const auto spec = SmearedSpectrum::from_density(diag2(0.7), 2);
  Vector v(2);
  v << 0.6, cplx(0.0, 0.8);
  const UnitVector phi(v);
  const double ck = oracle::ck_factorial(2, 2);
  const double s = 1.0 / 6.0;
  const double expected = ck * ((0.7 - s) * std::pow(0.36, 4) + (0.3 - s) * std::pow(0.64, 4));
  CHECK(mu_smeared(spec, phi) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::exp(spec.ln_mu({phi.amplitudes().data(), 2})) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("closed-form reconstruction recovers the spectrum") {
  for (unsigned n = 2; n <= 3; ++n)
    for (double p0 : {1.0 / n, 0.2, 0.1, 0.04}) {
      std::vector<double> p(n, (1.0 - p0) / (n - 1));
      p[0] = p0;
      const unsigned K = static_cast<unsigned>(choose_K(p0, n));
      const double ck = std::exp(params::ln_CK(K, n));
      CHECK(oracle::smeared_mass(p, K, ck) == doctest::Approx(1.0).epsilon(1e-9));
      const auto rec = oracle::smeared_reconstruction(p, K, ck);
      for (unsigned j = 0; j < n; ++j) CHECK(rec[j] == doctest::Approx(p[j]).epsilon(1e-9));
    }
}

TEST_CASE("monte carlo reconstruction of a single-party state") {
  const DensityMatrix rho = random_full_rank({2, 1}, 17);
  const std::uint64_t K = choose_K(rho.min_eigenvalue(), 2);
  const SampleSet s = make_sample_set(9, 50000, {2, 1}, 1);
  const Estimate est = reconstruct(rho, K, s, 1);
  CHECK(trace_norm(est.value - rho.op()) <= 3.0 * est.noise_floor);
  CHECK(est.noise_floor > 0.0);
}

TEST_CASE("uniform state reconstructs within the noise floor") {
  const DensityMatrix rho = DensityMatrix::maximally_mixed({2, 1});
  const SampleSet s = make_sample_set(2, 20000, {2, 1}, 1);
  const Estimate est = reconstruct(rho, 1, s, 1);
  CHECK(trace_norm(est.value - rho.op()) <= 3.0 * est.noise_floor);
}

TEST_CASE("factor-wise reconstruction") {
  const DensityMatrix a = diag2(0.7);
  const DensityMatrix b = diag2(0.4);
  const SampleSet s = make_sample_set(5, 50000, {2, 2}, 1);
  const Estimate est = reconstruct_product(a, choose_K(0.3, 2), b, choose_K(0.4, 2), s, 1);
  CHECK(trace_norm(est.value - tensor(a.op(), b.op())) <= 3.0 * est.noise_floor);
}

TEST_CASE("moment closed forms agree with the Dirichlet oracle") {
  for (std::size_t n = 2; n <= 3; ++n) {
    const HermitianOperator a = random_hermitian(n, 100 + n);
    CHECK((moment_single_closed(a).matrix() - oracle::single_moment(a.matrix())).norm() < 1e-14);
    const HermitianOperator y = random_hermitian(n * n, 200 + n);
    const Matrix ref = oracle::bipartite_moment(y.matrix(), static_cast<unsigned>(n));
    CHECK((moment_bipartite_closed(y, {n, n}).matrix() - ref).norm() < 1e-14);
  }
  CHECK_THROWS_AS(moment_bipartite_closed(HermitianOperator::identity(6), {2, 3}),
                  DimensionError);
}

TEST_CASE("bipartite moment map has the expected spectrum") {
  // As a linear map on 4x4 Hermitian operators the moment has eigenvalues
  // 1/(n^2(n+1)^2), 1/(n^2(n+1)) and 1/n^2.
  const std::size_t n = 2, d = 4;
  Eigen::MatrixXcd M(d * d, d * d);
  for (std::size_t c = 0; c < d * d; ++c) {
    Matrix e = Matrix::Zero(d, d);
    e(c / d, c % d) = 1.0;
    // Linear extension to non-Hermitian units via the oracle.
    const Matrix img = oracle::bipartite_moment(e, n);
    for (std::size_t r = 0; r < d * d; ++r) M(r, c) = img(r / d, r % d);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
  std::vector<double> ev;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()(i).real());
  std::sort(ev.begin(), ev.end());
  CHECK(ev.front() == doctest::Approx(1.0 / 36.0));
  CHECK(ev.back() == doctest::Approx(1.0 / 4.0));
  CHECK(std::count_if(ev.begin(), ev.end(),
                      [](double x) { return std::abs(x - 1.0 / 12.0) < 1e-12; }) == 6);
  // The library's closed form realises the same map on the identity.
  const auto img = moment_bipartite_closed(HermitianOperator::identity(4), {2, 2});
  CHECK((img.matrix() - Matrix::Identity(4, 4) / 4.0).norm() < 1e-15);
}

TEST_CASE("monte carlo moments within three sigma") {
  const SampleSet single = make_sample_set(31, 40000, {3, 1}, 1);
  const HermitianOperator a = random_hermitian(3, 1);
  const Estimate ma = moment_single_mc(a, single, 1);
  CHECK(trace_norm(ma.value - moment_single_closed(a)) <= 3.0 * ma.noise_floor);
  const SampleSet torus = make_sample_set(32, 40000, {2, 2}, 1);
  const HermitianOperator y = random_hermitian(4, 2);
  const Estimate my = moment_bipartite_mc(y, torus, 1);
  CHECK(trace_norm(my.value - moment_bipartite_closed(y, {2, 2})) <= 3.0 * my.noise_floor);
}

TEST_CASE("image of zero is the average projector") {
  const SampleSet s = make_sample_set(6, 30000, {2, 2}, 1);
  const ImageEstimate e = estimate_image(HermitianOperator::zero(4), s, 1);
  CHECK(e.value.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_norm(e.value - HermitianOperator::identity(4) * 0.25) <= 3.0 * e.noise_floor);
  CHECK(e.min_log_weight == 0.0);
  CHECK(e.max_log_weight == 0.0);
}

TEST_CASE("image of a multiple of the identity scales by its exponential") {
  const SampleSet s = make_sample_set(6, 1000, {2, 2}, 1);
  const ImageEstimate zero = estimate_image(HermitianOperator::zero(4), s, 1);
  const ImageEstimate shifted = estimate_image(HermitianOperator::identity(4) * 2.0, s, 1);
  CHECK((shifted.value.matrix() - zero.value.matrix() * std::exp(2.0)).norm() < 1e-12);
}

TEST_CASE("image estimate is independent of the thread count") {
  const SampleSet s = make_sample_set(8, 10000, {2, 2}, 1);
  const HermitianOperator x = random_hermitian(4, 3) * 3.0;
  const ImageEstimate a = estimate_image(x, s, 1);
  const ImageEstimate b = estimate_image(x, s, 3);
  CHECK(a.value.matrix() == b.value.matrix());
  CHECK(a.noise_floor == b.noise_floor);
}

TEST_CASE("image overflow carries the offending exponent") {
  const SampleSet s = make_sample_set(8, 100, {2, 2}, 1);
  const HermitianOperator x = HermitianOperator::identity(4) * 1000.0;
  try {
    estimate_image(x, s, 1);
    FAIL("expected OverflowError");
  } catch (const OverflowError& e) {
    CHECK(e.offending_log() == doctest::Approx(1000.0));
  }
}
