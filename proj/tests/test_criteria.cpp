#include "doctest.h"

#include "sepfix/criteria.hpp"
#include "sepfix/errors.hpp"

#include <cmath>

using namespace sepfix;

TEST_CASE("werner family against the PPT threshold w <= 1/3") {
  for (double w : {0.0, 0.1, 0.2, 0.3, 1.0 / 3.0})
    CHECK(ppt_min_eigenvalue(werner(w)) >= -1e-12);
  for (double w : {0.34, 0.5, 0.8, 1.0}) CHECK(ppt_min_eigenvalue(werner(w)) < 0.0);
  // Smallest PT eigenvalue is (1 - 3w)/4.
  CHECK(ppt_min_eigenvalue(werner(0.6)) == doctest::Approx((1 - 1.8) / 4));
  CHECK_THROWS_AS(werner(1.1), DomainError);
  CHECK_THROWS_AS(werner(-0.1), DomainError);
}

TEST_CASE("isotropic family against the threshold w <= 1/(n+1)") {
  for (std::size_t n : {2u, 3u}) {
    const double t = 1.0 / (n + 1.0);
    CHECK(ppt_min_eigenvalue(isotropic(n, t * 0.95)) >= 0.0);
    CHECK(ppt_min_eigenvalue(isotropic(n, t * 1.05)) < 0.0);
    CHECK(isotropic(n, 0.4).dims() == Dims{n, n});
  }
  CHECK_THROWS_AS(isotropic(1, 0.5), DomainError);
}

TEST_CASE("bell state is entangled") {
  const DensityMatrix b = bell();
  CHECK(ppt_min_eigenvalue(b) == doctest::Approx(-0.5));
  CHECK(b.min_eigenvalue() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("random product and separable states are PPT") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CHECK(ppt_min_eigenvalue(pure_product({2, 3}, seed)) >= -1e-12);
    CHECK(ppt_min_eigenvalue(random_separable({2, 2}, 10, seed)) >= -1e-12);
    CHECK(ppt_min_eigenvalue(random_separable({3, 3}, 4, seed)) >= -1e-12);
  }
}

TEST_CASE("random full-rank states") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix r = random_full_rank({2, 2}, seed);
    CHECK(r.min_eigenvalue() > 1e-12);
    CHECK(r.op().trace() == doctest::Approx(1.0));
  }
  CHECK(random_full_rank({2, 2}, 3).matrix() == random_full_rank({2, 2}, 3).matrix());
}

TEST_CASE("PPT exactness by dimension") {
  CHECK(ppt_is_exact({2, 2}));
  CHECK(ppt_is_exact({2, 3}));
  CHECK(ppt_is_exact({3, 2}));
  CHECK_FALSE(ppt_is_exact({3, 3}));
  CHECK_FALSE(ppt_is_exact({2, 4}));
}

TEST_CASE("family names round-trip") {
  for (Family f : {Family::Werner, Family::Isotropic, Family::RandomFullRank,
                   Family::RandomSeparable, Family::PureProduct, Family::Bell, Family::Diagonal})
    CHECK(parse_family(family_name(f)) == f);
  CHECK_FALSE(parse_family("ghz").has_value());
}

TEST_CASE("generate dispatches to the family") {
  StateSpec spec;
  spec.family = Family::Werner;
  spec.w = 0.25;
  CHECK(generate(spec).matrix() == werner(0.25).matrix());
  spec.family = Family::Diagonal;
  spec.p = Eigen::Vector3d(0.5, 0.3, 0.2);
  CHECK(generate(spec).dims() == Dims{3, 1});
  spec.p = Eigen::Vector3d(0.5, 0.3, 0.3);
  CHECK_THROWS_AS(generate(spec), DomainError);
  spec.family = Family::Isotropic;
  spec.dims = {2, 3};
  CHECK_THROWS_AS(generate(spec), DomainError);
}

TEST_CASE("random hermitian operators have unit trace norm") {
  const HermitianOperator h = random_hermitian(5, 1);
  CHECK(trace_norm(h) == doctest::Approx(1.0));
  CHECK(h.matrix() != random_hermitian(5, 2).matrix());
}
