#include "sepfix/criteria.hpp"

#include "sepfix/errors.hpp"
#include "sepfix/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace sepfix {

namespace {

void require_weight(double w, const char* where) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw DomainError(std::string(where) + ": weight must lie in [0, 1], got " +
                      std::to_string(w));
  }
}

void require_dims(Dims dims, const char* where) {
  if (dims.a == 0 || dims.b == 0) throw DomainError(std::string(where) + ": zero dimension");
}

DensityMatrix normalized_state(const Matrix& m, Dims dims) {
  Matrix r = m / m.trace().real();
  return {HermitianOperator(r, kAccumulatedHermitianTol), dims};
}

Vector singlet() {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return v;
}

constexpr std::array<std::pair<std::string_view, Family>, 7> kFamilies{{
    {"werner", Family::Werner},
    {"isotropic", Family::Isotropic},
    {"random-full-rank", Family::RandomFullRank},
    {"random-separable", Family::RandomSeparable},
    {"pure-product", Family::PureProduct},
    {"bell", Family::Bell},
    {"diagonal", Family::Diagonal},
}};

}  // namespace

double ppt_min_eigenvalue(const DensityMatrix& rho) {
  return min_eigenvalue(partial_transpose(rho));
}

bool ppt_is_exact(Dims dims) {
  const auto lo = std::min(dims.a, dims.b);
  const auto hi = std::max(dims.a, dims.b);
  return lo == 2 && (hi == 2 || hi == 3);
}

DensityMatrix werner(double w) {
  require_weight(w, "werner");
  const Matrix m = w * (singlet() * singlet().adjoint()) +
                   (1.0 - w) * 0.25 * Matrix::Identity(4, 4);
  return {HermitianOperator(m, kAccumulatedHermitianTol), {2, 2}};
}

DensityMatrix isotropic(std::size_t n, double w) {
  require_weight(w, "isotropic");
  if (n < 2) throw DomainError("isotropic: n must be >= 2");
  const auto d = static_cast<Eigen::Index>(n * n);
  Vector phi = Vector::Zero(d);
  for (std::size_t i = 0; i < n; ++i) phi(static_cast<Eigen::Index>(i * n + i)) = 1.0;
  phi /= std::sqrt(static_cast<double>(n));
  const Matrix m = w * (phi * phi.adjoint()) +
                   (1.0 - w) / static_cast<double>(d) * Matrix::Identity(d, d);
  return {HermitianOperator(m, kAccumulatedHermitianTol), {n, n}};
}

DensityMatrix bell() { return {HermitianOperator::projector(singlet()), {2, 2}}; }

DensityMatrix pure_product(Dims dims, std::uint64_t seed) {
  require_dims(dims, "pure_product");
  const ProductSample s = torus_sample(dims, {seed, 0});
  return normalized_state(
      HermitianOperator::projector(tensor(s.phi.amplitudes(), s.phi_prime.amplitudes())).matrix(),
      dims);
}

DensityMatrix random_separable(Dims dims, std::size_t terms, std::uint64_t seed) {
  require_dims(dims, "random_separable");
  if (terms == 0) throw DomainError("random_separable: terms must be >= 1");
  // Stream 0 draws the weights; stream t + 1 draws projector t.
  StreamRng rng({seed, 0});
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> weights(terms);
  double total = 0.0;
  for (auto& w : weights) total += (w = expo(rng));
  const auto d = static_cast<Eigen::Index>(dims.total());
  Matrix m = Matrix::Zero(d, d);
  for (std::size_t t = 0; t < terms; ++t) {
    const ProductSample s = torus_sample(dims, {seed, t + 1});
    const Vector v = tensor(s.phi.amplitudes(), s.phi_prime.amplitudes());
    m += (weights[t] / total) * (v * v.adjoint());
  }
  return normalized_state(m, dims);
}

DensityMatrix random_full_rank(Dims dims, std::uint64_t seed) {
  require_dims(dims, "random_full_rank");
  const auto d = static_cast<Eigen::Index>(dims.total());
  for (std::uint64_t stream = 0;; ++stream) {
    StreamRng rng({seed, stream});
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        g(i, j) = cplx(re, im);
      }
    const Matrix m = g * g.adjoint();
    DensityMatrix rho = normalized_state(m, dims);
    if (rho.min_eigenvalue() > 1e-12) return rho;
  }
}

HermitianOperator random_hermitian(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw DomainError("random_hermitian: dim must be >= 1");
  const auto d = static_cast<Eigen::Index>(dim);
  StreamRng rng({seed, 0});
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = cplx(re, im);
    }
  HermitianOperator h(g + g.adjoint());
  return h * (1.0 / trace_norm(h));
}

DensityMatrix diagonal_state(const Eigen::VectorXd& p) {
  if (p.size() == 0) throw DomainError("diagonal_state: empty spectrum");
  if (!(p.minCoeff() >= 0.0) || !(std::abs(p.sum() - 1.0) <= kTraceTol)) {
    throw DomainError("diagonal_state: entries must be nonnegative and sum to 1");
  }
  return {HermitianOperator::diagonal(p), {static_cast<std::size_t>(p.size()), 1}};
}

std::optional<Family> parse_family(std::string_view name) {
  for (const auto& [key, fam] : kFamilies)
    if (key == name) return fam;
  return std::nullopt;
}

std::string_view family_name(Family f) {
  for (const auto& [key, fam] : kFamilies)
    if (fam == f) return key;
  return "unknown";
}

DensityMatrix generate(const StateSpec& spec) {
  switch (spec.family) {
    case Family::Werner:
      return werner(spec.w);
    case Family::Isotropic:
      if (spec.dims.a != spec.dims.b) throw DomainError("isotropic: dims must be (n, n)");
      return isotropic(spec.dims.a, spec.w);
    case Family::RandomFullRank:
      return random_full_rank(spec.dims, spec.seed);
    case Family::RandomSeparable:
      return random_separable(spec.dims, spec.terms, spec.seed);
    case Family::PureProduct:
      return pure_product(spec.dims, spec.seed);
    case Family::Bell:
      return bell();
    case Family::Diagonal:
      return diagonal_state(spec.p);
  }
  throw DomainError("generate: unknown family");
}

}  // namespace sepfix
