#include "sepfix/ensemble.hpp"

#include "sepfix/errors.hpp"
#include "sepfix/parallel.hpp"
#include "sepfix/params.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sepfix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Weighted {
  double weight;
  double tag;  // value whose min/max over the sample is reported
};

struct Moments {
  std::vector<cplx> sum;
  std::vector<double> sq;
  double tag_lo = kInf;
  double tag_hi = -kInf;
};

// Accumulates weight_i * v_i v_i^dagger and the per-entry second moments
// block by block, then folds the blocks in index order.
template <class VecFn, class WeightFn>
Moments accumulate(std::size_t count, std::size_t d, std::size_t threads, VecFn vec,
                   WeightFn weight) {
  auto blocks = map_blocks<Moments>(count, threads, [&](std::size_t begin, std::size_t end) {
    Moments m;
    m.sum.assign(d * d, cplx(0.0, 0.0));
    m.sq.assign(d * d, 0.0);
    for (std::size_t s = begin; s < end; ++s) {
      std::span<const cplx> v = vec(s);
      const Weighted w = weight(s, v);
      m.tag_lo = std::min(m.tag_lo, w.tag);
      m.tag_hi = std::max(m.tag_hi, w.tag);
      for (std::size_t i = 0; i < d; ++i) {
        const cplx wi = w.weight * v[i];
        const double ai = std::norm(wi);
        for (std::size_t j = 0; j < d; ++j) {
          m.sum[i * d + j] += wi * std::conj(v[j]);
          m.sq[i * d + j] += ai * std::norm(v[j]);
        }
      }
    }
    return m;
  });
  Moments total;
  total.sum.assign(d * d, cplx(0.0, 0.0));
  total.sq.assign(d * d, 0.0);
  for (const Moments& b : blocks) {
    for (std::size_t k = 0; k < d * d; ++k) {
      total.sum[k] += b.sum[k];
      total.sq[k] += b.sq[k];
    }
    total.tag_lo = std::min(total.tag_lo, b.tag_lo);
    total.tag_hi = std::max(total.tag_hi, b.tag_hi);
  }
  return total;
}

Estimate finalize(const Moments& m, std::size_t count, std::size_t d) {
  const double n = static_cast<double>(count);
  Matrix mean(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  double se2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const cplx mu = m.sum[i * d + j] / n;
      mean(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mu;
      if (count > 1) {
        const double var = std::max(0.0, m.sq[i * d + j] / n - std::norm(mu)) * n / (n - 1.0);
        se2 += var / n;
      }
    }
  }
  return {HermitianOperator(mean, kAccumulatedHermitianTol),
          std::sqrt(static_cast<double>(d)) * std::sqrt(se2)};
}

std::span<const cplx> first_factor(const SampleSet& s, std::size_t i) {
  const Vector& v = s[i].phi.amplitudes();
  return {v.data(), static_cast<std::size_t>(v.size())};
}

std::span<const cplx> second_factor(const SampleSet& s, std::size_t i) {
  const Vector& v = s[i].phi_prime.amplitudes();
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Re <v|X|v> for Hermitian X stored column-major (Eigen default).
double quadratic_form(const Matrix& x, std::span<const cplx> v) {
  const std::size_t d = v.size();
  const cplx* xd = x.data();
  double acc = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    cplx col(0.0, 0.0);
    for (std::size_t i = 0; i < d; ++i) col += std::conj(v[i]) * xd[j * d + i];
    acc += (col * v[j]).real();
  }
  return acc;
}

double log_sum_exp(const std::vector<double>& terms) {
  double hi = -kInf;
  for (double t : terms) hi = std::max(hi, t);
  if (hi == -kInf) return -kInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - hi);
  return hi + std::log(s);
}

Estimate reconstruct_factor(const DensityMatrix& rho, std::uint64_t K, const SampleSet& s,
                            bool second, std::size_t threads) {
  if (!rho.dims().single_party()) {
    throw DimensionError("reconstruct: expects a single-party density matrix (n_B = 1)");
  }
  const std::size_t n = rho.dim();
  const std::size_t have = second ? s.dims().b : s.dims().a;
  if (have != n) throw DimensionError("reconstruct: sample dimension does not match rho");
  const SmearedSpectrum spec = SmearedSpectrum::from_density(rho, K);
  const double ln_cap = params::ln_max_double();
  Moments m = accumulate(
      s.count(), n, threads,
      [&](std::size_t i) { return second ? second_factor(s, i) : first_factor(s, i); },
      [&](std::size_t, std::span<const cplx> v) {
        const double lm = spec.ln_mu(v);
        if (lm > ln_cap) {
          throw OverflowError("reconstruct: mu exceeds double range; K = " +
                                  std::to_string(spec.K()) + " is too large",
                              lm);
        }
        const double w = std::exp(lm);
        return Weighted{w, w};
      });
  return finalize(m, s.count(), n);
}

}  // namespace

std::uint64_t choose_K(double p0, std::size_t n) {
  if (n == 0) throw DomainError("choose_K: n must be >= 1");
  if (!(p0 > 0.0)) {
    throw DomainError("choose_K: p0 must be positive (rank-deficient state; regularize first)");
  }
  const double nn = static_cast<double>(n);
  if (p0 > 1.0 / nn + 1e-12) throw DomainError("choose_K: p0 cannot exceed 1/n");
  const double target = 1.0 / (nn * p0) - 1.0;
  std::uint64_t K = 1;
  if (target > 1.0) K = static_cast<std::uint64_t>(std::ceil(target - 1e-9 * target));
  while (static_cast<double>(K + 1) * nn * p0 < 1.0 - 1e-12) ++K;
  return K;
}

SmearedSpectrum::SmearedSpectrum(Eigen::VectorXd p, std::vector<UnitVector> e, std::uint64_t K)
    : p_(std::move(p)), e_(std::move(e)), K_(K) {
  const std::size_t n = static_cast<std::size_t>(p_.size());
  if (n == 0 || e_.size() != n) {
    throw DimensionError("SmearedSpectrum: need one eigenvector per eigenvalue");
  }
  if (K_ == 0) throw ValidationError("SmearedSpectrum: K must be >= 1");
  if (!(std::abs(p_.sum() - 1.0) <= 1e-10) || !(p_.minCoeff() >= 0.0)) {
    throw ValidationError("SmearedSpectrum: eigenvalues must form a probability vector");
  }
  e_adjoint_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    if (e_[k].dim() != n) throw DimensionError("SmearedSpectrum: eigenvector dimension");
    e_adjoint_.row(static_cast<Eigen::Index>(k)) = e_[k].amplitudes().adjoint();
  }
  const double ortho =
      (e_adjoint_ * e_adjoint_.adjoint() - Matrix::Identity(e_adjoint_.rows(), e_adjoint_.rows()))
          .cwiseAbs()
          .maxCoeff();
  if (!(ortho <= 1e-10)) throw ValidationError("SmearedSpectrum: eigenvectors not orthonormal");
  const double nn = static_cast<double>(n);
  if (static_cast<double>(K_ + 1) * nn * p_.minCoeff() < 1.0 - 1e-12) {
    throw ValidationError("SmearedSpectrum: K = " + std::to_string(K_) +
                          " violates (K+1) n >= 1/p0; need K >= " +
                          std::to_string(choose_K(p_.minCoeff(), n)));
  }
  ln_ck_ = params::ln_CK(K_, n);
}

SmearedSpectrum SmearedSpectrum::from_density(const DensityMatrix& rho,
                                              std::optional<std::uint64_t> K) {
  if (!rho.dims().single_party()) {
    throw DimensionError("SmearedSpectrum: expects a single-party density matrix (n_B = 1)");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  Eigen::VectorXd p = es.eigenvalues();
  const std::size_t n = static_cast<std::size_t>(p.size());
  if (!(p.minCoeff() > 0.0)) {
    throw DomainError("SmearedSpectrum: rank-deficient state (p0 = " +
                      std::to_string(p.minCoeff()) + "); regularize first");
  }
  p /= p.sum();
  std::vector<UnitVector> e;
  e.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    e.push_back(UnitVector::normalized(es.eigenvectors().col(static_cast<Eigen::Index>(k))));
  }
  const std::uint64_t k_used = K.value_or(choose_K(p.minCoeff(), n));
  return {std::move(p), std::move(e), k_used};
}

double SmearedSpectrum::shift() const {
  return 1.0 / (static_cast<double>(K_ + 1) * static_cast<double>(n()));
}

double SmearedSpectrum::ln_mu(std::span<const cplx> phi) const {
  const std::size_t n = this->n();
  if (phi.size() != n) throw DimensionError("mu_smeared: dimension mismatch");
  const double power = 2.0 * static_cast<double>(K_) * static_cast<double>(n);
  const double c = shift();
  std::vector<double> terms;
  terms.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double coef = p_(static_cast<Eigen::Index>(k)) - c;
    if (coef <= 0.0) continue;
    cplx overlap(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      overlap += e_adjoint_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) * phi[i];
    const double mag = std::abs(overlap);
    if (mag == 0.0) continue;
    terms.push_back(std::log(coef) + power * std::log(mag));
  }
  return ln_ck_ + log_sum_exp(terms);
}

double mu_smeared(const SmearedSpectrum& spec, const UnitVector& phi) {
  const Vector& v = phi.amplitudes();
  const double lm = spec.ln_mu({v.data(), static_cast<std::size_t>(v.size())});
  if (lm > params::ln_max_double()) {
    throw OverflowError("mu_smeared: value exceeds double range; K = " +
                            std::to_string(spec.K()) + " is too large",
                        lm);
  }
  return std::exp(lm);
}

LogRange ln_mu_range(const SmearedSpectrum& spec) {
  const double n = static_cast<double>(spec.n());
  const double kn = static_cast<double>(spec.K()) * n;
  const double lo_gap = spec.p_min() - spec.shift();
  const double hi_gap = spec.p_max() - spec.shift();
  return {lo_gap > 0.0 ? spec.ln_coefficient() + (1.0 - kn) * std::log(n) + std::log(lo_gap)
                       : -kInf,
          hi_gap > 0.0 ? spec.ln_coefficient() + std::log(hi_gap) : -kInf};
}

Estimate reconstruct(const DensityMatrix& rho, std::uint64_t K, const SampleSet& s,
                     std::size_t threads) {
  return reconstruct_factor(rho, K, s, false, threads);
}

Estimate reconstruct_product(const DensityMatrix& rho_a, std::uint64_t K_a,
                             const DensityMatrix& rho_b, std::uint64_t K_b, const SampleSet& s,
                             std::size_t threads) {
  Estimate a = reconstruct_factor(rho_a, K_a, s, false, threads);
  Estimate b = reconstruct_factor(rho_b, K_b, s, true, threads);
  // ||A(x)B - A'(x)B'||_1 <= ||A - A'||_1 ||B'||_1 + ||A||_1 ||B - B'||_1, ||A||_1 = 1.
  const double noise = a.noise_floor * trace_norm(b.value) + b.noise_floor;
  return {tensor(a.value, b.value), noise};
}

HermitianOperator moment_single_closed(const HermitianOperator& a) {
  const std::size_t n = a.dim();
  const double nn = static_cast<double>(n);
  HermitianOperator r = a + HermitianOperator::identity(n) * a.trace();
  return r * (1.0 / (nn * (nn + 1.0)));
}

HermitianOperator moment_bipartite_closed(const HermitianOperator& y, Dims dims) {
  if (dims.a != dims.b) {
    throw DimensionError("moment_bipartite_closed: requires equal factor dimensions");
  }
  if (dims.total() != y.dim()) throw DimensionError("moment_bipartite_closed: dims mismatch");
  const std::size_t n = dims.a;
  const double nn = static_cast<double>(n);
  const HermitianOperator id = HermitianOperator::identity(n);
  HermitianOperator r = y;
  r += tensor(id, partial_trace(y, dims, Subsystem::First));
  r += tensor(partial_trace(y, dims, Subsystem::Second), id);
  r += HermitianOperator::identity(n * n) * y.trace();
  return r * (1.0 / (nn * nn * (nn + 1.0) * (nn + 1.0)));
}

Estimate moment_single_mc(const HermitianOperator& a, const SampleSet& s, std::size_t threads) {
  const std::size_t n = a.dim();
  if (s.dims().a != n) throw DimensionError("moment_single_mc: sample dimension mismatch");
  const Matrix& am = a.matrix();
  Moments m = accumulate(
      s.count(), n, threads, [&](std::size_t i) { return first_factor(s, i); },
      [&](std::size_t, std::span<const cplx> v) {
        const double w = quadratic_form(am, v);
        return Weighted{w, w};
      });
  return finalize(m, s.count(), n);
}

Estimate moment_bipartite_mc(const HermitianOperator& y, const SampleSet& s,
                             std::size_t threads) {
  const std::size_t d = y.dim();
  if (s.dims().total() != d) throw DimensionError("moment_bipartite_mc: sample dims mismatch");
  const Matrix& ym = y.matrix();
  Moments m = accumulate(
      s.count(), d, threads, [&](std::size_t i) { return s.product(i); },
      [&](std::size_t, std::span<const cplx> v) {
        const double w = quadratic_form(ym, v);
        return Weighted{w, w};
      });
  return finalize(m, s.count(), d);
}

double max_log_weight() { return params::ln_max_double() - 10.0; }

ImageEstimate estimate_image(const HermitianOperator& x, const SampleSet& s,
                             std::size_t threads) {
  const std::size_t d = x.dim();
  if (s.dims().total() != d) throw DimensionError("estimate_image: sample dims mismatch");
  const Matrix& xm = x.matrix();
  const double cap = max_log_weight();
  Moments m;
  try {
    m = accumulate(
        s.count(), d, threads, [&](std::size_t i) { return s.product(i); },
        [&](std::size_t, std::span<const cplx> v) {
          const double e = quadratic_form(xm, v);
          if (!(e <= cap)) throw OverflowError("exponent", e);
          return Weighted{std::exp(e), e};
        });
  } catch (const OverflowError&) {
    double hi = -kInf;
    for (std::size_t i = 0; i < s.count(); ++i) hi = std::max(hi, quadratic_form(xm, s.product(i)));
    throw OverflowError("estimate_image: exponent <phi|X|phi> reached " + std::to_string(hi) +
                            " (cap " + std::to_string(cap) + "); the iterate left the domain",
                        hi);
  }
  Estimate e = finalize(m, s.count(), d);
  return {std::move(e.value), e.noise_floor, m.tag_lo, m.tag_hi};
}

}  // namespace sepfix
