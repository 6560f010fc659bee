#pragma once

#include "sepfix/operator.hpp"
#include "sepfix/sampling.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace sepfix {

/// Smeared spectral decomposition of a single-party density matrix:
///
///   mu(phi) = C_K * sum_k (p_k - 1/((K+1)n)) |<e_k|phi>|^(2Kn),
///   C_K     = ((K+1)n)! / (K (Kn)! n!),
///
/// which reproduces rho = sum_k p_k |e_k><e_k| as a continuous ensemble
/// over the unit sphere. mu is nonnegative iff (K+1) n >= 1/p0.
class SmearedSpectrum {
 public:
  // Throws ValidationError on a bad probability vector, non-orthonormal
  // eigenvectors or a K below the positivity bound.
  SmearedSpectrum(Eigen::VectorXd p, std::vector<UnitVector> e, std::uint64_t K);

  // Eigendecomposes rho (n_B must be 1). K defaults to choose_K(p0, n).
  // Throws DomainError for rank-deficient input.
  static SmearedSpectrum from_density(const DensityMatrix& rho,
                                      std::optional<std::uint64_t> K = std::nullopt);

  std::size_t n() const { return static_cast<std::size_t>(p_.size()); }
  std::uint64_t K() const { return K_; }
  const Eigen::VectorXd& p() const { return p_; }
  const std::vector<UnitVector>& e() const { return e_; }
  double p_min() const { return p_.minCoeff(); }
  double p_max() const { return p_.maxCoeff(); }
  // 1/((K+1)n), the offset subtracted from every eigenvalue.
  double shift() const;
  double ln_coefficient() const { return ln_ck_; }

  // ln mu(phi); -inf where mu vanishes.
  double ln_mu(std::span<const cplx> phi) const;

 private:
  Eigen::VectorXd p_;
  std::vector<UnitVector> e_;
  std::uint64_t K_;
  double ln_ck_;
  Matrix e_adjoint_;  // rows are <e_k|
};

// Smallest integer K >= max(1, 1/(n p0) - 1); guarantees (K+1) n p0 >= 1.
std::uint64_t choose_K(double p0, std::size_t n);

// mu(phi). Throws OverflowError if the value exceeds double range.
double mu_smeared(const SmearedSpectrum& spec, const UnitVector& phi);

// Analytic range of mu over the sphere, in log space:
//   C_K n^(1-Kn) (p0 - shift) <= mu <= C_K (p1 - shift).
struct LogRange {
  double lo;
  double hi;
};
LogRange ln_mu_range(const SmearedSpectrum& spec);

/// Monte Carlo operator estimate with its trace-norm-scale noise floor.
///
/// noise_floor = sqrt(d) * ||SE||_F where SE_ij is the standard error of
/// entry (i, j); sqrt(d) ||.||_F bounds the trace norm of a d x d matrix.
struct Estimate {
  HermitianOperator value;
  double noise_floor = 0.0;
};

// Average of mu(phi_i) |phi_i><phi_i| over the first factor of s.
Estimate reconstruct(const DensityMatrix& rho, std::uint64_t K, const SampleSet& s,
                     std::size_t threads = 0);

// rho_A (x) rho_B from two single-party reconstructions, using phi for A
// and phi' for B.
Estimate reconstruct_product(const DensityMatrix& rho_a, std::uint64_t K_a,
                             const DensityMatrix& rho_b, std::uint64_t K_b, const SampleSet& s,
                             std::size_t threads = 0);

/// (A + I tr A) / (n (n+1)), the exact value of the integral of
/// <phi|A|phi> |phi><phi| over the normalized sphere.
HermitianOperator moment_single_closed(const HermitianOperator& a);

/// (Y + I (x) tr_I Y + tr_II Y (x) I + tr Y I) / (n^2 (n+1)^2) for dims (n, n).
HermitianOperator moment_bipartite_closed(const HermitianOperator& y, Dims dims);

// Monte Carlo counterparts of the two closed forms.
Estimate moment_single_mc(const HermitianOperator& a, const SampleSet& s,
                          std::size_t threads = 0);
Estimate moment_bipartite_mc(const HermitianOperator& y, const SampleSet& s,
                             std::size_t threads = 0);

// Exponents above this abort estimate_image.
double max_log_weight();

struct ImageEstimate {
  HermitianOperator value;
  double noise_floor = 0.0;
  double min_log_weight = 0.0;  // smallest <phi|X|phi> over the sample
  double max_log_weight = 0.0;  // largest <phi|X|phi> over the sample
};

/// Sample average of exp(<phi phi'|X|phi phi'>) |phi phi'><phi phi'|.
/// Throws OverflowError (carrying the largest exponent seen) when an
/// exponent exceeds max_log_weight().
ImageEstimate estimate_image(const HermitianOperator& x, const SampleSet& s,
                             std::size_t threads = 0);

}  // namespace sepfix
