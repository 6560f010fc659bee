#pragma once

#include <cstddef>
#include <cstdint>

namespace sepfix::params {

// ln of the smallest positive normal double.
double ln_min_normal();
// ln of the largest finite double.
double ln_max_double();

/// K = ceil(n^7 / kappa), the smearing order for the worst-case
/// eigenvalue kappa / n^8. Requires 0 < kappa < 1.
std::uint64_t paper_K(std::size_t n, double kappa);

/// ln C_K with C_K = ((K+1)n)! / (K (Kn)! n!), evaluated with log-gamma.
double ln_CK(std::uint64_t K, std::size_t n);

/// ln C_A with C_A = 2 n^14 n^(n^8/kappa) / kappa^2.
double ln_CA(std::size_t n, double kappa);

/// The same bound written for an arbitrary smallest eigenvalue p0:
/// C_A = 2 n^(1/p0) / (n^2 p0^2). Agrees with ln_CA at p0 = kappa / n^8.
double ln_CA_from_p0(std::size_t n, double p0);

/// (1 - 1/(n(n+1)))^2. Requires n >= 2.
double contraction_constant(std::size_t n);

/// ceil((ln kappa - ln diameter) / ln c); 0 when kappa >= diameter.
std::uint64_t generic_steps(double kappa, double diameter, double c);

/// ceil(2n(n+1) (ln(4 ln(C_A C_K)) + ln(1/kappa))).
std::uint64_t paper_N(std::size_t n, double kappa, double ln_ck, double ln_ca);

struct PaperParams {
  std::size_t n = 0;
  double kappa = 0.0;
  std::uint64_t K = 0;
  double ln_CK = 0.0;
  double ln_CA = 0.0;
  double ln_lambda = 0.0;      // -2 (ln C_K + ln C_A)
  double contraction_C = 0.0;  // in (0, 1)
  double domain_bound = 0.0;   // 2 (ln C_K + ln C_A), trace-norm units
  double diameter = 0.0;       // 2 * domain_bound
  std::uint64_t N = 0;
  bool lambda_underflows = false;
};

/// Every constant of the iterated-map procedure for (n, kappa).
/// Requires n >= 2 and 0 < kappa < 1.
PaperParams paper_params(std::size_t n, double kappa);

}  // namespace sepfix::params
