#include "sepfix/params.hpp"

#include "sepfix/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sepfix::params {

namespace {

// Guards ceilings against values like 1280.0000000000002 that come from
// representation error in kappa, not from the formula.
constexpr double kCeilSlack = 1e-9;

std::uint64_t ceil_slack(double x) {
  if (x <= 0.0) return 0;
  return static_cast<std::uint64_t>(std::ceil(x - kCeilSlack * std::max(1.0, std::abs(x))));
}

void require_kappa(double kappa, const char* where) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw DomainError(std::string(where) + ": kappa must lie in (0, 1), got " +
                      std::to_string(kappa));
  }
}

void require_n(std::size_t n, std::size_t min, const char* where) {
  if (n < min) {
    throw DomainError(std::string(where) + ": n must be >= " + std::to_string(min));
  }
}

}  // namespace

double ln_min_normal() { return std::log(std::numeric_limits<double>::min()); }
double ln_max_double() { return std::log(std::numeric_limits<double>::max()); }

std::uint64_t paper_K(std::size_t n, double kappa) {
  require_kappa(kappa, "paper_K");
  require_n(n, 1, "paper_K");
  return ceil_slack(std::pow(static_cast<double>(n), 7.0) / kappa);
}

double ln_CK(std::uint64_t K, std::size_t n) {
  if (K == 0) throw DomainError("ln_CK: K must be >= 1");
  require_n(n, 1, "ln_CK");
  const double k = static_cast<double>(K);
  const double nn = static_cast<double>(n);
  return std::lgamma((k + 1.0) * nn + 1.0) - std::log(k) - std::lgamma(k * nn + 1.0) -
         std::lgamma(nn + 1.0);
}

double ln_CA(std::size_t n, double kappa) {
  require_kappa(kappa, "ln_CA");
  require_n(n, 1, "ln_CA");
  const double ln_n = std::log(static_cast<double>(n));
  const double n8 = std::pow(static_cast<double>(n), 8.0);
  return std::log(2.0) + 14.0 * ln_n + (n8 / kappa) * ln_n - 2.0 * std::log(kappa);
}

double ln_CA_from_p0(std::size_t n, double p0) {
  require_n(n, 1, "ln_CA_from_p0");
  if (!(p0 > 0.0 && p0 <= 1.0)) throw DomainError("ln_CA_from_p0: p0 must lie in (0, 1]");
  const double ln_n = std::log(static_cast<double>(n));
  return std::log(2.0) + ln_n / p0 - 2.0 * ln_n - 2.0 * std::log(p0);
}

double contraction_constant(std::size_t n) {
  require_n(n, 2, "contraction_constant");
  const double nn = static_cast<double>(n);
  const double f = 1.0 - 1.0 / (nn * (nn + 1.0));
  return f * f;
}

std::uint64_t generic_steps(double kappa, double diameter, double c) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("generic_steps: contraction must lie in (0, 1)");
  if (!(diameter > 0.0)) throw DomainError("generic_steps: diameter must be positive");
  if (!(kappa > 0.0)) throw DomainError("generic_steps: kappa must be positive");
  if (kappa >= diameter) return 0;
  return ceil_slack((std::log(kappa) - std::log(diameter)) / std::log(c));
}

std::uint64_t paper_N(std::size_t n, double kappa, double ln_ck, double ln_ca) {
  require_kappa(kappa, "paper_N");
  require_n(n, 1, "paper_N");
  const double ln_product = ln_ck + ln_ca;
  if (!(ln_product > 0.0)) throw DomainError("paper_N: ln(C_A C_K) must be positive");
  const double nn = static_cast<double>(n);
  return ceil_slack(2.0 * nn * (nn + 1.0) *
                    (std::log(4.0 * ln_product) + std::log(1.0 / kappa)));
}

PaperParams paper_params(std::size_t n, double kappa) {
  require_n(n, 2, "paper_params");
  require_kappa(kappa, "paper_params");
  PaperParams p;
  p.n = n;
  p.kappa = kappa;
  p.K = paper_K(n, kappa);
  p.ln_CK = ln_CK(p.K, n);
  p.ln_CA = ln_CA(n, kappa);
  const double ln_product = p.ln_CK + p.ln_CA;
  p.ln_lambda = -2.0 * ln_product;
  p.domain_bound = 2.0 * ln_product;
  p.diameter = 2.0 * p.domain_bound;
  p.contraction_C = contraction_constant(n);
  p.N = paper_N(n, kappa, p.ln_CK, p.ln_CA);
  p.lambda_underflows = p.ln_lambda < ln_min_normal();
  return p;
}

}  // namespace sepfix::params
