#pragma once

#include "sepfix/operator.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sepfix {

// Min eigenvalue of the partial transpose over the second factor. For dims
// (2,2) and (2,3) it is >= 0 iff rho is separable; elsewhere >= 0 is only
// necessary.
double ppt_min_eigenvalue(const DensityMatrix& rho);
// True when the dims make PPT an exact separability test.
bool ppt_is_exact(Dims dims);

// w |psi-><psi-| + (1 - w) I/4 on dims (2,2). Separable iff w <= 1/3.
DensityMatrix werner(double w);
// w |Phi+><Phi+| + (1 - w) I/n^2 on dims (n,n), |Phi+> = sum_i |ii>/sqrt(n).
DensityMatrix isotropic(std::size_t n, double w);
// The singlet |psi-> = (|01> - |10>)/sqrt(2).
DensityMatrix bell();
// |phi (x) phi'><phi (x) phi'| with Haar factors drawn from seed.
DensityMatrix pure_product(Dims dims, std::uint64_t seed);
// Convex combination of `terms` Haar product projectors, weights uniform
// on the simplex.
DensityMatrix random_separable(Dims dims, std::size_t terms, std::uint64_t seed);
// G G^dagger / tr with complex Gaussian G; redraws on a degenerate sample.
DensityMatrix random_full_rank(Dims dims, std::uint64_t seed);
// (G + G^dagger) with complex Gaussian G, scaled to trace norm 1.
HermitianOperator random_hermitian(std::size_t dim, std::uint64_t seed);
// diag(p) as a single-party state (n_B = 1).
DensityMatrix diagonal_state(const Eigen::VectorXd& p);

enum class Family { Werner, Isotropic, RandomFullRank, RandomSeparable, PureProduct, Bell, Diagonal };

std::optional<Family> parse_family(std::string_view name);
std::string_view family_name(Family f);

struct StateSpec {
  Family family = Family::Werner;
  double w = 0.0;           // werner, isotropic
  Dims dims{2, 2};          // isotropic (a = b = n), random_*, pure_product
  std::size_t terms = 10;   // random_separable
  std::uint64_t seed = 0;   // random_*, pure_product
  Eigen::VectorXd p;        // diagonal
};

// Throws DomainError for parameters outside the family's range.
DensityMatrix generate(const StateSpec& spec);

}  // namespace sepfix
