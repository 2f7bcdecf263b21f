#pragma once

#include <cstdint>
#include <optional>

#include "sntf/observation.hpp"

namespace sntf {

/// Inputs to the closed-form error-bound evaluators.
struct BoundInputs {
  int n1 = 2, n2 = 2, n3 = 2;
  int r = 1;                       // factorization rank, r <= min(n1, n2)
  std::int64_t m = 4;              // number of observations, 4 <= m <= n1*n2*n3
  double b = 1.0;                  // amplitude bound on B entries
  double c = 1.0;                  // amplitude bound on X entries
  std::int64_t b0_norm = 0;        // ||B*||_0, used by the upper bounds
  std::int64_t s = 1;              // sparsity budget, used by the lower bounds
  NoiseModel noise = GaussianNoise{1.0};
  double zeta = 0.0;               // Poisson floor (> 0 iff Poisson)
  std::optional<double> beta_override;

  void validate() const;
  int nmax() const { return n1 > n2 ? n1 : n2; }
};

/// Discretization exponent: max{3, 1 + log(3 r n3^1.5 b / c) / log(n1 v n2)},
/// unless overridden.
double beta_param(const BoundInputs& in);

/// Discretization level count 2^ceil(beta * log2(n1 v n2)); requires
/// beta >= 3, throws on overflow.
std::int64_t discretization_levels(const BoundInputs& in);

/// The Poisson kappa appears in two forms in the source analysis.
enum class PoissonKappa {
  Proposition,  // c / zeta (the default)
  Appendix,     // c^2 / zeta
};

/// KL-divergence cap: Gaussian c^2/(2 sigma^2), Laplace c^2/(2 tau^2),
/// Poisson c/zeta (or c^2/zeta with PoissonKappa::Appendix).
double kappa_param(const BoundInputs& in, PoissonKappa variant = PoissonKappa::Proposition);

/// Which logarithm the regularization weight uses.
enum class LambdaLog {
  NMax,          // log(n1 v n2) (the default)
  NMaxSqrtN3,    // log((n1 v n2) * sqrt(n3))
};

/// Regularization weight 4 (beta + 2) (1 + 2 kappa / 3) log(n1 v n2).
double lambda_param(const BoundInputs& in, LambdaLog log_variant = LambdaLog::NMax,
                    PoissonKappa kappa_variant = PoissonKappa::Proposition);

/// Per-entry expected squared-error upper bound for the matching noise model:
///   gaussian: 22 c^2 log(m)/m
///             + 16 (3 sigma^2 + 2 c^2)(beta+2) ((r n1 n3 + ||B*||_0)/m) log(n1 v n2)
///   laplace:  3 c^2 (2 tau + c)^2 log(m)/(m tau^2)
///             + 2 (3 + c^2/tau^2)(2 tau + c)^2 (beta+2) ((r n1 n3 + ||B*||_0)/m) log(n1 v n2)
///   poisson:  4 c^3 (3 + 8 log(m))/(zeta m)
///             + 48 c (1 + 4 c^2/(3 zeta)) (beta+2) (r n1 n3 + ||B*||_0) log(n1 v n2)/m
double upper_bound(const BoundInputs& in);

/// Minimax lower bound C min{Delta b^2, beta_c^2 nu^2 (s + r n1 n3)/m} with
/// Delta = min{1, s/(n2 n3)} and nu = sigma (Gaussian) or tau (Laplace); for
/// Poisson, C min{Delta~ b^2, beta_c^2 zeta (s - n2 n3 + r n1 n3)/m} with
/// Delta~ = min{(1 - zeta/b)^2, min{1, (s - n2 n3)/(n2 n3)}}. The constants C
/// and beta_c are existential in the analysis; callers supply them (default
/// 1), so outputs are order-level rather than certified.
double minimax_lower_bound(const BoundInputs& in, double beta_c = 1.0, double C = 1.0);

/// Per-entry KL divergence and -2 log Hellinger-affinity between observation
/// distributions with parameters x1 and x2 under the given noise model.
struct Divergence {
  double kl = 0.0;
  double neg2logH = 0.0;
};
Divergence divergences(const NoiseModel& noise, double x1, double x2);

/// KL divergence between Laplace(mu1, b1) and Laplace(mu2, b2):
/// log(b2/b1) - 1 + |mu2 - mu1|/b2 + (b1/b2) exp(-|mu2 - mu1|/b1).
double laplace_kl(double mu1, double b1, double mu2, double b2);

/// The quadratic Poisson KL bound (x1 - x2)^2 / x2, valid for x1, x2 > 0.
double poisson_kl_quadratic_bound(double x1, double x2);

}  // namespace sntf
