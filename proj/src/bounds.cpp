#include "sntf/bounds.hpp"

#include <cmath>
#include <string>

#include "sntf/errors.hpp"

namespace sntf {

void BoundInputs::validate() const {
  if (n1 < 2 || n2 < 2 || n3 < 1) throw NumericError("BoundInputs: need n1, n2 >= 2, n3 >= 1");
  if (r < 1 || r > std::min(n1, n2)) throw NumericError("BoundInputs: need 1 <= r <= min(n1,n2)");
  const std::int64_t total = std::int64_t(n1) * n2 * n3;
  if (m < 4 || m > total) throw NumericError("BoundInputs: need 4 <= m <= n1*n2*n3");
  if (!(b > 0.0) || !(c > 0.0)) throw NumericError("BoundInputs: b and c must be positive");
  if (b0_norm < 0 || b0_norm > std::int64_t(r) * n2 * n3) {
    throw NumericError("BoundInputs: b0_norm out of range");
  }
  if (std::holds_alternative<PoissonNoise>(noise) && !(zeta > 0.0)) {
    throw NumericError("BoundInputs: Poisson requires zeta > 0");
  }
  if (beta_override && !(*beta_override >= 3.0)) {
    throw NumericError("BoundInputs: beta override must be >= 3");
  }
}

double beta_param(const BoundInputs& in) {
  if (in.beta_override) return *in.beta_override;
  const double raw =
      1.0 + std::log(3.0 * in.r * std::pow(double(in.n3), 1.5) * in.b / in.c) /
                std::log(double(in.nmax()));
  return std::max(3.0, raw);
}

std::int64_t discretization_levels(const BoundInputs& in) {
  const double beta = beta_param(in);
  if (!(beta >= 3.0)) throw NumericError("discretization_levels: beta must be >= 3");
  const double exponent = std::ceil(beta * std::log2(double(in.nmax())));
  if (exponent > 62.0) {
    throw NumericError("discretization_levels: 2^" + std::to_string(exponent) +
                       " overflows 64-bit integers");
  }
  return std::int64_t(1) << std::int64_t(exponent);
}

double kappa_param(const BoundInputs& in, PoissonKappa variant) {
  if (const auto* g = std::get_if<GaussianNoise>(&in.noise)) {
    return in.c * in.c / (2.0 * g->sigma * g->sigma);
  }
  if (const auto* l = std::get_if<LaplaceNoise>(&in.noise)) {
    return in.c * in.c / (2.0 * l->tau * l->tau);
  }
  if (!(in.zeta > 0.0)) throw NumericError("kappa_param: Poisson requires zeta > 0");
  return variant == PoissonKappa::Proposition ? in.c / in.zeta : in.c * in.c / in.zeta;
}

double lambda_param(const BoundInputs& in, LambdaLog log_variant, PoissonKappa kappa_variant) {
  const double beta = beta_param(in);
  const double kappa = kappa_param(in, kappa_variant);
  const double logv = log_variant == LambdaLog::NMax
                          ? std::log(double(in.nmax()))
                          : std::log(double(in.nmax()) * std::sqrt(double(in.n3)));
  return 4.0 * (beta + 2.0) * (1.0 + 2.0 * kappa / 3.0) * logv;
}

double upper_bound(const BoundInputs& in) {
  in.validate();
  const double beta = beta_param(in);
  const double m = double(in.m);
  const double logm = std::log(m);
  const double lognm = std::log(double(in.nmax()));
  const double dof = (double(in.r) * in.n1 * in.n3 + double(in.b0_norm)) / m;
  const double c = in.c;

  if (const auto* g = std::get_if<GaussianNoise>(&in.noise)) {
    const double s2 = g->sigma * g->sigma;
    return 22.0 * c * c * logm / m + 16.0 * (3.0 * s2 + 2.0 * c * c) * (beta + 2.0) * dof * lognm;
  }
  if (const auto* l = std::get_if<LaplaceNoise>(&in.noise)) {
    const double tau = l->tau;
    const double amp = (2.0 * tau + c) * (2.0 * tau + c);
    return 3.0 * c * c * amp * logm / (m * tau * tau) +
           2.0 * (3.0 + c * c / (tau * tau)) * amp * (beta + 2.0) * dof * lognm;
  }
  const double zeta = in.zeta;
  return 4.0 * c * c * c * (3.0 + 8.0 * logm) / (zeta * m) +
         48.0 * c * (1.0 + 4.0 * c * c / (3.0 * zeta)) * (beta + 2.0) * dof * lognm;
}

double minimax_lower_bound(const BoundInputs& in, double beta_c, double C) {
  in.validate();
  const double m = double(in.m);
  const double n23 = double(in.n2) * in.n3;
  const double rn1n3 = double(in.r) * in.n1 * in.n3;
  const double s = double(in.s);

  if (std::holds_alternative<PoissonNoise>(in.noise)) {
    if (!(in.s > std::int64_t(in.n2) * in.n3 && in.s <= std::int64_t(in.r) * in.n2 * in.n3)) {
      throw NumericError("minimax_lower_bound: Poisson requires n2*n3 < s <= r*n2*n3");
    }
    if (!(in.zeta < in.b)) throw NumericError("minimax_lower_bound: Poisson requires zeta < b");
    const double varsigma = in.zeta / in.b;
    const double delta1 = std::min(1.0, (s - n23) / n23);
    const double delta_t = std::min((1.0 - varsigma) * (1.0 - varsigma), delta1);
    return C * std::min(delta_t * in.b * in.b,
                        beta_c * beta_c * in.zeta * (s - n23 + rn1n3) / m);
  }

  if (!(in.s >= in.r && in.s <= std::int64_t(in.r) * in.n2 * in.n3)) {
    throw NumericError("minimax_lower_bound: requires r <= s <= r*n2*n3");
  }
  const double nu = noise_param(in.noise);
  const double delta = std::min(1.0, s / n23);
  return C * std::min(delta * in.b * in.b, beta_c * beta_c * nu * nu * (s + rn1n3) / m);
}

double laplace_kl(double mu1, double b1, double mu2, double b2) {
  if (!(b1 > 0.0) || !(b2 > 0.0)) throw NumericError("laplace_kl: scales must be positive");
  const double d = std::abs(mu2 - mu1);
  return std::log(b2 / b1) - 1.0 + d / b2 + (b1 / b2) * std::exp(-d / b1);
}

double poisson_kl_quadratic_bound(double x1, double x2) {
  if (!(x1 > 0.0) || !(x2 > 0.0)) {
    throw NumericError("poisson_kl_quadratic_bound: rates must be positive");
  }
  return (x1 - x2) * (x1 - x2) / x2;
}

Divergence divergences(const NoiseModel& noise, double x1, double x2) {
  Divergence d;
  if (const auto* g = std::get_if<GaussianNoise>(&noise)) {
    if (!(g->sigma > 0.0)) throw NumericError("divergences: sigma must be positive");
    const double dd = (x1 - x2) * (x1 - x2);
    d.kl = dd / (2.0 * g->sigma * g->sigma);
    d.neg2logH = dd / (4.0 * g->sigma * g->sigma);
    return d;
  }
  if (const auto* l = std::get_if<LaplaceNoise>(&noise)) {
    if (!(l->tau > 0.0)) throw NumericError("divergences: tau must be positive");
    const double a = std::abs(x1 - x2) / l->tau;
    // Equal-scale KL: |d|/tau - (1 - exp(-|d|/tau)); expm1 keeps the small-|d|
    // regime accurate.
    d.kl = a + std::expm1(-a);
    d.neg2logH = a - 2.0 * std::log1p(0.5 * a);
    return d;
  }
  if (!(x1 > 0.0) || !(x2 > 0.0)) {
    throw NumericError("divergences: Poisson rates must be positive");
  }
  d.kl = x1 * std::log(x1 / x2) - x1 + x2;
  const double rd = std::sqrt(x1) - std::sqrt(x2);
  d.neg2logH = rd * rd;
  return d;
}

}  // namespace sntf
