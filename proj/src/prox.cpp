#include "sntf/prox.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "sntf/errors.hpp"

namespace sntf {
namespace {

void check_shape(const Tensor3& s, const ObservationSet& obs, const char* op) {
  if (!obs.shape_matches(s)) {
    throw ShapeError(std::string(op) + ": tensor shape " + s.shape_string() +
                     " does not match observations");
  }
}

void check_rho(double rho, const char* op) {
  if (!(rho > 0.0)) throw NumericError(std::string(op) + ": rho must be positive");
}

}  // namespace

Tensor3 project_box(const Tensor3& x, BoxBounds bounds) {
  if (!(bounds.lo <= bounds.hi) || !std::isfinite(bounds.lo) || !std::isfinite(bounds.hi)) {
    throw NumericError("project_box: invalid bounds");
  }
  Tensor3 out(x.n1(), x.n2(), x.n3());
  const double* pi = x.data();
  double* po = out.data();
  const double lo = bounds.lo, hi = bounds.hi;
  const std::ptrdiff_t n = std::ptrdiff_t(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    po[t] = pi[t] < lo ? lo : (pi[t] > hi ? hi : pi[t]);
  }
  return out;
}

Tensor3 prox_l0(const Tensor3& y, double t) {
  if (!(t > 0.0)) throw NumericError("prox_l0: t must be positive");
  const double thr = std::sqrt(2.0 * t);
  Tensor3 out(y.n1(), y.n2(), y.n3());
  const double* pi = y.data();
  double* po = out.data();
  const std::ptrdiff_t n = std::ptrdiff_t(y.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t e = 0; e < n; ++e) {
    po[e] = std::abs(pi[e]) > thr ? pi[e] : 0.0;
  }
  return out;
}

Tensor3 prox_gaussian(const Tensor3& s, const ObservationSet& obs, double rho) {
  check_shape(s, obs, "prox_gaussian");
  check_rho(rho, "prox_gaussian");
  const auto* g = std::get_if<GaussianNoise>(&obs.noise());
  if (!g) throw NumericError("prox_gaussian: observation noise is " + noise_tag(obs.noise()));
  Tensor3 out = s;
  const double w = 2.0 * rho * g->sigma * g->sigma;
  const auto& lin = obs.linear_indices();
  const auto& y = obs.values();
  double* po = out.data();
  const std::ptrdiff_t m = std::ptrdiff_t(obs.m());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < m; ++t) {
    po[lin[t]] = (y[t] + w * po[lin[t]]) / (1.0 + w);
  }
  return out;
}

Tensor3 prox_laplace(const Tensor3& s, const ObservationSet& obs, double rho) {
  check_shape(s, obs, "prox_laplace");
  check_rho(rho, "prox_laplace");
  const auto* l = std::get_if<LaplaceNoise>(&obs.noise());
  if (!l) throw NumericError("prox_laplace: observation noise is " + noise_tag(obs.noise()));
  Tensor3 out = s;
  // tau -> 0 sends the threshold to +inf and the prox collapses to Y.
  const double thr = l->tau < kNoiselessEps ? std::numeric_limits<double>::infinity()
                                            : 1.0 / (2.0 * rho * l->tau);
  const auto& lin = obs.linear_indices();
  const auto& y = obs.values();
  double* po = out.data();
  const std::ptrdiff_t m = std::ptrdiff_t(obs.m());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < m; ++t) {
    const double d = po[lin[t]] - y[t];
    const double mag = std::abs(d) - thr;
    po[lin[t]] = y[t] + (mag > 0.0 ? (d < 0.0 ? -mag : mag) : 0.0);
  }
  return out;
}

double poisson_prox_root(double rho, double s, double y) {
  // Max root of 2 rho x^2 + (1 - 2 rho s) x - y = 0. With u = 2 rho s - 1:
  // x = (u + sqrt(u^2 + 8 rho y)) / (4 rho). For u <= 0 the subtraction
  // cancels, so the Vieta form 2 y / (sqrt(u^2 + 8 rho y) - u) is used there.
  const double u = 2.0 * rho * s - 1.0;
  const double disc = u * u + 8.0 * rho * y;
  assert(disc >= 0.0);
  const double root = std::sqrt(disc);
  if (u > 0.0) return (u + root) / (4.0 * rho);
  const double denom = root - u;
  return denom > 0.0 ? 2.0 * y / denom : 0.0;
}

Tensor3 prox_poisson(const Tensor3& s, const ObservationSet& obs, double rho) {
  check_shape(s, obs, "prox_poisson");
  check_rho(rho, "prox_poisson");
  if (!std::holds_alternative<PoissonNoise>(obs.noise())) {
    throw NumericError("prox_poisson: observation noise is " + noise_tag(obs.noise()));
  }
  Tensor3 out = s;
  const auto& lin = obs.linear_indices();
  const auto& y = obs.values();
  double* po = out.data();
  const std::ptrdiff_t m = std::ptrdiff_t(obs.m());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < m; ++t) {
    po[lin[t]] = poisson_prox_root(rho, po[lin[t]], y[t]);
  }
  return out;
}

Tensor3 prox_neg_log_likelihood(const Tensor3& s, const ObservationSet& obs, double rho) {
  if (std::holds_alternative<GaussianNoise>(obs.noise())) return prox_gaussian(s, obs, rho);
  if (std::holds_alternative<LaplaceNoise>(obs.noise())) return prox_laplace(s, obs, rho);
  return prox_poisson(s, obs, rho);
}

}  // namespace sntf
