#pragma once

#include "sntf/observation.hpp"
#include "sntf/tensor.hpp"

namespace sntf {

struct BoxBounds {
  double lo;
  double hi;
};

/// Elementwise clamp of x to [bounds.lo, bounds.hi].
Tensor3 project_box(const Tensor3& x, BoxBounds bounds);

/// Proximal map of t * l0: hard threshold at sqrt(2t). Entries with
/// |y| <= sqrt(2t) are zeroed (the boundary tie resolves to 0), entries above
/// pass through.
Tensor3 prox_l0(const Tensor3& y, double t);

// Data-fit proximal maps of (1/(2 rho)) * (-log p_{X_Omega}(Y_Omega)) at S.
// On the observed set they apply the per-entry closed forms below; off the
// observed set they return S unchanged. Each throws if obs carries a
// different noise model.
//
//   gaussian: (Y + 2 rho sigma^2 S) / (1 + 2 rho sigma^2)
//   laplace:  Y + sign(S - Y) * max(|S - Y| - 1/(2 rho tau), 0)
//   poisson:  positive root of 2 rho x^2 + (1 - 2 rho S) x - Y = 0
Tensor3 prox_gaussian(const Tensor3& s, const ObservationSet& obs, double rho);
Tensor3 prox_laplace(const Tensor3& s, const ObservationSet& obs, double rho);
Tensor3 prox_poisson(const Tensor3& s, const ObservationSet& obs, double rho);

/// Dispatch on obs.noise().
Tensor3 prox_neg_log_likelihood(const Tensor3& s, const ObservationSet& obs, double rho);

/// Scalar Poisson prox root, exposed for testing. Evaluates the max root of
/// 2 rho x^2 + (1 - 2 rho s) x - y = 0 in a cancellation-free form.
double poisson_prox_root(double rho, double s, double y);

}  // namespace sntf
