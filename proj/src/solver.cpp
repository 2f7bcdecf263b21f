#include "sntf/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "sntf/errors.hpp"
#include "sntf/fourier.hpp"
#include "sntf/prox.hpp"
#include "sntf/rng.hpp"
#include "sntf/tprod.hpp"

namespace sntf {
namespace {

using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<CMat>;
using CConstMap = Eigen::Map<const CMat>;

Tensor3 random_uniform(int n1, int n2, int n3, double scale, std::uint64_t seed,
                       rng::Stream stream) {
  Tensor3 t(n1, n2, n3);
  double* p = t.data();
  const std::ptrdiff_t n = std::ptrdiff_t(t.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t e = 0; e < n; ++e) {
    rng::EntryRng r(seed, stream, std::uint64_t(e));
    p[e] = scale * r.uniform();
  }
  return t;
}

void guard_finite(const Tensor3& t, const char* block, int iter) {
  if (!all_finite(t)) {
    throw NumericError(std::string("solve: non-finite value in block ") + block +
                       " at iteration " + std::to_string(iter));
  }
}

// X^{k+1} = prox of the scaled data-fit term at
// S = (Q + A*B + (T1 - T2)/rho) / 2, with A*B passed in by the caller.
Tensor3 update_x_impl(const SolverState& s, const ObservationSet& obs, const SolverConfig& cfg,
                      const Tensor3& ab) {
  const double hr = 0.5 / cfg.rho;
  Tensor3 mid = lincomb(0.5, s.Q, 0.5, ab, hr, s.T1);
  mid = lincomb(1.0, mid, -hr, s.T2);
  return prox_neg_log_likelihood(mid, obs, cfg.rho);
}

Multipliers update_multipliers_impl(const SolverState& s, const SolverConfig& cfg,
                                    const Tensor3& ab) {
  const double rho = cfg.rho;
  Multipliers t;
  t.T1 = lincomb(1.0, s.T1, -rho, s.X, rho, ab);
  t.T2 = lincomb(1.0, s.T2, -rho, s.Q, rho, s.X);
  t.T3 = lincomb(1.0, s.T3, -rho, s.M, rho, s.A);
  t.T4 = lincomb(1.0, s.T4, -rho, s.N, rho, s.B);
  t.T5 = lincomb(1.0, s.T5, -rho, s.Z, rho, s.B);
  return t;
}

KktResiduals kkt_residuals_impl(const SolverState& s, const ObservationSet& obs,
                                const SolverConfig& cfg, const Tensor3& ab) {
  KktResiduals r;
  // eta_1: stationarity of X against the unscaled data-fit prox, which is the
  // rho = 1/2 instance of the scaled prox.
  {
    const Tensor3 v = lincomb(1.0, s.T1, -1.0, s.T2, 1.0, s.X);
    const Tensor3 px = prox_neg_log_likelihood(v, obs, 0.5);
    r.eta[0] =
        fro_norm(s.X - px) / (1.0 + fro_norm(s.X) + fro_norm(s.T1) + fro_norm(s.T2));
  }
  r.eta[1] = fro_norm(s.Q - project_box(s.T2 + s.Q, {0.0, cfg.c})) /
             (1.0 + fro_norm(s.T2) + fro_norm(s.Q));
  r.eta[2] = fro_norm(s.M - project_box(s.T3 + s.M, {0.0, 1.0})) /
             (1.0 + fro_norm(s.T3) + fro_norm(s.M));
  r.eta[3] = fro_norm(s.N - prox_l0(s.T4 + s.N, cfg.lambda)) /
             (1.0 + fro_norm(s.T4) + fro_norm(s.N));
  r.eta[4] = fro_norm(s.Z - project_box(s.T5 + s.Z, {0.0, cfg.b})) /
             (1.0 + fro_norm(s.T5) + fro_norm(s.Z));
  r.eta[5] =
      fro_norm(s.X - ab) / (1.0 + fro_norm(s.X) + fro_norm(s.A) + fro_norm(s.B));
  r.eta_max = *std::max_element(r.eta.begin(), r.eta.end());
  return r;
}

}  // namespace

void SolverConfig::validate() const {
  if (r < 1) throw NumericError("SolverConfig: r must be >= 1");
  if (!(rho > 0.0)) throw NumericError("SolverConfig: rho must be positive");
  if (!(lambda > 0.0)) throw NumericError("SolverConfig: lambda must be positive");
  if (!(c > 0.0)) throw NumericError("SolverConfig: c must be positive");
  if (!(b > 0.0)) throw NumericError("SolverConfig: b must be positive");
  if (max_iters < 0) throw NumericError("SolverConfig: max_iters must be >= 0");
  if (!(tol > 0.0) && tol != 0.0) throw NumericError("SolverConfig: tol must be >= 0");
  if (kkt_every < 1) throw NumericError("SolverConfig: kkt_every must be >= 1");
}

// Grid winners {1e-3, 1e-2, 1e-1, 1} on a 50^3 pilot instance (r=10, s=0.3,
// b=2, SR=0.5) per noise model.
double default_lambda(const NoiseModel& noise) {
  if (std::holds_alternative<GaussianNoise>(noise)) return 1e-3;
  if (std::holds_alternative<LaplaceNoise>(noise)) return 1e-2;
  return 1.0;  // Poisson
}

// Pilot grid {0.1, 0.2, 0.3, 0.4, 0.5} on 50^3 instances across ranks 5..30.
double default_rho(const NoiseModel& noise) {
  return std::holds_alternative<PoissonNoise>(noise) ? 0.4 : 0.1;
}

double default_amplitude_bound(const ObservationSet& obs) {
  double mx = 0.0;
  for (double v : obs.values()) mx = std::max(mx, std::abs(v));
  return mx > 0.0 ? 2.0 * mx : 1.0;
}

SolverState init_state(const ObservationSet& obs, const SolverConfig& cfg) {
  cfg.validate();
  const int n1 = obs.n1(), n2 = obs.n2(), n3 = obs.n3(), r = cfg.r;
  if (r > std::min(n1, n2)) {
    throw ShapeError("init_state: rank " + std::to_string(r) + " exceeds min(n1,n2) of " +
                     std::to_string(std::min(n1, n2)));
  }
  SolverState s;
  s.A = random_uniform(n1, r, n3, 1.0, cfg.seed, rng::Stream::InitA);
  s.M = random_uniform(n1, r, n3, 1.0, cfg.seed, rng::Stream::InitM);
  s.T3 = random_uniform(n1, r, n3, 1.0, cfg.seed, rng::Stream::InitT3);
  s.B = random_uniform(r, n2, n3, cfg.b, cfg.seed, rng::Stream::InitB);
  s.N = random_uniform(r, n2, n3, cfg.b, cfg.seed, rng::Stream::InitN);
  s.Z = random_uniform(r, n2, n3, cfg.b, cfg.seed, rng::Stream::InitZ);
  s.T4 = random_uniform(r, n2, n3, 1.0, cfg.seed, rng::Stream::InitT4);
  s.T5 = random_uniform(r, n2, n3, 1.0, cfg.seed, rng::Stream::InitT5);

  // X, Q, T1, T2 start at the observations on Omega and zero outside.
  Tensor3 yfill(n1, n2, n3);
  double* p = yfill.data();
  const auto& lin = obs.linear_indices();
  const auto& val = obs.values();
  for (std::size_t t = 0; t < obs.m(); ++t) p[lin[t]] = val[t];
  s.X = yfill;
  s.Q = yfill;
  s.T1 = yfill;
  s.T2 = std::move(yfill);
  s.iter = 0;
  return s;
}

Tensor3 update_x(const SolverState& s, const ObservationSet& obs, const SolverConfig& cfg) {
  return update_x_impl(s, obs, cfg, tprod(s.A, s.B));
}

Tensor3 update_a(const SolverState& s, const SolverConfig& cfg) {
  const int n1 = s.X.n1(), n2 = s.X.n2(), n3 = s.X.n3();
  const int r = s.B.n1();
  const double ir = 1.0 / cfg.rho;
  const Tensor3 w = lincomb(1.0, s.X, -ir, s.T1);
  const Tensor3 rhs0 = lincomb(1.0, s.M, -ir, s.T3);
  const Spectrum fw = fft_r2c(w);
  const Spectrum fb = fft_r2c(s.B);
  const Spectrum fr = fft_r2c(rhs0);
  Spectrum fa(n1, r, n3);
  const int nf = fa.nfaces();
  int bad_face = -1;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nf; ++k) {
    CConstMap wk(fw.face(k), n1, n2);
    CConstMap bk(fb.face(k), r, n2);
    CConstMap rk(fr.face(k), n1, r);
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Identity(r, r);
    gram.noalias() += bk * bk.adjoint();
    Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success) {
#pragma omp critical
      if (bad_face < 0 || k < bad_face) bad_face = k;
      continue;
    }
    Eigen::MatrixXcd num = rk;
    num.noalias() += wk * bk.adjoint();
    CMap ak(fa.face(k), n1, r);
    ak = llt.solve(num.adjoint()).adjoint();
  }
  if (bad_face >= 0) {
    throw SingularFaceError(bad_face, 0.0,
                            "update_a: face " + std::to_string(bad_face) +
                                " factorization failed (B*B^T + I not positive definite)");
  }
  return fft_c2r(fa);
}

Tensor3 update_b(const SolverState& s, const SolverConfig& cfg) {
  const int n1 = s.X.n1(), n2 = s.X.n2(), n3 = s.X.n3();
  const int r = s.A.n2();
  const double ir = 1.0 / cfg.rho;
  const Tensor3 w = lincomb(1.0, s.X, -ir, s.T1);
  Tensor3 add = lincomb(1.0, s.N, 1.0, s.Z, -ir, s.T4);
  add = lincomb(1.0, add, -ir, s.T5);
  const Spectrum fw = fft_r2c(w);
  const Spectrum fa = fft_r2c(s.A);
  const Spectrum fc = fft_r2c(add);
  Spectrum fb(r, n2, n3);
  const int nf = fb.nfaces();
  int bad_face = -1;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nf; ++k) {
    CConstMap wk(fw.face(k), n1, n2);
    CConstMap ak(fa.face(k), n1, r);
    CConstMap ck(fc.face(k), r, n2);
    Eigen::MatrixXcd gram = 2.0 * Eigen::MatrixXcd::Identity(r, r);
    gram.noalias() += ak.adjoint() * ak;
    Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success) {
#pragma omp critical
      if (bad_face < 0 || k < bad_face) bad_face = k;
      continue;
    }
    Eigen::MatrixXcd num = ck;
    num.noalias() += ak.adjoint() * wk;
    CMap bk(fb.face(k), r, n2);
    bk = llt.solve(num);
  }
  if (bad_face >= 0) {
    throw SingularFaceError(bad_face, 0.0,
                            "update_b: face " + std::to_string(bad_face) +
                                " factorization failed (A^T*A + 2I not positive definite)");
  }
  return fft_c2r(fb);
}

AuxBlocks update_auxiliaries(const SolverState& s, const SolverConfig& cfg) {
  const double ir = 1.0 / cfg.rho;
  AuxBlocks aux;
  aux.Q = project_box(lincomb(1.0, s.X, ir, s.T2), {0.0, cfg.c});
  aux.M = project_box(lincomb(1.0, s.A, ir, s.T3), {0.0, 1.0});
  aux.N = prox_l0(lincomb(1.0, s.B, ir, s.T4), cfg.lambda / cfg.rho);
  aux.Z = project_box(lincomb(1.0, s.B, ir, s.T5), {0.0, cfg.b});
  return aux;
}

Multipliers update_multipliers(const SolverState& s, const SolverConfig& cfg) {
  return update_multipliers_impl(s, cfg, tprod(s.A, s.B));
}

KktResiduals kkt_residuals(const SolverState& s, const ObservationSet& obs,
                           const SolverConfig& cfg) {
  return kkt_residuals_impl(s, obs, cfg, tprod(s.A, s.B));
}

Tensor3 SolveReport::estimate() const { return project_box(state.X, {0.0, config.c}); }

Tensor3 SolveReport::estimate_product() const { return tprod(state.A, state.B); }

SolveReport solve(const ObservationSet& obs, const SolverConfig& cfg, std::ostream* trace) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  report.config = cfg;
  report.state = init_state(obs, cfg);
  SolverState& s = report.state;
  report.eta_history.reserve(cfg.max_iters);
  report.objective_history.reserve(cfg.max_iters);

  if (trace) {
    *trace << "iter,eta1,eta2,eta3,eta4,eta5,eta6,eta_max,objective\n";
  }

  Tensor3 ab = tprod(s.A, s.B);
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    s.X = update_x_impl(s, obs, cfg, ab);
    guard_finite(s.X, "X", iter);
    s.A = update_a(s, cfg);
    guard_finite(s.A, "A", iter);
    s.B = update_b(s, cfg);
    guard_finite(s.B, "B", iter);

    AuxBlocks aux = update_auxiliaries(s, cfg);
    s.Q = std::move(aux.Q);
    s.M = std::move(aux.M);
    s.N = std::move(aux.N);
    s.Z = std::move(aux.Z);
    guard_finite(s.Q, "Q", iter);
    guard_finite(s.M, "M", iter);
    guard_finite(s.N, "N", iter);
    guard_finite(s.Z, "Z", iter);

    ab = tprod(s.A, s.B);
    guard_finite(ab, "A*B", iter);
    Multipliers mult = update_multipliers_impl(s, cfg, ab);
    s.T1 = std::move(mult.T1);
    s.T2 = std::move(mult.T2);
    s.T3 = std::move(mult.T3);
    s.T4 = std::move(mult.T4);
    s.T5 = std::move(mult.T5);
    guard_finite(s.T1, "T1", iter);
    guard_finite(s.T2, "T2", iter);
    guard_finite(s.T3, "T3", iter);
    guard_finite(s.T4, "T4", iter);
    guard_finite(s.T5, "T5", iter);

    s.iter = iter;
    const bool evaluate = (iter % cfg.kkt_every == 0) || iter == cfg.max_iters;
    if (evaluate) s.eta = kkt_residuals_impl(s, obs, cfg, ab);
    report.eta_history.push_back(s.eta);

    const double objective =
        neg_log_likelihood(s.X, obs) + cfg.lambda * double(l0_norm(s.N));
    report.objective_history.push_back(objective);

    if (trace) {
      char line[256];
      std::snprintf(line, sizeof line,
                    "%d,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e\n", iter, s.eta.eta[0],
                    s.eta.eta[1], s.eta.eta[2], s.eta.eta[3], s.eta.eta[4], s.eta.eta[5],
                    s.eta.eta_max, objective);
      *trace << line;
    }

    report.iters_run = iter;
    if (evaluate && s.eta.eta_max <= cfg.tol) {
      report.converged = true;
      break;
    }
  }

  const auto t1 = std::chrono::steady_clock::now();
  report.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return report;
}

double relative_error(const Tensor3& xhat, const Tensor3& xstar) {
  if (!xhat.same_shape(xstar)) {
    throw ShapeError("relative_error: shape mismatch " + xhat.shape_string() + " vs " +
                     xstar.shape_string());
  }
  const double denom = fro_norm(xstar);
  if (denom == 0.0) throw NumericError("relative_error: ground truth has zero norm");
  return fro_norm(xhat - xstar) / denom;
}

}  // namespace sntf
