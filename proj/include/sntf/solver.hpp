#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sntf/observation.hpp"
#include "sntf/tensor.hpp"

namespace sntf {

/// Hyperparameters of the factorization ADMM.
///
/// rho and lambda default to the documented pilot-grid choices (rho = 0.1,
/// lambda per noise model via default_lambda); c has no universal default --
/// for synthetic data use 2*||X*||_inf, for real data 2*max|Y|
/// (default_amplitude_bound).
struct SolverConfig {
  int r = 1;                  // inner factorization rank
  double rho = 0.1;           // ADMM penalty
  double lambda = 0.1;        // l0 weight on the sparse factor
  double c = 1.0;             // upper bound for X entries
  double b = 1.0;             // upper bound for B entries
  int max_iters = 300;
  double tol = 1e-4;          // stop when eta_max <= tol
  std::uint64_t seed = 0;     // initialization seed
  int kkt_every = 1;          // residual evaluation period

  void validate() const;
};

/// Documented per-noise default for lambda, chosen on a pilot instance over
/// the grid {1e-3, 1e-2, 1e-1, 1}.
double default_lambda(const NoiseModel& noise);

/// Documented per-noise default for rho. Gaussian and Laplace run well at
/// 0.1; Poisson needs the stronger consensus coupling of 0.4 to avoid poor
/// stationary points on weak-signal (small r) instances.
double default_rho(const NoiseModel& noise);

/// c rule when no ground truth is available: 2 * max |Y|.
double default_amplitude_bound(const ObservationSet& obs);

struct KktResiduals {
  std::array<double, 6> eta{};  // eta_1 .. eta_6
  double eta_max = 0.0;
};

/// The seven primal blocks and five multipliers of the splitting
///   X = A * B,  Q = X,  M = A,  N = B,  Z = B.
struct SolverState {
  Tensor3 X, Q, T1, T2;   // n1 x n2 x n3
  Tensor3 A, M, T3;       // n1 x r  x n3
  Tensor3 B, N, Z, T4, T5;  // r x n2 x n3
  int iter = 0;
  KktResiduals eta;
};

struct SolveReport {
  SolverState state;
  SolverConfig config;
  int iters_run = 0;
  bool converged = false;
  double wall_time_ms = 0.0;
  /// One entry per iteration. When kkt_every > 1, iterations between
  /// evaluations carry the most recent evaluated residuals.
  std::vector<KktResiduals> eta_history;
  /// -log p + lambda * ||N||_0 per iteration.
  std::vector<double> objective_history;

  /// Reported estimate: final X clamped to [0, c].
  Tensor3 estimate() const;
  /// The unclamped X block.
  const Tensor3& estimate_raw() const { return state.X; }
  /// The box-constrained block Q.
  const Tensor3& estimate_q() const { return state.Q; }
  /// The factorization product A * B.
  Tensor3 estimate_product() const;
};

/// Initial state: A, M and T3..T5 ~ U[0,1), B, N, Z ~ U[0,b) (element-
/// addressed Philox streams of cfg.seed); X, Q, T1, T2 equal Y on the
/// observed set and 0 elsewhere.
SolverState init_state(const ObservationSet& obs, const SolverConfig& cfg);

// One block update each. Every function is pure: it reads the state (which
// holds already-updated blocks from earlier steps of the same iteration,
// matching the in-order semantics of the algorithm) and returns the new
// block.
Tensor3 update_x(const SolverState& s, const ObservationSet& obs, const SolverConfig& cfg);
Tensor3 update_a(const SolverState& s, const SolverConfig& cfg);
Tensor3 update_b(const SolverState& s, const SolverConfig& cfg);

struct AuxBlocks {
  Tensor3 Q, M, N, Z;
};
AuxBlocks update_auxiliaries(const SolverState& s, const SolverConfig& cfg);

struct Multipliers {
  Tensor3 T1, T2, T3, T4, T5;
};
Multipliers update_multipliers(const SolverState& s, const SolverConfig& cfg);

/// The six relative KKT residuals and their maximum.
KktResiduals kkt_residuals(const SolverState& s, const ObservationSet& obs,
                           const SolverConfig& cfg);

/// Runs the full ADMM until eta_max <= cfg.tol or cfg.max_iters iterations.
/// Deterministic for a fixed seed. When trace is non-null, writes one CSV
/// line `iter,eta1..eta6,eta_max,objective` per iteration.
SolveReport solve(const ObservationSet& obs, const SolverConfig& cfg,
                  std::ostream* trace = nullptr);

/// ||xhat - xstar||_F / ||xstar||_F.
double relative_error(const Tensor3& xhat, const Tensor3& xstar);

}  // namespace sntf
