#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sntf/observation.hpp"
#include "sntf/solver.hpp"
#include "sntf/tensor.hpp"

namespace sntf {

/// Synthetic ground truth: A* ~ U[0,1) dense, B* with exactly
/// floor(s * r * n2 * n3) nonzeros at distinct uniform positions and values
/// b * U[0,1), X* = A* times B*, and the amplitude bound c = 2 ||X*||_inf.
struct Instance {
  Tensor3 a, b, x;
  double c = 0.0;
};

Instance generate_instance(int n1, int n2, int n3, int r, double s, double b,
                           std::uint64_t seed);

/// One experiment sweep: exactly one of sr_list / r_list / n_list is
/// nonempty and provides the axis; every (axis value, seed) pair becomes one
/// solver run.
struct ExperimentSpec {
  int n1 = 50, n2 = 50, n3 = 50;
  int r_true = 10;
  double s = 0.3;
  double b = 2.0;
  NoiseModel noise = GaussianNoise{0.1};
  double sr = 0.5;  // sampling ratio used when sr_list is not the axis

  std::vector<double> sr_list;
  std::vector<int> r_list;
  std::vector<int> n_list;
  std::vector<std::uint64_t> seeds;

  // Solver template; nonpositive rho/lambda mean "use the per-noise default".
  double rho = 0.0;
  double lambda = 0.0;
  int max_iters = 300;
  double tol = 1e-4;
  int kkt_every = 1;

  std::string output_path;

  void validate() const;
};

struct SweepRow {
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  std::size_t realized_m = 0;
  double re = 0.0;
  int iters = 0;
  bool converged = false;
  double wall_time_ms = 0.0;
};

/// Runs the sweep; rows are ordered by (axis, seed) and deterministic for
/// fixed seeds. A failed run records re = NaN and the sweep continues.
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec);

/// CSV columns: axis,seed,m,re,iters,converged,ms
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Flat `key = value` config with `#` comments; unknown keys are an error.
ExperimentSpec load_experiment_spec(const std::string& path);

}  // namespace sntf
