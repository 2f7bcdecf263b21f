#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sntf/tensor.hpp"

namespace sntf {

// Observation noise models. The Gaussian "noiseless limit" convention: a
// sigma (or tau) below kNoiselessEps means exact observations.
struct GaussianNoise {
  double sigma;
};
struct LaplaceNoise {
  double tau;
};
struct PoissonNoise {};

using NoiseModel = std::variant<GaussianNoise, LaplaceNoise, PoissonNoise>;

inline constexpr double kNoiselessEps = 1e-15;
/// Lower clamp applied to candidate entries inside the Poisson likelihood
/// (and only there) before taking logs.
inline constexpr double kPoissonFloor = 1e-12;

std::string noise_tag(const NoiseModel& noise);   // "gaussian" | "laplace" | "poisson"
double noise_param(const NoiseModel& noise);      // sigma, tau, or 0
NoiseModel make_noise(const std::string& tag, double param);

struct Index3 {
  int i, j, k;
  friend bool operator==(const Index3&, const Index3&) = default;
  friend auto operator<=>(const Index3&, const Index3&) = default;
};

/// Observed index set with aligned values and the noise model explaining
/// them. Indices are zero-based, strictly sorted lexicographically by
/// (i, j, k), in bounds and free of duplicates; immutable after construction.
class ObservationSet {
public:
  ObservationSet(int n1, int n2, int n3, std::vector<Index3> indices,
                 std::vector<double> values, NoiseModel noise, double gamma);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int n3() const { return n3_; }
  std::size_t m() const { return indices_.size(); }
  double gamma() const { return gamma_; }
  const NoiseModel& noise() const { return noise_; }
  const std::vector<Index3>& indices() const { return indices_; }
  const std::vector<double>& values() const { return values_; }
  /// Linear storage offsets of the observed entries (same order as indices).
  const std::vector<std::size_t>& linear_indices() const { return linear_; }

  bool shape_matches(const Tensor3& x) const {
    return x.n1() == n1_ && x.n2() == n2_ && x.n3() == n3_;
  }

private:
  int n1_, n2_, n3_;
  std::vector<Index3> indices_;
  std::vector<double> values_;
  std::vector<std::size_t> linear_;
  NoiseModel noise_;
  double gamma_;
};

/// Bernoulli(gamma) sample of the index cube, sorted. Each triple is included
/// independently with probability gamma, driven by the Philox stream
/// (seed, Mask, linear index); fixed seeds give identical masks on every
/// platform.
std::vector<Index3> sample_mask(int n1, int n2, int n3, double gamma, std::uint64_t seed);

/// Draws observations of xstar on the mask under the given noise model:
/// Gaussian adds sigma * N(0,1) (variance sigma^2), Laplace adds
/// Laplace(0, tau), Poisson draws Poisson(xstar) with Poisson(0) == 0.
/// The stored gamma is the realized m / (n1*n2*n3).
ObservationSet synthesize(const Tensor3& xstar, const std::vector<Index3>& mask,
                          const NoiseModel& noise, std::uint64_t seed);

/// -log p_{X_Omega}(Y_Omega) for the observation's noise model. Gaussian and
/// Laplace parameters are clamped below at kNoiselessEps so the noiseless
/// limit stays finite; Poisson candidates are clamped at kPoissonFloor before
/// the log.
double neg_log_likelihood(const Tensor3& x, const ObservationSet& obs);

// "OBS v1" text format: `obs 1 <n1> <n2> <n3> <m> <noise-tag> <param>`, then
// m lines `i j k value` with 1-based indices.
void write_obs(const std::string& path, const ObservationSet& obs);
ObservationSet read_obs(const std::string& path);

}  // namespace sntf
