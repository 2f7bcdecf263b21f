#include "sntf/observation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sntf/errors.hpp"
#include "sntf/rng.hpp"

namespace sntf {

std::string noise_tag(const NoiseModel& noise) {
  if (std::holds_alternative<GaussianNoise>(noise)) return "gaussian";
  if (std::holds_alternative<LaplaceNoise>(noise)) return "laplace";
  return "poisson";
}

double noise_param(const NoiseModel& noise) {
  if (const auto* g = std::get_if<GaussianNoise>(&noise)) return g->sigma;
  if (const auto* l = std::get_if<LaplaceNoise>(&noise)) return l->tau;
  return 0.0;
}

NoiseModel make_noise(const std::string& tag, double param) {
  if (tag == "gaussian") {
    if (param < 0.0) throw NumericError("gaussian sigma must be >= 0");
    return GaussianNoise{param};
  }
  if (tag == "laplace") {
    if (param < 0.0) throw NumericError("laplace tau must be >= 0");
    return LaplaceNoise{param};
  }
  if (tag == "poisson") return PoissonNoise{};
  throw IoError("unknown noise tag: " + tag);
}

ObservationSet::ObservationSet(int n1, int n2, int n3, std::vector<Index3> indices,
                               std::vector<double> values, NoiseModel noise, double gamma)
    : n1_(n1), n2_(n2), n3_(n3), indices_(std::move(indices)), values_(std::move(values)),
      noise_(noise), gamma_(gamma) {
  if (n1 < 1 || n2 < 1 || n3 < 1) throw ShapeError("ObservationSet: invalid dimensions");
  if (indices_.size() != values_.size()) {
    throw ShapeError("ObservationSet: indices/values length mismatch");
  }
  if (!(gamma_ >= 0.0 && gamma_ <= 1.0)) throw NumericError("ObservationSet: gamma out of [0,1]");
  const bool poisson = std::holds_alternative<PoissonNoise>(noise_);
  for (std::size_t t = 0; t < indices_.size(); ++t) {
    const Index3& ix = indices_[t];
    if (ix.i < 0 || ix.i >= n1 || ix.j < 0 || ix.j >= n2 || ix.k < 0 || ix.k >= n3) {
      throw ShapeError("ObservationSet: index out of bounds at entry " + std::to_string(t));
    }
    if (t > 0 && !(indices_[t - 1] < ix)) {
      throw ShapeError("ObservationSet: indices not strictly sorted at entry " +
                       std::to_string(t));
    }
    if (!std::isfinite(values_[t])) {
      throw NumericError("ObservationSet: non-finite value at entry " + std::to_string(t));
    }
    if (poisson && (values_[t] < 0.0 || values_[t] != std::floor(values_[t]))) {
      throw NumericError("ObservationSet: Poisson value must be a nonnegative integer at entry " +
                         std::to_string(t));
    }
  }
  linear_.resize(indices_.size());
  for (std::size_t t = 0; t < indices_.size(); ++t) {
    const Index3& ix = indices_[t];
    linear_[t] = (std::size_t(ix.k) * n1_ + ix.i) * n2_ + ix.j;
  }
}

std::vector<Index3> sample_mask(int n1, int n2, int n3, double gamma, std::uint64_t seed) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw NumericError("sample_mask: gamma must be in (0, 1], got " + std::to_string(gamma));
  }
  std::vector<Index3> mask;
  mask.reserve(std::size_t(double(n1) * n2 * n3 * gamma * 1.1) + 16);
  // Iterating (i, j, k) ascending yields the sorted order directly. The
  // stream element is the (i,j,k)-lexicographic rank, independent of gamma.
  std::uint64_t element = 0;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      for (int k = 0; k < n3; ++k, ++element) {
        rng::EntryRng r(seed, rng::Stream::Mask, element);
        if (r.uniform() < gamma) mask.push_back({i, j, k});
      }
    }
  }
  return mask;
}

ObservationSet synthesize(const Tensor3& xstar, const std::vector<Index3>& mask,
                          const NoiseModel& noise, std::uint64_t seed) {
  const std::size_t m = mask.size();
  std::vector<double> values(m);
  const double param = noise_param(noise);
  const bool noiseless = param < kNoiselessEps;

  if (std::holds_alternative<GaussianNoise>(noise)) {
    const double sigma = param;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < std::ptrdiff_t(m); ++t) {
      const Index3& ix = mask[t];
      const double x = xstar(ix.i, ix.j, ix.k);
      if (noiseless) {
        values[t] = x;
      } else {
        rng::EntryRng r(seed, rng::Stream::Noise, std::uint64_t(t));
        values[t] = x + sigma * r.normal();
      }
    }
  } else if (std::holds_alternative<LaplaceNoise>(noise)) {
    const double tau = param;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < std::ptrdiff_t(m); ++t) {
      const Index3& ix = mask[t];
      const double x = xstar(ix.i, ix.j, ix.k);
      if (noiseless) {
        values[t] = x;
      } else {
        rng::EntryRng r(seed, rng::Stream::Noise, std::uint64_t(t));
        values[t] = x + r.laplace(tau);
      }
    }
  } else {
    for (std::size_t t = 0; t < m; ++t) {
      const Index3& ix = mask[t];
      if (xstar(ix.i, ix.j, ix.k) < 0.0) {
        throw NumericError("synthesize: negative Poisson mean at (" + std::to_string(ix.i + 1) +
                           "," + std::to_string(ix.j + 1) + "," + std::to_string(ix.k + 1) + ")");
      }
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < std::ptrdiff_t(m); ++t) {
      const Index3& ix = mask[t];
      rng::EntryRng r(seed, rng::Stream::Noise, std::uint64_t(t));
      values[t] = double(r.poisson(xstar(ix.i, ix.j, ix.k)));
    }
  }

  const double n_total = double(xstar.n1()) * xstar.n2() * xstar.n3();
  const double gamma = m > 0 ? double(m) / n_total : 0.0;
  return ObservationSet(xstar.n1(), xstar.n2(), xstar.n3(), mask, std::move(values), noise,
                        gamma);
}

double neg_log_likelihood(const Tensor3& x, const ObservationSet& obs) {
  if (!obs.shape_matches(x)) {
    throw ShapeError("neg_log_likelihood: tensor shape " + x.shape_string() +
                     " does not match observations");
  }
  const auto& lin = obs.linear_indices();
  const auto& y = obs.values();
  const double* xd = x.data();
  const std::size_t m = obs.m();
  double nll = 0.0;

  if (const auto* g = std::get_if<GaussianNoise>(&obs.noise())) {
    const double sigma = std::max(g->sigma, kNoiselessEps);
    double ss = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
      const double d = y[t] - xd[lin[t]];
      ss += d * d;
    }
    nll = 0.5 * double(m) * std::log(2.0 * M_PI * sigma * sigma) + ss / (2.0 * sigma * sigma);
  } else if (const auto* l = std::get_if<LaplaceNoise>(&obs.noise())) {
    const double tau = std::max(l->tau, kNoiselessEps);
    double l1 = 0.0;
    for (std::size_t t = 0; t < m; ++t) l1 += std::abs(y[t] - xd[lin[t]]);
    nll = double(m) * std::log(2.0 * tau) + l1 / tau;
  } else {
    for (std::size_t t = 0; t < m; ++t) {
      const double xe = std::max(xd[lin[t]], kPoissonFloor);
      const double term = xe - y[t] * std::log(xe) + std::lgamma(y[t] + 1.0);
      if (!std::isfinite(term)) {
        throw NumericError("neg_log_likelihood: non-finite Poisson term at observation " +
                           std::to_string(t));
      }
      nll += term;
    }
  }
  if (!std::isfinite(nll)) {
    throw NumericError("neg_log_likelihood: non-finite result");
  }
  return nll;
}

void write_obs(const std::string& path, const ObservationSet& obs) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", noise_param(obs.noise()));
  os << "obs 1 " << obs.n1() << " " << obs.n2() << " " << obs.n3() << " " << obs.m() << " "
     << noise_tag(obs.noise()) << " " << buf << "\n";
  const auto& ix = obs.indices();
  const auto& v = obs.values();
  for (std::size_t t = 0; t < obs.m(); ++t) {
    std::snprintf(buf, sizeof buf, "%.17g", v[t]);
    os << (ix[t].i + 1) << " " << (ix[t].j + 1) << " " << (ix[t].k + 1) << " " << buf << "\n";
  }
  if (!os) throw IoError("write failed: " + path);
}

ObservationSet read_obs(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  std::string magic, tag;
  int version = 0, n1 = 0, n2 = 0, n3 = 0;
  std::size_t m = 0;
  double param = 0.0;
  is >> magic >> version >> n1 >> n2 >> n3 >> m >> tag >> param;
  if (!is || magic != "obs" || version != 1) throw IoError("not an OBS v1 file: " + path);
  std::vector<Index3> indices(m);
  std::vector<double> values(m);
  for (std::size_t t = 0; t < m; ++t) {
    int i, j, k;
    if (!(is >> i >> j >> k >> values[t])) throw IoError("truncated OBS payload in " + path);
    indices[t] = {i - 1, j - 1, k - 1};
  }
  const double n_total = double(n1) * n2 * n3;
  const double gamma = m > 0 ? double(m) / n_total : 0.0;
  return ObservationSet(n1, n2, n3, std::move(indices), std::move(values),
                        make_noise(tag, param), gamma);
}

}  // namespace sntf
