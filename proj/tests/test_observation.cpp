#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "sntf/errors.hpp"
#include "sntf/observation.hpp"
#include "sntf/rng.hpp"
#include "test_support.hpp"

using namespace sntf;
using testsupport::random_tensor;

TEST_CASE("sample_mask with gamma=1 is the full cube") {
  const auto mask = sample_mask(3, 4, 5, 1.0, 42);
  REQUIRE(mask.size() == 60);
  CHECK(mask.front() == Index3{0, 0, 0});
  CHECK(mask.back() == Index3{2, 3, 4});
  for (std::size_t t = 1; t < mask.size(); ++t) CHECK(mask[t - 1] < mask[t]);
}

TEST_CASE("sample_mask is deterministic for a fixed seed") {
  const auto a = sample_mask(6, 7, 8, 0.37, 123);
  const auto b = sample_mask(6, 7, 8, 0.37, 123);
  CHECK(a == b);
  const auto c = sample_mask(6, 7, 8, 0.37, 124);
  CHECK(a != c);
}

TEST_CASE("sample_mask size matches the binomial law") {
  // 1000 seeds at gamma = 0.5 on a 20^3 cube: the mean count estimates a
  // Binomial(8000, 1/2) mean, so it must land within 3 standard errors of
  // 4000, i.e. 3 * sqrt(8000 * 0.25 / 1000) = 4.24.
  double total = 0.0;
  const int reps = 1000;
  for (int s = 0; s < reps; ++s) total += double(sample_mask(20, 20, 20, 0.5, 9000 + s).size());
  const double mean = total / reps;
  const double tol = 3.0 * std::sqrt(8000.0 * 0.25 / reps);
  CHECK(std::abs(mean - 4000.0) < tol);
}

TEST_CASE("sample_mask rejects gamma outside (0,1]") {
  CHECK_THROWS_AS(sample_mask(2, 2, 2, 0.0, 1), NumericError);
  CHECK_THROWS_AS(sample_mask(2, 2, 2, 1.5, 1), NumericError);
  CHECK_THROWS_AS(sample_mask(2, 2, 2, -0.1, 1), NumericError);
}

TEST_CASE("synthesize noiseless escape hatches") {
  const Tensor3 x = random_tensor(4, 4, 4, 7, 0.0, 2.0);
  const auto mask = sample_mask(4, 4, 4, 0.6, 11);

  const auto gauss = synthesize(x, mask, GaussianNoise{0.0}, 5);
  const auto lap = synthesize(x, mask, LaplaceNoise{1e-17}, 5);
  for (std::size_t t = 0; t < mask.size(); ++t) {
    const Index3 ix = mask[t];
    CHECK(gauss.values()[t] == x(ix.i, ix.j, ix.k));
    CHECK(lap.values()[t] == x(ix.i, ix.j, ix.k));
  }
}

TEST_CASE("synthesize is deterministic") {
  const Tensor3 x = random_tensor(5, 5, 5, 8, 0.0, 3.0);
  const auto mask = sample_mask(5, 5, 5, 0.5, 21);
  const auto a = synthesize(x, mask, GaussianNoise{0.3}, 77);
  const auto b = synthesize(x, mask, GaussianNoise{0.3}, 77);
  CHECK(a.values() == b.values());
  const auto c = synthesize(x, mask, GaussianNoise{0.3}, 78);
  CHECK(a.values() != c.values());
}

TEST_CASE("poisson synthesis: mean of Poisson(4) over 1e5 draws") {
  const int n = 100;
  Tensor3 x = Tensor3::constant(n, n, 10, 4.0);
  const auto mask = sample_mask(n, n, 10, 1.0, 0);
  const auto obs = synthesize(x, mask, PoissonNoise{}, 31);
  REQUIRE(obs.m() == 100000);
  double mean = 0.0;
  for (double v : obs.values()) {
    mean += v;
    CHECK(v >= 0.0);
    CHECK(v == std::floor(v));
  }
  mean /= double(obs.m());
  CHECK(std::abs(mean - 4.0) < 3.0 * (2.0 / std::sqrt(100000.0)));
}

TEST_CASE("poisson sampler handles large means by splitting") {
  rng::EntryRng r(5, rng::Stream::Generic, 0);
  double mean = 0.0;
  const int reps = 2000;
  for (int t = 0; t < reps; ++t) mean += double(r.poisson(900.0));
  mean /= reps;
  CHECK(std::abs(mean - 900.0) < 4.0 * std::sqrt(900.0 / reps));
}

TEST_CASE("laplace synthesis: variance of Laplace(0, 0.1) over 1e5 draws") {
  const int n = 100;
  Tensor3 x(n, n, 10);  // zero tensor; draws are pure noise
  const auto mask = sample_mask(n, n, 10, 1.0, 0);
  const auto obs = synthesize(x, mask, LaplaceNoise{0.1}, 57);
  double ss = 0.0;
  for (double v : obs.values()) ss += v * v;
  const double var = ss / double(obs.m());
  CHECK(std::abs(var - 0.02) < 0.001);
}

TEST_CASE("poisson synthesis rejects negative means and maps 0 to 0") {
  Tensor3 x(2, 2, 2);
  x(0, 0, 0) = -0.5;
  const auto mask = sample_mask(2, 2, 2, 1.0, 3);
  CHECK_THROWS_AS(synthesize(x, mask, PoissonNoise{}, 1), NumericError);

  const Tensor3 zero(2, 2, 2);
  const auto obs = synthesize(zero, mask, PoissonNoise{}, 1);
  for (double v : obs.values()) CHECK(v == 0.0);
}

TEST_CASE("gaussian nll: zero residual leaves only the constant") {
  const Tensor3 x = random_tensor(5, 2, 1, 9, 0.0, 1.0);
  const auto mask = sample_mask(5, 2, 1, 1.0, 0);
  const auto obs = synthesize(x, mask, GaussianNoise{1.0}, 0);  // sigma=1, but Y=X+noise
  // Build an exact-match observation set instead.
  std::vector<double> vals;
  for (const auto& ix : mask) vals.push_back(x(ix.i, ix.j, ix.k));
  const ObservationSet exact(5, 2, 1, mask, vals, GaussianNoise{1.0}, 1.0);
  CHECK(neg_log_likelihood(x, exact) ==
        doctest::Approx(5.0 * std::log(2.0 * M_PI)).epsilon(1e-13));
  (void)obs;
}

TEST_CASE("laplace nll: zero residual with 2 tau = 1 vanishes") {
  const Tensor3 x = random_tensor(2, 2, 1, 10, 0.0, 1.0);
  const auto mask = sample_mask(2, 2, 1, 1.0, 0);
  std::vector<double> vals;
  for (const auto& ix : mask) vals.push_back(x(ix.i, ix.j, ix.k));
  const ObservationSet exact(2, 2, 1, mask, vals, LaplaceNoise{0.5}, 1.0);
  CHECK(neg_log_likelihood(x, exact) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("poisson nll with all-zero observations is m*x") {
  const int m = 8;
  const Tensor3 x = Tensor3::constant(2, 2, 2, 1.7);
  const auto mask = sample_mask(2, 2, 2, 1.0, 0);
  const ObservationSet obs(2, 2, 2, mask, std::vector<double>(m, 0.0), PoissonNoise{}, 1.0);
  CHECK(neg_log_likelihood(x, obs) == doctest::Approx(m * 1.7).epsilon(1e-13));
}

TEST_CASE("nll is minimized at X = Y for gaussian and laplace") {
  const Tensor3 x = random_tensor(3, 3, 3, 12, 0.0, 2.0);
  const auto mask = sample_mask(3, 3, 3, 0.7, 4);
  std::vector<double> vals;
  for (const auto& ix : mask) vals.push_back(x(ix.i, ix.j, ix.k));
  for (const NoiseModel& noise :
       {NoiseModel{GaussianNoise{0.4}}, NoiseModel{LaplaceNoise{0.4}}}) {
    const ObservationSet obs(3, 3, 3, mask, vals, noise, 0.7);
    const double at_y = neg_log_likelihood(x, obs);
    for (double delta : {-0.3, -0.01, 0.01, 0.3}) {
      Tensor3 pert = x;
      const Index3 ix = mask[mask.size() / 2];
      pert(ix.i, ix.j, ix.k) += delta;
      CHECK(neg_log_likelihood(pert, obs) >= at_y);
    }
  }
}

TEST_CASE("poisson nll is minimized at X = Y when Y > 0") {
  Tensor3 x(2, 2, 1);
  x(0, 0, 0) = 3.0;
  x(1, 0, 0) = 1.0;
  x(0, 1, 0) = 2.0;
  x(1, 1, 0) = 5.0;
  const auto mask = sample_mask(2, 2, 1, 1.0, 0);
  std::vector<double> vals;
  for (const auto& ix : mask) vals.push_back(x(ix.i, ix.j, ix.k));
  const ObservationSet obs(2, 2, 1, mask, vals, PoissonNoise{}, 1.0);
  const double at_y = neg_log_likelihood(x, obs);
  for (double delta : {-0.5, -0.05, 0.05, 0.5}) {
    Tensor3 pert = x;
    pert(0, 0, 0) += delta;
    CHECK(neg_log_likelihood(pert, obs) > at_y);
  }
}

TEST_CASE("appending an observation never decreases the gaussian data-fit gap") {
  const Tensor3 x(2, 2, 2);  // all zero
  std::vector<Index3> idx = {{0, 0, 0}, {0, 1, 0}};
  std::vector<double> vals = {1.0, 2.0};
  const ObservationSet small(2, 2, 2, idx, vals, GaussianNoise{1.0}, 0.25);
  idx.push_back({1, 1, 1});
  vals.push_back(3.0);
  const ObservationSet big(2, 2, 2, idx, vals, GaussianNoise{1.0}, 0.375);
  const double const_small = 2.0 / 2.0 * std::log(2.0 * M_PI);
  const double const_big = 3.0 / 2.0 * std::log(2.0 * M_PI);
  CHECK(neg_log_likelihood(x, big) - const_big >= neg_log_likelihood(x, small) - const_small);
}

TEST_CASE("observation invariants are enforced") {
  std::vector<Index3> unsorted = {{1, 0, 0}, {0, 0, 0}};
  CHECK_THROWS_AS(ObservationSet(2, 2, 2, unsorted, {1.0, 2.0}, GaussianNoise{1.0}, 0.5),
                  ShapeError);
  std::vector<Index3> dup = {{0, 0, 0}, {0, 0, 0}};
  CHECK_THROWS_AS(ObservationSet(2, 2, 2, dup, {1.0, 2.0}, GaussianNoise{1.0}, 0.5), ShapeError);
  std::vector<Index3> oob = {{0, 0, 0}, {2, 0, 0}};
  CHECK_THROWS_AS(ObservationSet(2, 2, 2, oob, {1.0, 2.0}, GaussianNoise{1.0}, 0.5), ShapeError);
  std::vector<Index3> ok = {{0, 0, 0}};
  CHECK_THROWS_AS(ObservationSet(2, 2, 2, ok, {1.5}, PoissonNoise{}, 0.125), NumericError);
  CHECK_THROWS_AS(ObservationSet(2, 2, 2, ok, {-1.0}, PoissonNoise{}, 0.125), NumericError);
}

TEST_CASE("obs file round trip") {
  const Tensor3 x = random_tensor(4, 3, 2, 13, 0.0, 5.0);
  const auto mask = sample_mask(4, 3, 2, 0.8, 6);
  const auto obs = synthesize(x, mask, LaplaceNoise{0.25}, 10);
  const std::string path = "test_roundtrip.obs";
  write_obs(path, obs);
  const ObservationSet back = read_obs(path);
  CHECK(back.n1() == obs.n1());
  CHECK(back.m() == obs.m());
  CHECK(back.indices() == obs.indices());
  CHECK(back.values() == obs.values());
  CHECK(noise_tag(back.noise()) == "laplace");
  CHECK(noise_param(back.noise()) == 0.25);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_obs("missing.obs"), IoError);
}
