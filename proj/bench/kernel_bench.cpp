// Timing comparison of the OpenMP kernels against their serial references:
// the FFT-based t-product vs the direct block-circulant oracle, plus thread
// scaling for the t-product, the face-parallel inverse, and the elementwise
// proximal maps.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "sntf/observation.hpp"
#include "sntf/prox.hpp"
#include "sntf/rng.hpp"
#include "sntf/tensor.hpp"
#include "sntf/tprod.hpp"

namespace {

sntf::Tensor3 random_tensor(int n1, int n2, int n3, std::uint64_t seed) {
  sntf::Tensor3 t(n1, n2, n3);
  for (std::size_t e = 0; e < t.size(); ++e) {
    sntf::rng::EntryRng r(seed, sntf::rng::Stream::Generic, e);
    t.data()[e] = 2.0 * r.uniform() - 1.0;
  }
  return t;
}

template <class F>
double time_ms(int reps, F&& fn) {
  // One warm-up rep, then the best of `reps`.
  fn();
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int n = 50, r = 10, reps = 5;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--n" && i + 1 < argc) n = std::atoi(argv[++i]);
    else if (arg == "--r" && i + 1 < argc) r = std::atoi(argv[++i]);
    else if (arg == "--reps" && i + 1 < argc) reps = std::atoi(argv[++i]);
    else {
      std::fprintf(stderr, "usage: %s [--n N] [--r R] [--reps K]\n", argv[0]);
      return 1;
    }
  }

  const sntf::Tensor3 a = random_tensor(n, r, n, 7);
  const sntf::Tensor3 b = random_tensor(r, n, n, 8);
  const int max_threads = omp_get_max_threads();

  std::printf("t-product %dx%dx%d * %dx%dx%d, best of %d\n", n, r, n, r, n, n, reps);
  std::printf("%-28s %10s\n", "kernel", "ms");

  const double oracle_ms = time_ms(reps, [&] { (void)sntf::tprod_oracle(a, b); });
  std::printf("%-28s %10.3f\n", "tprod_oracle (serial ref)", oracle_ms);

  for (int threads = 1; threads <= max_threads; threads *= 2) {
    omp_set_num_threads(threads);
    const double ms = time_ms(reps, [&] { (void)sntf::tprod(a, b); });
    std::printf("tprod (fft, %2d threads)     %10.3f   speedup vs oracle %7.1fx\n", threads, ms,
                oracle_ms / ms);
  }

  // Face-parallel inverse on an r x r x n tensor.
  omp_set_num_threads(max_threads);
  const sntf::Tensor3 g =
      sntf::tprod(b, sntf::ttranspose(b)) + sntf::identity_tensor(r, n);
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    omp_set_num_threads(threads);
    const double ms = time_ms(reps, [&] { (void)sntf::tinverse(g); });
    std::printf("tinverse (%2d threads)       %10.3f\n", threads, ms);
  }

  // Elementwise proximal map over a half-observed cube.
  omp_set_num_threads(max_threads);
  const sntf::Tensor3 x = random_tensor(n, n, n, 9);
  const auto mask = sntf::sample_mask(n, n, n, 0.5, 3);
  const auto obs = sntf::synthesize(x, mask, sntf::GaussianNoise{0.1}, 4);
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    omp_set_num_threads(threads);
    const double ms = time_ms(reps, [&] { (void)sntf::prox_gaussian(x, obs, 0.1); });
    std::printf("prox_gaussian (%2d threads)  %10.3f\n", threads, ms);
  }
  return 0;
}
