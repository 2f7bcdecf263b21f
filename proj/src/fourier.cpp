#include "sntf/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "sntf/errors.hpp"

// FFT strategy: one unit-stride 1-D plan per tube length, executed once per
// tube through per-thread scratch buffers. Tubes are independent, so the loop
// parallelizes with bit-identical results for any thread count, and the same
// plan (hence the same rounding) is used no matter how the tensor is shaped
// or chunked. Plans are cached; the FFTW planner is serialized by a mutex,
// execution is thread-safe.

namespace sntf {
namespace {

struct PlanSet {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan bwd = nullptr;  // complex backward, for the general inverse
  double* real_buf = nullptr;
  fftw_complex* cplx_buf = nullptr;
  fftw_complex* cplx_buf2 = nullptr;
};

std::mutex g_planner_mutex;
std::map<int, PlanSet>& plan_cache() {
  static std::map<int, PlanSet> cache;
  return cache;
}

const PlanSet& plans_for(int n3) {
  std::lock_guard<std::mutex> lock(g_planner_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(n3);
  if (it != cache.end()) return it->second;

  PlanSet ps;
  ps.real_buf = fftw_alloc_real(n3);
  ps.cplx_buf = fftw_alloc_complex(n3);
  ps.cplx_buf2 = fftw_alloc_complex(n3);
  std::fill(ps.real_buf, ps.real_buf + n3, 0.0);
  std::fill(reinterpret_cast<double*>(ps.cplx_buf), reinterpret_cast<double*>(ps.cplx_buf) + 2 * n3,
            0.0);
  ps.r2c = fftw_plan_dft_r2c_1d(n3, ps.real_buf, ps.cplx_buf, FFTW_ESTIMATE);
  ps.c2r = fftw_plan_dft_c2r_1d(n3, ps.cplx_buf, ps.real_buf, FFTW_ESTIMATE);
  ps.bwd = fftw_plan_dft_1d(n3, ps.cplx_buf, ps.cplx_buf2, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!ps.r2c || !ps.c2r || !ps.bwd) throw NumericError("FFTW plan creation failed");
  return cache.emplace(n3, ps).first->second;
}

// Per-thread FFTW-aligned scratch, grown on demand.
struct Scratch {
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_complex* cplx2 = nullptr;
  int capacity = 0;

  void ensure(int n3) {
    if (n3 <= capacity) return;
    release();
    real = fftw_alloc_real(n3);
    cplx = fftw_alloc_complex(n3);
    cplx2 = fftw_alloc_complex(n3);
    capacity = n3;
  }
  void release() {
    if (real) fftw_free(real);
    if (cplx) fftw_free(cplx);
    if (cplx2) fftw_free(cplx2);
    real = nullptr;
    cplx = nullptr;
    cplx2 = nullptr;
    capacity = 0;
  }
  ~Scratch() { release(); }
};

thread_local Scratch t_scratch;

}  // namespace

Spectrum fft_r2c(const Tensor3& a) {
  const int n3 = a.n3();
  const std::ptrdiff_t ntubes = std::ptrdiff_t(a.n1()) * a.n2();
  const int nf = n3 / 2 + 1;
  Spectrum out(a.n1(), a.n2(), n3);
  const PlanSet& ps = plans_for(n3);
  const double* in = a.data();
  std::complex<double>* od = out.data.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < ntubes; ++t) {
    Scratch& sc = t_scratch;
    sc.ensure(n3);
    for (int k = 0; k < n3; ++k) sc.real[k] = in[t + std::size_t(k) * ntubes];
    fftw_execute_dft_r2c(ps.r2c, sc.real, sc.cplx);
    for (int k = 0; k < nf; ++k) {
      od[t + std::size_t(k) * ntubes] = {sc.cplx[k][0], sc.cplx[k][1]};
    }
  }
  return out;
}

Tensor3 fft_c2r(const Spectrum& s) {
  const int n3 = s.n3;
  const std::ptrdiff_t ntubes = std::ptrdiff_t(s.n1) * s.n2;
  const int nf = s.nfaces();
  Tensor3 out(s.n1, s.n2, n3);
  const PlanSet& ps = plans_for(n3);
  const std::complex<double>* in = s.data.data();
  double* od = out.data();
  const double scale = 1.0 / n3;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < ntubes; ++t) {
    Scratch& sc = t_scratch;
    sc.ensure(n3);
    for (int k = 0; k < nf; ++k) {
      const std::complex<double> v = in[t + std::size_t(k) * ntubes];
      sc.cplx[k][0] = v.real();
      sc.cplx[k][1] = v.imag();
    }
    fftw_execute_dft_c2r(ps.c2r, sc.cplx, sc.real);
    for (int k = 0; k < n3; ++k) od[t + std::size_t(k) * ntubes] = sc.real[k] * scale;
  }
  return out;
}

FourierFaces fft_forward(const Tensor3& a) {
  const Spectrum half = fft_r2c(a);
  FourierFaces out(a.n1(), a.n2(), a.n3());
  const int n3 = a.n3();
  const int nf = half.nfaces();
  const std::ptrdiff_t ntubes = std::ptrdiff_t(a.n1()) * a.n2();
  const std::complex<double>* hd = half.data.data();
  std::complex<double>* od = out.data.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < ntubes; ++t) {
    for (int k = 0; k < nf; ++k) od[t + std::size_t(k) * ntubes] = hd[t + std::size_t(k) * ntubes];
    for (int k = nf; k < n3; ++k) {
      od[t + std::size_t(k) * ntubes] = std::conj(hd[t + std::size_t(n3 - k) * ntubes]);
    }
  }
  return out;
}

Tensor3 fft_inverse(const FourierFaces& f) {
  const int n3 = f.n3;
  const std::ptrdiff_t ntubes = std::ptrdiff_t(f.n1) * f.n2;
  Tensor3 out(f.n1, f.n2, n3);
  const PlanSet& ps = plans_for(n3);
  const std::complex<double>* in = f.data.data();
  double* od = out.data();
  const double scale = 1.0 / n3;
  double max_imag = 0.0, max_real = 0.0;
#pragma omp parallel for schedule(static) reduction(max : max_imag, max_real)
  for (std::ptrdiff_t t = 0; t < ntubes; ++t) {
    Scratch& sc = t_scratch;
    sc.ensure(n3);
    for (int k = 0; k < n3; ++k) {
      const std::complex<double> v = in[t + std::size_t(k) * ntubes];
      sc.cplx[k][0] = v.real();
      sc.cplx[k][1] = v.imag();
    }
    fftw_execute_dft(ps.bwd, sc.cplx, sc.cplx2);
    for (int k = 0; k < n3; ++k) {
      const double re = sc.cplx2[k][0] * scale;
      const double im = std::abs(sc.cplx2[k][1] * scale);
      od[t + std::size_t(k) * ntubes] = re;
      if (im > max_imag) max_imag = im;
      const double ar = std::abs(re);
      if (ar > max_real) max_real = ar;
    }
  }
  if (max_imag >= 1e-9 * std::max(1.0, max_real)) {
    throw NumericError("fft_inverse: imaginary residue " + std::to_string(max_imag) +
                       " exceeds 1e-9 of result scale; input faces are not conjugate-symmetric");
  }
  return out;
}

}  // namespace sntf
