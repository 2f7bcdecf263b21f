#include "sntf/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sntf/errors.hpp"

namespace sntf {

Tensor3::Tensor3(int n1, int n2, int n3) : n1_(n1), n2_(n2), n3_(n3) {
  if (n1 < 1 || n2 < 1 || n3 < 1) {
    throw ShapeError("Tensor3 dimensions must be positive, got " + shape_string());
  }
  data_.assign(std::size_t(n1) * n2 * n3, 0.0);
}

Tensor3 Tensor3::constant(int n1, int n2, int n3, double value) {
  Tensor3 t(n1, n2, n3);
  std::fill(t.data_.begin(), t.data_.end(), value);
  return t;
}

std::string Tensor3::shape_string() const {
  std::ostringstream os;
  os << n1_ << "x" << n2_ << "x" << n3_;
  return os.str();
}

// Reductions are kept serial: the solver's determinism contract requires
// a fixed summation order.
TensorNorms norms(const Tensor3& a) {
  TensorNorms r;
  double ss = 0.0;
  const double* p = a.data();
  const std::size_t n = a.size();
  for (std::size_t t = 0; t < n; ++t) {
    const double v = p[t];
    ss += v * v;
    const double av = std::abs(v);
    if (av > r.linf) r.linf = av;
    if (av > kL0Epsilon) ++r.l0;
  }
  r.fro = std::sqrt(ss);
  return r;
}

double fro_norm(const Tensor3& a) {
  double ss = 0.0;
  const double* p = a.data();
  for (std::size_t t = 0, n = a.size(); t < n; ++t) ss += p[t] * p[t];
  return std::sqrt(ss);
}

double linf_norm(const Tensor3& a) { return norms(a).linf; }

std::size_t l0_norm(const Tensor3& a) { return norms(a).l0; }

double inner(const Tensor3& a, const Tensor3& b) {
  if (!a.same_shape(b)) {
    throw ShapeError("inner: shape mismatch " + a.shape_string() + " vs " + b.shape_string());
  }
  double s = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t t = 0, n = a.size(); t < n; ++t) s += pa[t] * pb[t];
  return s;
}

bool all_finite(const Tensor3& a) {
  const double* p = a.data();
  for (std::size_t t = 0, n = a.size(); t < n; ++t) {
    if (!std::isfinite(p[t])) return false;
  }
  return true;
}

void require_finite(const Tensor3& a, const char* label) {
  if (!all_finite(a)) {
    throw NumericError(std::string("non-finite value in ") + label);
  }
}

Tensor3 lincomb(double ca, const Tensor3& a, double cb, const Tensor3& b) {
  if (!a.same_shape(b)) {
    throw ShapeError("lincomb: shape mismatch " + a.shape_string() + " vs " + b.shape_string());
  }
  Tensor3 out(a.n1(), a.n2(), a.n3());
  double* po = out.data();
  const double* pa = a.data();
  const double* pb = b.data();
  const std::ptrdiff_t n = std::ptrdiff_t(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) po[t] = ca * pa[t] + cb * pb[t];
  return out;
}

Tensor3 lincomb(double ca, const Tensor3& a, double cb, const Tensor3& b, double cc,
                const Tensor3& c) {
  if (!a.same_shape(b) || !a.same_shape(c)) {
    throw ShapeError("lincomb: shape mismatch " + a.shape_string() + " vs " + b.shape_string() +
                     " vs " + c.shape_string());
  }
  Tensor3 out(a.n1(), a.n2(), a.n3());
  double* po = out.data();
  const double* pa = a.data();
  const double* pb = b.data();
  const double* pc = c.data();
  const std::ptrdiff_t n = std::ptrdiff_t(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) po[t] = ca * pa[t] + cb * pb[t] + cc * pc[t];
  return out;
}

Tensor3 scaled(double c, const Tensor3& a) {
  Tensor3 out(a.n1(), a.n2(), a.n3());
  double* po = out.data();
  const double* pa = a.data();
  const std::ptrdiff_t n = std::ptrdiff_t(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) po[t] = c * pa[t];
  return out;
}

Tensor3 operator+(const Tensor3& a, const Tensor3& b) { return lincomb(1.0, a, 1.0, b); }
Tensor3 operator-(const Tensor3& a, const Tensor3& b) { return lincomb(1.0, a, -1.0, b); }
Tensor3 operator*(double c, const Tensor3& a) { return scaled(c, a); }

void write_nt3(const std::string& path, const Tensor3& a) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "nt3 1 " << a.n1() << " " << a.n2() << " " << a.n3() << "\n";
  char buf[32];
  const double* p = a.data();
  for (std::size_t t = 0, n = a.size(); t < n; ++t) {
    std::snprintf(buf, sizeof buf, "%.17g", p[t]);
    os << buf << ((t + 1) % 8 == 0 ? '\n' : ' ');
  }
  os << "\n";
  if (!os) throw IoError("write failed: " + path);
}

Tensor3 read_nt3(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  std::string magic;
  int version = 0, n1 = 0, n2 = 0, n3 = 0;
  is >> magic >> version >> n1 >> n2 >> n3;
  if (!is || magic != "nt3" || version != 1) {
    throw IoError("not an NT3 v1 file: " + path);
  }
  if (n1 < 1 || n2 < 1 || n3 < 1) throw IoError("invalid NT3 dimensions in " + path);
  Tensor3 a(n1, n2, n3);
  double* p = a.data();
  for (std::size_t t = 0, n = a.size(); t < n; ++t) {
    if (!(is >> p[t])) throw IoError("truncated NT3 payload in " + path);
  }
  require_finite(a, path.c_str());
  return a;
}

}  // namespace sntf
