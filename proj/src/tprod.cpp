#include "sntf/tprod.hpp"

#include <Eigen/Dense>

#include <limits>
#include <string>

#include "sntf/errors.hpp"

namespace sntf {
namespace {

using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<CMat>;
using CConstMap = Eigen::Map<const CMat>;

}  // namespace

Tensor3 tprod(const Tensor3& a, const Tensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    throw ShapeError("tprod: incompatible shapes " + a.shape_string() + " * " + b.shape_string());
  }
  const Spectrum fa = fft_r2c(a);
  const Spectrum fb = fft_r2c(b);
  Spectrum fc(a.n1(), b.n2(), a.n3());
  const int nf = fc.nfaces();
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nf; ++k) {
    CConstMap ak(fa.face(k), a.n1(), a.n2());
    CConstMap bk(fb.face(k), b.n1(), b.n2());
    CMap ck(fc.face(k), a.n1(), b.n2());
    ck.noalias() = ak * bk;
  }
  return fft_c2r(fc);
}

Tensor3 tprod_oracle(const Tensor3& a, const Tensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    throw ShapeError("tprod_oracle: incompatible shapes " + a.shape_string() + " * " +
                     b.shape_string());
  }
  const int n1 = a.n1(), r = a.n2(), n2 = b.n2(), n3 = a.n3();
  Tensor3 c(n1, n2, n3);
  // Block row k of Circ(Unfold(a)) holds slice (k - kp mod n3) of a at block
  // column kp.
  for (int k = 0; k < n3; ++k) {
    for (int kp = 0; kp < n3; ++kp) {
      const int ka = (k - kp + n3) % n3;
      const double* as = a.slice(ka);
      const double* bs = b.slice(kp);
      double* cs = c.slice(k);
      for (int i = 0; i < n1; ++i) {
        for (int l = 0; l < r; ++l) {
          const double av = as[std::size_t(i) * r + l];
          if (av == 0.0) continue;
          const double* brow = bs + std::size_t(l) * n2;
          double* crow = cs + std::size_t(i) * n2;
          for (int j = 0; j < n2; ++j) crow[j] += av * brow[j];
        }
      }
    }
  }
  return c;
}

Tensor3 ttranspose(const Tensor3& a) {
  const int n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  Tensor3 out(n2, n1, n3);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n3; ++k) {
    const int src = (k == 0) ? 0 : n3 - k;
    const double* as = a.slice(src);
    double* os = out.slice(k);
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j) os[std::size_t(j) * n1 + i] = as[std::size_t(i) * n2 + j];
    }
  }
  return out;
}

Tensor3 identity_tensor(int n, int n3) {
  Tensor3 out(n, n, n3);
  for (int i = 0; i < n; ++i) out(i, i, 0) = 1.0;
  return out;
}

Tensor3 tinverse(const Tensor3& a) {
  if (a.n1() != a.n2()) {
    throw ShapeError("tinverse: tensor must be square, got " + a.shape_string());
  }
  const int n = a.n1(), n3 = a.n3();
  const Spectrum fa = fft_r2c(a);
  Spectrum fi(n, n, n3);
  const int nf = fa.nfaces();

  // Face checks run in parallel; the first offending face (lowest index) is
  // reported.
  int bad_face = -1;
  double bad_cond = 0.0;
#pragma omp parallel for schedule(static)
  for (int k = 0; k < nf; ++k) {
    CConstMap ak(fa.face(k), n, n);
    Eigen::JacobiSVD<CMat> svd(ak, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(n - 1);
    if (!(smin > kSingularRelTol * smax)) {
#pragma omp critical
      {
        if (bad_face < 0 || k < bad_face) {
          bad_face = k;
          bad_cond = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
        }
      }
    } else {
      CMap ik(fi.face(k), n, n);
      ik.noalias() = svd.matrixV() * svd.singularValues().cwiseInverse().asDiagonal() *
                     svd.matrixU().adjoint();
    }
  }
  if (bad_face >= 0) {
    throw SingularFaceError(bad_face, bad_cond,
                            "tinverse: Fourier face " + std::to_string(bad_face) +
                                " is numerically singular (condition estimate " +
                                std::to_string(bad_cond) + ")");
  }
  return fft_c2r(fi);
}

}  // namespace sntf
