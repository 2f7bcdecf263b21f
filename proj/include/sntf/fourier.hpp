#pragma once

#include <complex>
#include <vector>

#include "sntf/tensor.hpp"

namespace sntf {

/// Mode-3 DFT of a third-order tensor: n3 complex faces of size n1 x n2.
/// Faces are stored face-major, each face row-major, i.e. face k entry (i, j)
/// is data[(k*n1 + i)*n2 + j].
///
/// For a real-origin tensor, face k and face (n3 - k) mod n3 are complex
/// conjugates (conjugate symmetry).
struct FourierFaces {
  int n1 = 0, n2 = 0, n3 = 0;
  std::vector<std::complex<double>> data;

  FourierFaces() = default;
  FourierFaces(int n1_, int n2_, int n3_)
      : n1(n1_), n2(n2_), n3(n3_), data(std::size_t(n1_) * n2_ * n3_) {}

  std::size_t index(int i, int j, int k) const {
    return (std::size_t(k) * n1 + i) * n2 + j;
  }
  std::complex<double> at(int i, int j, int k) const { return data[index(i, j, k)]; }
  std::complex<double>& at(int i, int j, int k) { return data[index(i, j, k)]; }
  std::complex<double>* face(int k) { return data.data() + std::size_t(k) * n1 * n2; }
  const std::complex<double>* face(int k) const {
    return data.data() + std::size_t(k) * n1 * n2;
  }
};

/// Packed half-spectrum of a real tensor: faces 0 .. n3/2 only, the remaining
/// faces being determined by conjugate symmetry. This is the representation
/// the fast kernels work in.
struct Spectrum {
  int n1 = 0, n2 = 0, n3 = 0;
  std::vector<std::complex<double>> data;

  Spectrum() = default;
  Spectrum(int n1_, int n2_, int n3_)
      : n1(n1_), n2(n2_), n3(n3_), data(std::size_t(n1_) * n2_ * (n3_ / 2 + 1)) {}

  int nfaces() const { return n3 / 2 + 1; }
  std::complex<double>* face(int k) { return data.data() + std::size_t(k) * n1 * n2; }
  const std::complex<double>* face(int k) const {
    return data.data() + std::size_t(k) * n1 * n2;
  }
};

/// Real-to-complex mode-3 FFT (packed half-spectrum).
Spectrum fft_r2c(const Tensor3& a);

/// Inverse of fft_r2c, including the 1/n3 normalization.
Tensor3 fft_c2r(const Spectrum& s);

/// Full-face forward transform; faces beyond n3/2 are filled by conjugate
/// mirroring, so the conjugate-symmetry invariant holds exactly.
FourierFaces fft_forward(const Tensor3& a);

/// General complex inverse transform. Asserts that the imaginary residue is
/// below 1e-9 relative to the result scale (a mirrored-face error shows up
/// here), then discards it.
Tensor3 fft_inverse(const FourierFaces& f);

}  // namespace sntf
