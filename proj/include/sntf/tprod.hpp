#pragma once

#include "sntf/fourier.hpp"
#include "sntf/tensor.hpp"

namespace sntf {

/// Tensor-tensor product a (n1 x r x n3) * b (r x n2 x n3) -> n1 x n2 x n3:
/// the product of the block-circulant expansion of a with the unfolding of b.
/// Computed via mode-3 FFT and one complex matrix product per Fourier face
/// (faces above n3/2 follow from conjugate symmetry). OpenMP-parallel across
/// faces; bit-identical for any thread count.
Tensor3 tprod(const Tensor3& a, const Tensor3& b);

/// Serial reference implementation of tprod: materializes the block-circulant
/// structure slice by slice, O(n3^2 * n1 * r * n2). Kept for testing and
/// benchmarking against the FFT path.
Tensor3 tprod_oracle(const Tensor3& a, const Tensor3& b);

/// Tensor transpose: transpose every frontal slice, then reverse the order of
/// slices 2..n3.
Tensor3 ttranspose(const Tensor3& a);

/// n x n x n3 tensor whose first frontal slice is the identity matrix and
/// whose remaining slices are zero; the unit of tprod.
Tensor3 identity_tensor(int n, int n3);

/// Inverse under tprod, computed by per-face inversion in the Fourier domain.
/// Requires every face to be invertible (smallest singular value greater than
/// 1e-12 of the largest); otherwise throws SingularFaceError naming the face.
Tensor3 tinverse(const Tensor3& a);

/// Relative tolerance for the tinverse face-singularity test.
inline constexpr double kSingularRelTol = 1e-12;

}  // namespace sntf
