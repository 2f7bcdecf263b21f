#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sntf {

/// Threshold below which an entry counts as zero for the l0 norm.
inline constexpr double kL0Epsilon = 1e-12;

/// Dense real third-order tensor.
///
/// Storage is frontal-slice major: entry (i, j, k) lives at
/// data[(k*n1 + i)*n2 + j], i.e. slice k is a contiguous n1 x n2 row-major
/// matrix and the mode-3 tube at (i, j) is strided by n1*n2. All indices are
/// zero-based.
class Tensor3 {
public:
  Tensor3() = default;
  Tensor3(int n1, int n2, int n3);  // zero-filled

  static Tensor3 constant(int n1, int n2, int n3, double value);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int n3() const { return n3_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(int i, int j, int k) const {
    return (std::size_t(k) * n1_ + i) * n2_ + j;
  }

  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }
  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }

  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }
  const double* slice(int k) const { return data_.data() + std::size_t(k) * n1_ * n2_; }
  double* slice(int k) { return data_.data() + std::size_t(k) * n1_ * n2_; }

  bool same_shape(const Tensor3& o) const {
    return n1_ == o.n1_ && n2_ == o.n2_ && n3_ == o.n3_;
  }
  std::string shape_string() const;

private:
  int n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<double> data_;
};

struct TensorNorms {
  double fro = 0.0;
  double linf = 0.0;
  std::size_t l0 = 0;
};

/// Frobenius norm, max-abs entry, and count of entries with |x| > kL0Epsilon.
TensorNorms norms(const Tensor3& a);
double fro_norm(const Tensor3& a);
double linf_norm(const Tensor3& a);
std::size_t l0_norm(const Tensor3& a);

/// Sum of elementwise products; shapes must match.
double inner(const Tensor3& a, const Tensor3& b);

bool all_finite(const Tensor3& a);
/// Throws NumericError naming `label` if a holds a NaN/Inf.
void require_finite(const Tensor3& a, const char* label);

// Elementwise kernels (OpenMP-parallel; each element is written exactly once,
// so results are identical for any thread count).
Tensor3 lincomb(double ca, const Tensor3& a, double cb, const Tensor3& b);
Tensor3 lincomb(double ca, const Tensor3& a, double cb, const Tensor3& b, double cc,
                const Tensor3& c);
Tensor3 scaled(double c, const Tensor3& a);

Tensor3 operator+(const Tensor3& a, const Tensor3& b);
Tensor3 operator-(const Tensor3& a, const Tensor3& b);
Tensor3 operator*(double c, const Tensor3& a);

// "NT3 v1" text format: `nt3 1 <n1> <n2> <n3>` followed by the entries in
// storage order, written with 17 significant digits.
void write_nt3(const std::string& path, const Tensor3& a);
Tensor3 read_nt3(const std::string& path);

}  // namespace sntf
