#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <omp.h>

#include <complex>
#include <cstdio>

#include "sntf/errors.hpp"
#include "sntf/fourier.hpp"
#include "sntf/rng.hpp"
#include "sntf/tensor.hpp"
#include "sntf/tprod.hpp"
#include "test_support.hpp"

using namespace sntf;
using testsupport::max_abs_diff;
using testsupport::random_tensor;

TEST_CASE("philox matches the published known-answer vectors") {
  auto out = rng::Philox4x32::block({0, 0, 0, 0}, 0, 0);
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);

  out = rng::Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               0xffffffffu, 0xffffffffu);
  CHECK(out[0] == 0x408f276du);
  CHECK(out[1] == 0x41c83b0eu);
  CHECK(out[2] == 0xa20bc7c6u);
  CHECK(out[3] == 0x6d5451fdu);

  out = rng::Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                               0xa4093822u, 0x299f31d0u);
  CHECK(out[0] == 0xd16cfe09u);
  CHECK(out[1] == 0x94fdccebu);
  CHECK(out[2] == 0x5001e420u);
  CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("storage layout is frontal-slice major") {
  Tensor3 t(2, 3, 2);
  t(1, 2, 1) = 5.0;
  CHECK(t.data()[(1 * 2 + 1) * 3 + 2] == 5.0);
  CHECK(t.index(0, 0, 1) == 6);
}

TEST_CASE("tube product 1x1x2: (1,2)*(3,4) = (11,10)") {
  // Circ([1;2]) * [3;4] = [1 2; 2 1][3;4] = [11; 10], frozen from the direct
  // block-circulant multiplication.
  Tensor3 x(1, 1, 2), y(1, 1, 2);
  x(0, 0, 0) = 1;
  x(0, 0, 1) = 2;
  y(0, 0, 0) = 3;
  y(0, 0, 1) = 4;

  const Tensor3 via_oracle = tprod_oracle(x, y);
  CHECK(via_oracle(0, 0, 0) == doctest::Approx(11.0).epsilon(1e-14));
  CHECK(via_oracle(0, 0, 1) == doctest::Approx(10.0).epsilon(1e-14));

  const Tensor3 via_fft = tprod(x, y);
  CHECK(via_fft(0, 0, 0) == doctest::Approx(11.0).epsilon(1e-12));
  CHECK(via_fft(0, 0, 1) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("1x1x1 t-product degenerates to scalar multiply") {
  Tensor3 x(1, 1, 1), y(1, 1, 1);
  x(0, 0, 0) = -2.5;
  y(0, 0, 0) = 4.0;
  CHECK(tprod_oracle(x, y)(0, 0, 0) == doctest::Approx(-10.0));
  CHECK(tprod(x, y)(0, 0, 0) == doctest::Approx(-10.0));
}

TEST_CASE("identity tensor layout and unit property") {
  const Tensor3 id = identity_tensor(2, 2);
  CHECK(id(0, 0, 0) == 1.0);
  CHECK(id(1, 1, 0) == 1.0);
  CHECK(id(0, 1, 0) == 0.0);
  CHECK(id(1, 0, 0) == 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(id(i, j, 1) == 0.0);

  CHECK(identity_tensor(1, 1)(0, 0, 0) == 1.0);

  const Tensor3 a = random_tensor(3, 4, 5, 11);
  CHECK(max_abs_diff(tprod(identity_tensor(3, 5), a), a) < 1e-12);
  CHECK(max_abs_diff(tprod(a, identity_tensor(4, 5)), a) < 1e-12);
}

TEST_CASE("product with the zero tensor is zero") {
  const Tensor3 a = random_tensor(2, 3, 4, 12);
  const Tensor3 z(3, 2, 4);
  CHECK(fro_norm(tprod(a, z)) == 0.0);
  CHECK(fro_norm(tprod_oracle(a, z)) < 1e-15);
}

TEST_CASE("fft path agrees with the oracle on random shapes") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    rng::EntryRng dims(seed, rng::Stream::Generic, 9999);
    const int n1 = 1 + int(dims.uniform() * 6);
    const int r = 1 + int(dims.uniform() * 6);
    const int n2 = 1 + int(dims.uniform() * 6);
    const int n3 = 1 + int(dims.uniform() * 6);
    const Tensor3 a = random_tensor(n1, r, n3, 1000 + seed);
    const Tensor3 b = random_tensor(r, n2, n3, 2000 + seed);
    const Tensor3 fast = tprod(a, b);
    const Tensor3 slow = tprod_oracle(a, b);
    const double scale = std::max(1.0, linf_norm(slow));
    CHECK(max_abs_diff(fast, slow) < 1e-10 * scale);
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("tprod shape mismatch names both operand shapes") {
  const Tensor3 a(2, 3, 4), b(2, 5, 4), c(3, 5, 5);
  CHECK_THROWS_WITH_AS(tprod(a, b), doctest::Contains("2x3x4"), ShapeError);
  CHECK_THROWS_AS(tprod(a, c), ShapeError);
  CHECK_THROWS_AS(tprod_oracle(a, b), ShapeError);
}

TEST_CASE("ttranspose reverses trailing slices") {
  Tensor3 t(1, 1, 3);
  t(0, 0, 0) = 1;
  t(0, 0, 1) = 2;
  t(0, 0, 2) = 3;
  const Tensor3 tt = ttranspose(t);
  CHECK(tt(0, 0, 0) == 1.0);
  CHECK(tt(0, 0, 1) == 3.0);
  CHECK(tt(0, 0, 2) == 2.0);
}

TEST_CASE("ttranspose is an involution") {
  const Tensor3 a = random_tensor(3, 5, 4, 21);
  CHECK(max_abs_diff(ttranspose(ttranspose(a)), a) == 0.0);
}

TEST_CASE("transpose anti-homomorphism via the oracle") {
  const Tensor3 a = random_tensor(3, 2, 4, 22);
  const Tensor3 b = random_tensor(2, 5, 4, 23);
  const Tensor3 lhs = ttranspose(tprod_oracle(a, b));
  const Tensor3 rhs = tprod_oracle(ttranspose(b), ttranspose(a));
  CHECK(max_abs_diff(lhs, rhs) < 1e-10);
}

TEST_CASE("t-product is associative") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    rng::EntryRng dims(seed, rng::Stream::Generic, 777);
    const int n1 = 1 + int(dims.uniform() * 5);
    const int n2 = 1 + int(dims.uniform() * 5);
    const int n3 = 1 + int(dims.uniform() * 5);
    const int n4 = 1 + int(dims.uniform() * 5);
    const int nt = 1 + int(dims.uniform() * 5);
    const Tensor3 a = random_tensor(n1, n2, nt, 3000 + seed);
    const Tensor3 b = random_tensor(n2, n3, nt, 4000 + seed);
    const Tensor3 c = random_tensor(n3, n4, nt, 5000 + seed);
    CHECK(max_abs_diff(tprod(tprod(a, b), c), tprod(a, tprod(b, c))) < 1e-9);
  }
}

TEST_CASE("tinverse of the identity and of scalar multiples") {
  const Tensor3 id = identity_tensor(3, 4);
  CHECK(max_abs_diff(tinverse(id), id) < 1e-12);

  const Tensor3 half = tinverse(2.0 * id);
  CHECK(max_abs_diff(half, 0.5 * id) < 1e-12);
}

TEST_CASE("tinverse round trip through the oracle") {
  const Tensor3 b = random_tensor(2, 3, 3, 31);
  const Tensor3 g = tprod_oracle(b, ttranspose(b)) + identity_tensor(2, 3);
  const Tensor3 gi = tinverse(g);
  const Tensor3 id = identity_tensor(2, 3);
  CHECK(max_abs_diff(tprod_oracle(g, gi), id) < 1e-8);
  CHECK(max_abs_diff(tprod_oracle(gi, g), id) < 1e-8);
}

TEST_CASE("tinverse reports the singular face") {
  // Slice sum equal across slices makes the zero-frequency face singular.
  Tensor3 t(2, 2, 2);
  t(0, 0, 0) = 1;
  t(0, 1, 0) = 1;
  t(1, 0, 0) = 1;
  t(1, 1, 0) = 1;
  try {
    (void)tinverse(t);
    FAIL("expected SingularFaceError");
  } catch (const SingularFaceError& e) {
    CHECK(e.face() == 0);
    CHECK(std::string(e.what()).find("face 0") != std::string::npos);
  }
  CHECK_THROWS_AS(tinverse(Tensor3(2, 3, 2)), ShapeError);
}

TEST_CASE("norms and inner product") {
  const Tensor3 z(2, 2, 2);
  const TensorNorms nz = norms(z);
  CHECK(nz.fro == 0.0);
  CHECK(nz.linf == 0.0);
  CHECK(nz.l0 == 0);

  Tensor3 t(1, 1, 2);
  t(0, 0, 0) = 3;
  t(0, 0, 1) = 4;
  const TensorNorms nt = norms(t);
  CHECK(nt.fro == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(nt.linf == 4.0);
  CHECK(nt.l0 == 2);

  const Tensor3 a = random_tensor(3, 4, 5, 41);
  CHECK(inner(a, a) == doctest::Approx(fro_norm(a) * fro_norm(a)).epsilon(1e-12));
  CHECK_THROWS_AS(inner(a, Tensor3(3, 4, 4)), ShapeError);
}

TEST_CASE("fourier faces of a real tensor are conjugate symmetric") {
  const Tensor3 a = random_tensor(3, 4, 6, 51);
  const FourierFaces f = fft_forward(a);
  for (int k = 1; k < f.n3; ++k) {
    for (int i = 0; i < f.n1; ++i) {
      for (int j = 0; j < f.n2; ++j) {
        const std::complex<double> lhs = f.at(i, j, k);
        const std::complex<double> rhs = std::conj(f.at(i, j, f.n3 - k));
        CHECK(std::abs(lhs - rhs) < 1e-12);
      }
    }
  }
  // Round trip back to the spatial domain.
  CHECK(max_abs_diff(fft_inverse(f), a) < 1e-12);
}

TEST_CASE("fft_inverse flags non-conjugate-symmetric faces") {
  const Tensor3 a = random_tensor(2, 2, 4, 52);
  FourierFaces f = fft_forward(a);
  f.at(0, 0, 1) += std::complex<double>(0.5, 0.5);  // break the mirror
  CHECK_THROWS_AS((void)fft_inverse(f), NumericError);
}

TEST_CASE("nt3 round trip preserves every bit") {
  const Tensor3 a = random_tensor(3, 2, 4, 61);
  const std::string path = "test_roundtrip.nt3";
  write_nt3(path, a);
  const Tensor3 b = read_nt3(path);
  REQUIRE(b.same_shape(a));
  CHECK(max_abs_diff(a, b) == 0.0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_nt3("does_not_exist.nt3"), IoError);
}

TEST_CASE("tprod is bit-identical across thread counts") {
  const Tensor3 a = random_tensor(6, 5, 7, 71);
  const Tensor3 b = random_tensor(5, 4, 7, 72);
  const int old = omp_get_max_threads();
  omp_set_num_threads(1);
  const Tensor3 c1 = tprod(a, b);
  omp_set_num_threads(old > 1 ? old : 4);
  const Tensor3 cn = tprod(a, b);
  omp_set_num_threads(old);
  CHECK(max_abs_diff(c1, cn) == 0.0);
}
