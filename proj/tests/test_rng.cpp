#include <doctest.h>

#include <cmath>

#include "dmisac/rng.hpp"

using namespace dmisac;

// Reference values generated with an independent implementation of
// splitmix64 and xoshiro256++ (Blackman & Vigna reference algorithms).
TEST_CASE("xoshiro256++ matches reference sequence") {
  Rng rng(42);
  CHECK(rng.next_u64() == 0xd0764d4f4476689full);
  CHECK(rng.next_u64() == 0x519e4174576f3791ull);
  CHECK(rng.next_u64() == 0xfbe07cfb0c24ed8cull);
  CHECK(rng.next_u64() == 0xb37d9f600cd835b8ull);
  CHECK(rng.next_u64() == 0xcb231c3874846a73ull);

  Rng zero(0);
  CHECK(zero.next_u64() == 0x53175d61490b23dfull);
  CHECK(zero.next_u64() == 0x61da6f3dc380d507ull);
  CHECK(zero.next_u64() == 0x5c0fdf91ec9a7bfcull);
}

TEST_CASE("mix64 and derive_seed match reference values") {
  CHECK(mix64(0) == 0xe220a8397b1dcdafull);
  CHECK(mix64(1) == 0x910a2dec89025cc1ull);
  CHECK(mix64(0xDEADBEEFull) == 0x4adfb90f68c9eb9bull);
  CHECK(derive_seed(42, 1, 0) == 0x7eb3b394ac9efc29ull);
  CHECK(derive_seed(42, 1, 1) == 0xa7ea78c3f81d3ac9ull);
  CHECK(derive_seed(42, 2, 0) == 0x1db2233eb3bcaeb3ull);
  // distinct streams and indices decorrelate
  CHECK(derive_seed(42, 1, 0) != derive_seed(42, 1, 1));
  CHECK(derive_seed(42, 1, 0) != derive_seed(42, 2, 0));
  CHECK(derive_seed(42, 1, 0) != derive_seed(43, 1, 0));
}

TEST_CASE("uniform draws live in [0,1) and match reference") {
  Rng rng(7);
  const double first = rng.uniform();
  CHECK(first == doctest::Approx(0.05536043647833311).epsilon(1e-15));
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal and complex-normal moments") {
  Rng rng(123);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);

  double power = 0.0;
  for (int i = 0; i < n; ++i) power += std::norm(rng.cnormal());
  CHECK(power / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("same seed, same stream") {
  Rng a(987654321), b(987654321);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  constexpr double pi = 3.141592653589793238462643383279502884;
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(pi) == doctest::Approx(pi));
  CHECK(wrap_angle(-pi) == doctest::Approx(pi));  // boundary maps to +pi
  CHECK(wrap_angle(3.0 * pi) == doctest::Approx(pi));
  CHECK(wrap_angle(2.0 * pi) == doctest::Approx(0.0));
  CHECK(wrap_angle(-0.5) == doctest::Approx(-0.5));

  Rng rng(5);
  for (int i = 0; i < 100000; ++i) {
    const double w = wrap_angle(rng.uniform(-1e6, 1e6));
    CHECK(w > -pi);
    CHECK(w <= pi);
  }
}
