// Copyright 2026 The cartan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>

#include "cartan/matrix.hpp"
#include "support.hpp"

using namespace cartan;
using cartan::testing::Rng;

namespace {

const cplx kI{0, 1};

C4 diag4(cplx a, cplx b, cplx c, cplx d) {
  C4 m;
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  m(3, 3) = d;
  return m;
}

}  // namespace

TEST_CASE("products of fixed gates") {
  CHECK(max_abs_diff(gates::I4() * gates::I4(), gates::I4()) == 0.0);
  CHECK(max_abs_diff(gates::CX() * gates::CX(), gates::I4()) < 1e-15);
  const C4 lhs = kron(gates::X(), gates::I2()) * kron(gates::Z(), gates::I2());
  CHECK(max_abs_diff(lhs, kron(gates::X() * gates::Z(), gates::I2())) < 1e-15);
}

TEST_CASE("kron puts the first factor on the most significant qubit") {
  CHECK(max_abs_diff(kron(gates::I2(), gates::I2()), gates::I4()) == 0.0);
  CHECK(max_abs_diff(kron(gates::Z(), gates::Z()), diag4(1, -1, -1, 1)) == 0.0);
  const C4 xi = kron(gates::X(), gates::I2());
  CHECK(std::abs(xi(0, 2) - 1.0) < 1e-15);
  CHECK(std::abs(xi(1, 3) - 1.0) < 1e-15);
}

TEST_CASE("CX is controlled on qubit 0") {
  const C4& cx = gates::CX();
  CHECK(std::abs(cx(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(cx(1, 1) - 1.0) < 1e-15);
  CHECK(std::abs(cx(2, 3) - 1.0) < 1e-15);
  CHECK(std::abs(cx(3, 2) - 1.0) < 1e-15);
}

TEST_CASE("su_normalize") {
  auto [i4, ph] = su_normalize(gates::I4());
  CHECK(max_abs_diff(i4, gates::I4()) < 1e-15);
  CHECK(std::abs(ph - 1.0) < 1e-15);

  auto [cx, phase] = su_normalize(gates::CX());
  CHECK(std::abs(determinant(cx) - 1.0) < 1e-12);
  CHECK(max_abs_diff(phase * cx, gates::CX()) < 1e-12);

  C4 bad = gates::I4();
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(su_normalize(bad), NotUnitary);

  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const C2 u = testing::haar<2>(rng);
    auto [v, p] = su_normalize(u);
    CHECK(std::abs(determinant(v) - 1.0) < 1e-12);
    CHECK(max_abs_diff(p * v, u) < 1e-12);
  }
}

TEST_CASE("distance_up_to_phase") {
  CHECK(distance_up_to_phase(gates::CX(), gates::CX()) < 1e-15);
  CHECK(distance_up_to_phase(gates::CX(), kI * gates::CX()) < 1e-12);
  CHECK(distance_up_to_phase(gates::I4(), gates::SWAP()) == doctest::Approx(2.0).epsilon(1e-12));

  SUBCASE("pseudo-metric axioms on random unitaries") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
      const C4 a = testing::haar<4>(rng), b = testing::haar<4>(rng), c = testing::haar<4>(rng);
      const double ab = distance_up_to_phase(a, b);
      CHECK(ab >= 0.0);
      CHECK(std::abs(ab - distance_up_to_phase(b, a)) < 1e-12);
      CHECK(ab <= distance_up_to_phase(a, c) + distance_up_to_phase(c, b) + 1e-12);
      const cplx ph = std::polar(1.0, testing::uniform(rng, -kPi, kPi));
      CHECK(std::abs(distance_up_to_phase(a, ph * b) - ab) < 1e-12);
      // Closed form agrees with the direct evaluation.
      const double closed = std::sqrt(std::max(0.0, 8.0 - 2.0 * std::abs(trace(adjoint(a) * b))));
      CHECK(std::abs(closed - ab) < 1e-6);
    }
  }

  SUBCASE("small perturbations give small distances") {
    const C4 near = rotation_2q(Axis::Z, 1e-9) * gates::CX();
    const double d = distance_up_to_phase(near, gates::CX());
    CHECK(d > 0.0);
    CHECK(d < 1e-8);
  }
}

TEST_CASE("rotations") {
  CHECK(max_abs_diff(rotation_1q(Axis::Z, 0.0), gates::I2()) < 1e-15);
  CHECK(max_abs_diff(rotation_1q(Axis::X, kPi / 2), kI * gates::X()) < 1e-15);
  const C4 xx = rotation_2q(Axis::X, kPi / 4);
  const C4 expected =
      (1.0 / std::sqrt(2.0)) * (gates::I4() + kI * kron(gates::X(), gates::X()));
  CHECK(max_abs_diff(xx, expected) < 1e-15);

  SUBCASE("periodicity and additivity") {
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
      const double a = testing::uniform(rng, -3, 3), b = testing::uniform(rng, -3, 3);
      for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
        CHECK(max_abs_diff(rotation_1q(ax, a + 2 * kPi), rotation_1q(ax, a)) < 1e-12);
        CHECK(max_abs_diff(rotation_1q(ax, a + kPi), -1.0 * rotation_1q(ax, a)) < 1e-12);
        CHECK(max_abs_diff(rotation_2q(ax, a) * rotation_2q(ax, b), rotation_2q(ax, a + b)) <
              1e-12);
        CHECK(unitarity_error(rotation_2q(ax, a)) < 1e-14);
      }
    }
  }
}

TEST_CASE("eig_sym4") {
  SUBCASE("diagonal input") {
    R4 a{};
    a[0] = 1;
    a[5] = 2;
    a[10] = 3;
    a[15] = 4;
    const EigSym4 e = eig_sym4(a);
    std::array<double, 4> v = e.values;
    std::sort(v.begin(), v.end());
    for (int i = 0; i < 4; ++i) CHECK(v[i] == doctest::Approx(i + 1).epsilon(1e-14));
    for (double q : e.vectors) CHECK((std::abs(q) < 1e-14 || std::abs(std::abs(q) - 1) < 1e-14));
  }

  auto reconstruction = [](const R4& a, const EigSym4& e) {
    double err = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0, o = 0;
        for (int k = 0; k < 4; ++k) {
          s += e.vectors[i * 4 + k] * e.values[k] * e.vectors[j * 4 + k];
          o += e.vectors[k * 4 + i] * e.vectors[k * 4 + j];
        }
        err = std::max({err, std::abs(s - a[i * 4 + j]), std::abs(o - (i == j ? 1.0 : 0.0))});
      }
    return err;
  };

  SUBCASE("degenerate spectrum") {
    R4 a{};
    a[0] = 1;
    a[5] = 1;
    a[10] = 2;
    a[15] = 2;
    CHECK(reconstruction(a, eig_sym4(a)) < 1e-9);
  }

  SUBCASE("random symmetric matrices") {
    Rng rng(17);
    for (int t = 0; t < 200; ++t) {
      R4 a{};
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) a[i * 4 + j] = a[j * 4 + i] = testing::uniform(rng, -1, 1);
      CHECK(reconstruction(a, eig_sym4(a)) < 1e-12);
    }
  }
}

TEST_CASE("split_kron and zyz") {
  Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    const C2 a = testing::random_su2(rng), b = testing::random_su2(rng);
    const cplx ph = std::polar(1.0, testing::uniform(rng, -kPi, kPi));
    const KronFactors f = split_kron(ph * kron(a, b));
    CHECK(max_abs_diff(f.phase * kron(f.a, f.b), ph * kron(a, b)) < 1e-12);
    CHECK(distance_up_to_phase(from_zyz(zyz_angles(a)), a) < 1e-12);
  }
  // Gimbal-lock inputs.
  for (const C2& u : {gates::I2(), gates::Z(), gates::X(), gates::H(), gates::S()})
    CHECK(distance_up_to_phase(from_zyz(zyz_angles(u)), u) < 1e-12);
}

TEST_CASE("magic basis is unitary and maps locals to real orthogonals") {
  const C4& m = gates::M();
  CHECK(unitarity_error(m) < 1e-15);
  Rng rng(29);
  const C4 l = testing::random_local(rng).matrix();
  const C4 o = adjoint(m) * l * m;
  for (const cplx& v : o.e) CHECK(std::abs(v.imag()) < 1e-12);
}
