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

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace cartan {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct NotUnitary : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense square complex matrix, row-major.
template <std::size_t N>
struct CMat {
  std::array<cplx, N * N> e{};

  static constexpr std::size_t dim = N;

  cplx& operator()(std::size_t r, std::size_t c) { return e[r * N + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return e[r * N + c];
  }

  static CMat identity() {
    CMat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  friend CMat operator*(const CMat& a, const CMat& b) {
    CMat r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }
  friend CMat operator+(CMat a, const CMat& b) {
    for (std::size_t i = 0; i < N * N; ++i) a.e[i] += b.e[i];
    return a;
  }
  friend CMat operator-(CMat a, const CMat& b) {
    for (std::size_t i = 0; i < N * N; ++i) a.e[i] -= b.e[i];
    return a;
  }
  friend CMat operator*(cplx s, CMat a) {
    for (auto& x : a.e) x *= s;
    return a;
  }
  friend CMat operator*(CMat a, cplx s) { return s * a; }
};

using C2 = CMat<2>;
using C4 = CMat<4>;
using R4 = std::array<double, 16>;

template <std::size_t N>
CMat<N> adjoint(const CMat<N>& a) {
  CMat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj(a(j, i));
  return r;
}

template <std::size_t N>
CMat<N> transpose(const CMat<N>& a) {
  CMat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = a(j, i);
  return r;
}

template <std::size_t N>
cplx trace(const CMat<N>& a) {
  cplx t{};
  for (std::size_t i = 0; i < N; ++i) t += a(i, i);
  return t;
}

/// Largest absolute entry of a - b.
template <std::size_t N>
double max_abs_diff(const CMat<N>& a, const CMat<N>& b) {
  double m = 0;
  for (std::size_t i = 0; i < N * N; ++i) m = std::max(m, std::abs(a.e[i] - b.e[i]));
  return m;
}

/// ||A A^dagger - I||_inf (entrywise max).
template <std::size_t N>
double unitarity_error(const CMat<N>& a) {
  return max_abs_diff(a * adjoint(a), CMat<N>::identity());
}

C4 kron(const C2& a, const C2& b);

cplx determinant(const C2& a);
cplx determinant(const C4& a);

/// Scales A into SU(N); returns (A', phase) with A = phase * A'.
/// Throws NotUnitary when ||A A^dagger - I|| exceeds tol.
std::pair<C2, cplx> su_normalize(const C2& a, double tol = 1e-8);
std::pair<C4, cplx> su_normalize(const C4& a, double tol = 1e-8);

/// min over unit phases phi of ||A - phi B||_F.
double distance_up_to_phase(const C2& a, const C2& b);
double distance_up_to_phase(const C4& a, const C4& b);

enum class Axis { X = 0, Y = 1, Z = 2 };

const C2& pauli(Axis a);

/// exp(i beta P) for a Pauli P.
C2 rotation_1q(Axis axis, double beta);
/// exp(i beta P (x) P).
C4 rotation_2q(Axis axis, double beta);

struct EigSym4 {
  std::array<double, 4> values;
  R4 vectors;  // columns are eigenvectors
};

/// Cyclic Jacobi on a real symmetric 4x4 matrix (row-major).
EigSym4 eig_sym4(const R4& a);

namespace gates {
const C2& I2();
const C2& X();
const C2& Y();
const C2& Z();
const C2& S();
const C2& H();
const C4& I4();
const C4& CX();
const C4& SWAP();
/// Magic basis.
const C4& M();
}  // namespace gates

/// Inverse of kron for a 4x4 that is (up to phase) a tensor product.
/// Both factors are returned in SU(2); the remaining phase goes to `phase`.
struct KronFactors {
  C2 a, b;
  cplx phase;
};
KronFactors split_kron(const C4& m);

/// ZYZ Euler angles (alpha, beta, gamma) with u ~ Rz(alpha) Ry(beta) Rz(gamma)
/// in the exp(i beta P) convention, up to global phase.
std::array<double, 3> zyz_angles(const C2& u);
C2 from_zyz(const std::array<double, 3>& a);

}  // namespace cartan
