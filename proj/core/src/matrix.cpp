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

#include "cartan/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace cartan {

C4 kron(const C2& a, const C2& b) {
  C4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

cplx determinant(const C2& a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }

cplx determinant(const C4& a) {
  // Gaussian elimination with partial pivoting.
  C4 m = a;
  cplx det = 1.0;
  for (std::size_t c = 0; c < 4; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < 4; ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (std::abs(m(piv, c)) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < 4; ++k) std::swap(m(c, k), m(piv, k));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < 4; ++r) {
      const cplx f = m(r, c) / m(c, c);
      for (std::size_t k = c; k < 4; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

namespace {

template <std::size_t N>
std::pair<CMat<N>, cplx> su_normalize_impl(const CMat<N>& a, double tol) {
  if (unitarity_error(a) > tol) throw NotUnitary("matrix is not unitary");
  const cplx d = determinant(a);
  const cplx phase = std::polar(1.0, std::arg(d) / static_cast<double>(N));
  return {(1.0 / phase) * a, phase};
}

// min over |phi| = 1 of ||a - phi b||_F. Equal to sqrt(|a|^2 + |b|^2 - 2|<a,b>|)
// but evaluated on the difference, which keeps full precision near zero.
template <std::size_t N>
double distance_impl(const CMat<N>& a, const CMat<N>& b) {
  cplx t{};
  for (std::size_t i = 0; i < N * N; ++i) t += std::conj(b.e[i]) * a.e[i];
  const cplx phi = std::abs(t) > 0 ? t / std::abs(t) : cplx{1, 0};
  double s = 0;
  for (std::size_t i = 0; i < N * N; ++i) s += std::norm(a.e[i] - phi * b.e[i]);
  return std::sqrt(s);
}

C2 make2(cplx a, cplx b, cplx c, cplx d) {
  C2 m;
  m.e = {a, b, c, d};
  return m;
}

}  // namespace

std::pair<C2, cplx> su_normalize(const C2& a, double tol) {
  return su_normalize_impl(a, tol);
}
std::pair<C4, cplx> su_normalize(const C4& a, double tol) {
  return su_normalize_impl(a, tol);
}

double distance_up_to_phase(const C2& a, const C2& b) {
  return distance_impl(a, b);
}
double distance_up_to_phase(const C4& a, const C4& b) {
  return distance_impl(a, b);
}

namespace gates {
const C2& I2() {
  static const C2 m = C2::identity();
  return m;
}
const C2& X() {
  static const C2 m = make2(0, 1, 1, 0);
  return m;
}
const C2& Y() {
  static const C2 m = make2(0, cplx(0, -1), cplx(0, 1), 0);
  return m;
}
const C2& Z() {
  static const C2 m = make2(1, 0, 0, -1);
  return m;
}
const C2& S() {
  static const C2 m = make2(1, 0, 0, cplx(0, 1));
  return m;
}
const C2& H() {
  static const double s = 1.0 / std::sqrt(2.0);
  static const C2 m = make2(s, s, s, -s);
  return m;
}
const C4& I4() {
  static const C4 m = C4::identity();
  return m;
}
const C4& CX() {
  static const C4 m = [] {
    C4 r;
    r(0, 0) = r(1, 1) = r(2, 3) = r(3, 2) = 1.0;
    return r;
  }();
  return m;
}
const C4& SWAP() {
  static const C4 m = [] {
    C4 r;
    r(0, 0) = r(1, 2) = r(2, 1) = r(3, 3) = 1.0;
    return r;
  }();
  return m;
}
const C4& M() {
  static const C4 m = [] {
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i(0, 1);
    C4 r;
    r.e = {1, 0, 0, i,   //
           0, i, 1, 0,   //
           0, i, -1, 0,  //
           1, 0, 0, -i};
    return s * r;
  }();
  return m;
}
}  // namespace gates

const C2& pauli(Axis a) {
  switch (a) {
    case Axis::X:
      return gates::X();
    case Axis::Y:
      return gates::Y();
    default:
      return gates::Z();
  }
}

C2 rotation_1q(Axis axis, double beta) {
  return std::cos(beta) * gates::I2() + cplx(0, std::sin(beta)) * pauli(axis);
}

C4 rotation_2q(Axis axis, double beta) {
  const C2& p = pauli(axis);
  return std::cos(beta) * gates::I4() + cplx(0, std::sin(beta)) * kron(p, p);
}

EigSym4 eig_sym4(const R4& in) {
  R4 a = in;
  R4 v{};
  for (int i = 0; i < 4; ++i) v[i * 4 + i] = 1.0;
  auto at = [](R4& m, int r, int c) -> double& { return m[r * 4 + c]; };

  constexpr int kMaxSweeps = 100;
  bool converged = false;
  double off = 0, scale = 0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    off = scale = 0;
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) {
        (p == q ? scale : off) += at(a, p, q) * at(a, p, q);
      }
    scale += off;
    if (off <= 1e-31 * std::max(scale, 1e-300) || off < 1e-300) {
      converged = true;
      break;
    }
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 4; ++q) {
        const double apq = at(a, p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (at(a, q, q) - at(a, p, p)) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < 4; ++k) {
          const double akp = at(a, k, p), akq = at(a, k, q);
          at(a, k, p) = c * akp - s * akq;
          at(a, k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < 4; ++k) {
          const double apk = at(a, p, k), aqk = at(a, q, k);
          at(a, p, k) = c * apk - s * aqk;
          at(a, q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < 4; ++k) {
          const double vkp = at(v, k, p), vkq = at(v, k, q);
          at(v, k, p) = c * vkp - s * vkq;
          at(v, k, q) = s * vkp + c * vkq;
        }
      }
  }
  // Rounding can stall the last sweeps just above the tight threshold.
  if (!converged && off > 1e-24 * scale) throw ConvergenceError("eig_sym4: Jacobi sweeps exhausted");
  EigSym4 out;
  for (int i = 0; i < 4; ++i) out.values[i] = at(a, i, i);
  out.vectors = v;
  return out;
}

KronFactors split_kron(const C4& m) {
  // m(2i+k, 2j+l) = a(i,j) b(k,l): pick the heaviest 2x2 block as b.
  std::size_t bi = 0, bj = 0;
  double best = -1;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      double w = 0;
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) w += std::norm(m(2 * i + k, 2 * j + l));
      if (w > best) {
        best = w;
        bi = i;
        bj = j;
      }
    }
  C2 b;
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 2; ++l) b(k, l) = m(2 * bi + k, 2 * bj + l);
  b = (1.0 / std::sqrt(determinant(b))) * b;
  const C2 bd = adjoint(b);
  C2 a;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      cplx t{};
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) t += bd(l, k) * m(2 * i + k, 2 * j + l);
      a(i, j) = 0.5 * t;
    }
  const cplx pa = std::sqrt(determinant(a));
  a = (1.0 / pa) * a;
  return {a, b, pa};
}

std::array<double, 3> zyz_angles(const C2& u) {
  const C2 v = su_normalize(u, 1e-6).first;
  const double p = std::abs(v(0, 0)), q = std::abs(v(0, 1));
  const double beta = std::atan2(q, p);
  const double sum = p > 1e-14 ? std::arg(v(0, 0)) : 0.0;
  const double diff = q > 1e-14 ? std::arg(v(0, 1)) : 0.0;
  return {(sum + diff) / 2, beta, (sum - diff) / 2};
}

C2 from_zyz(const std::array<double, 3>& a) {
  return rotation_1q(Axis::Z, a[0]) * rotation_1q(Axis::Y, a[1]) *
         rotation_1q(Axis::Z, a[2]);
}

}  // namespace cartan
