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

#include "cartan/kak.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace cartan {

namespace {

constexpr double kHalfPi = kPi / 2;
constexpr double kQuarterPi = kPi / 4;

// eta = W (g, x, y, z) for the diagonal of M^dagger A M.
constexpr int kW[4][4] = {
    {1, 1, -1, 1}, {1, 1, 1, -1}, {1, -1, -1, -1}, {1, -1, 1, 1}};

C4 embed(const R4& r) {
  C4 m;
  for (int i = 0; i < 16; ++i) m.e[i] = r[i];
  return m;
}

double det_real(const R4& m) {
  C4 c = embed(m);
  return determinant(c).real();
}

// Tracks A(raw) = phi * L * A(cur) * R while rewriting cur.
struct Tracker {
  std::array<double, 3> v;
  Local L, R;
  cplx phi = 1.0;

  void shift(int j, long k) {
    if (k == 0) return;
    v[j] -= static_cast<double>(k) * kHalfPi;
    const long km = ((k % 4) + 4) % 4;
    static const cplx ipow[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
    phi *= ipow[km];
    if (km % 2 == 1) {
      const C2& p = pauli(static_cast<Axis>(j));
      R = Local{p, p} * R;
    }
  }
  // Conjugation by a Pauli on qubit 0 negates the two axes it anticommutes with.
  void flip(Axis p) {
    const Local pl{pauli(p), C2::identity()};
    L = L * pl;
    R = pl * R;
    for (int j = 0; j < 3; ++j)
      if (j != static_cast<int>(p)) v[j] = -v[j];
  }
  void swap_axes(int i, int j) {
    if (i > j) std::swap(i, j);
    C2 c;
    if (i == 0 && j == 1)
      c = gates::S();
    else if (i == 0 && j == 2)
      c = gates::H();
    else
      c = rotation_1q(Axis::X, kQuarterPi);
    L = L * Local::both(adjoint(c));
    R = Local::both(c) * R;
    std::swap(v[i], v[j]);
  }
};

}  // namespace

C4 canonical_gate(double x, double y, double z) {
  return rotation_2q(Axis::X, x) * rotation_2q(Axis::Y, y) *
         rotation_2q(Axis::Z, z);
}

Canonicalized canonicalize(const std::array<double, 3>& raw) {
  Tracker t{raw, {}, {}, 1.0};
  for (int j = 0; j < 3; ++j)
    t.shift(j, std::lround(t.v[j] / kHalfPi));

  auto by_abs = [&](int i, int j) {
    if (std::abs(t.v[i]) < std::abs(t.v[j])) t.swap_axes(i, j);
  };
  by_abs(0, 1);
  by_abs(1, 2);
  by_abs(0, 1);

  if (t.v[0] < 0 && t.v[1] < 0)
    t.flip(Axis::Z);
  else if (t.v[0] < 0)
    t.flip(Axis::Y);
  else if (t.v[1] < 0)
    t.flip(Axis::X);

  if (std::abs(t.v[0] - kQuarterPi) < 1e-10 && t.v[2] < 0) {
    t.shift(0, 1);
    t.flip(Axis::Y);
  }

  Canonicalized out;
  out.coord = CartanCoord::from(t.v);
  out.left = adjoint(t.L);
  out.right = adjoint(t.R);
  out.phase = t.phi;
  return out;
}

KakFactorization kak_decompose(const C4& u) {
  const auto [us, ph] = su_normalize(u, 1e-8);
  const C4& M = gates::M();
  const C4 Md = adjoint(M);
  const C4 ub = Md * us * M;
  const C4 p = ub * transpose(ub);

  R4 re{}, im{};
  for (int i = 0; i < 16; ++i) {
    re[i] = p.e[i].real();
    im[i] = p.e[i].imag();
  }

  // Re(P) and Im(P) commute; a generic combination separates degenerate
  // eigenspaces of either one.
  std::mt19937_64 rng(0x6b616bULL);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double r = 0.6180339887498949;
  R4 q{};
  std::array<cplx, 4> d2{};
  bool ok = false;
  for (int attempt = 0; attempt < 32 && !ok; ++attempt) {
    R4 sym{};
    for (int i = 0; i < 16; ++i) sym[i] = re[i] + r * im[i];
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const double avg = 0.5 * (sym[i * 4 + j] + sym[j * 4 + i]);
        sym[i * 4 + j] = sym[j * 4 + i] = avg;
      }
    q = eig_sym4(sym).vectors;
    const C4 qc = embed(q);
    const C4 dd = transpose(qc) * p * qc;
    double off = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) off = std::max(off, std::abs(dd(i, j)));
    if (off < 1e-10) {
      ok = true;
      for (int i = 0; i < 4; ++i) d2[i] = dd(i, i);
    }
    r = dist(rng);
  }
  if (!ok) throw ConvergenceError("kak_decompose: simultaneous diagonalization failed");

  if (det_real(q) < 0)
    for (int i = 0; i < 4; ++i) q[i * 4] = -q[i * 4];

  std::array<cplx, 4> dvals;
  for (int i = 0; i < 4; ++i) dvals[i] = std::sqrt(d2[i] / std::abs(d2[i]));

  // K = D^{-1} Q^T U_B is real orthogonal.
  const C4 qt_ub = transpose(embed(q)) * ub;
  R4 k{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) k[i * 4 + j] = (qt_ub(i, j) / dvals[i]).real();
  if (det_real(k) < 0) {
    for (int j = 0; j < 4; ++j) k[j] = -k[j];
    dvals[0] = -dvals[0];
  }

  std::array<double, 4> eta;
  for (int i = 0; i < 4; ++i) eta[i] = std::arg(dvals[i]);
  std::array<double, 4> gxyz{};
  for (int c = 0; c < 4; ++c) {
    double s = 0;
    for (int rI = 0; rI < 4; ++rI) s += kW[rI][c] * eta[rI];
    gxyz[c] = s / 4;
  }

  const KronFactors lf = split_kron(M * embed(q) * Md);
  const KronFactors rf = split_kron(M * embed(k) * Md);
  const Canonicalized can = canonicalize({gxyz[1], gxyz[2], gxyz[3]});

  // U = ph * e^{ig} * (lf) A(raw) (rf), A(raw) = phase * left^dag A(can) right^dag.
  KakFactorization f;
  f.coord = can.coord;
  const double gq = gxyz[0] / kHalfPi;
  f.g_half_pi = (((std::lround(gq) % 2) + 2) % 2) == 1;
  cplx phase = ph * lf.phase * rf.phase * std::polar(1.0, gxyz[0]) * can.phase;
  auto norm1 = [&phase](const C2& m) {
    const cplx s = std::sqrt(determinant(m));
    phase *= s;
    return (1.0 / s) * m;
  };
  f.a = norm1(lf.a * adjoint(can.left.q0));
  f.b = norm1(lf.b * adjoint(can.left.q1));
  f.c = norm1(adjoint(can.right.q0) * rf.a);
  f.d = norm1(adjoint(can.right.q1) * rf.b);
  f.global_phase = phase;
  return f;
}

C4 kak_recompose(const KakFactorization& f) {
  return f.global_phase * (kron(f.a, f.b) * canonical_gate(f.coord) * kron(f.c, f.d));
}

CartanCoord cartan_coord(const C4& u) { return kak_decompose(u).coord; }

bool in_weyl_chamber(const CartanCoord& c, double tol) {
  if (!(std::abs(c.z) <= c.y + tol && c.y <= c.x + tol && c.x <= kQuarterPi + tol))
    return false;
  if (c.y < -tol) return false;
  if (std::abs(c.x - kQuarterPi) < 1e-10 && c.z < -tol) return false;
  return true;
}

bool locally_equivalent(const C4& u, const C4& v, double tol) {
  const CartanCoord a = cartan_coord(u), b = cartan_coord(v);
  return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol &&
         std::abs(a.z - b.z) <= tol;
}

double k_t(const CartanCoord& c) { return c.x + c.y + std::abs(c.z); }
double k_t(const C4& u) { return k_t(cartan_coord(u)); }

TemplateClass classify_template(const CartanCoord& c, double tol) {
  TemplateClass t;
  t.theta_x = c.x;
  t.theta_y = c.y;
  t.theta_z = c.z;
  if (std::abs(c.y) < tol && std::abs(c.z) < tol) {
    t.tag = TemplateClass::Tag::Da;
    t.theta_y = t.theta_z = 0;
  } else if (std::abs(c.z) < tol) {
    t.tag = TemplateClass::Tag::Db;
    t.theta_z = 0;
  } else {
    t.tag = TemplateClass::Tag::Dc;
  }
  return t;
}

std::string TemplateClass::name() const {
  std::ostringstream os;
  os.precision(17);
  switch (tag) {
    case Tag::Da:
      os << "Da(" << theta_x << ")";
      break;
    case Tag::Db:
      os << "Db(" << theta_x << "," << theta_y << ")";
      break;
    case Tag::Dc:
      os << "Dc(" << theta_x << "," << theta_y << "," << theta_z << ")";
      break;
  }
  return os.str();
}

}  // namespace cartan
