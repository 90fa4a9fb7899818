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
#include <string>

#include "cartan/matrix.hpp"

namespace cartan {

/// Canonical (x, y, z) triple in the Weyl chamber
/// 0 <= |z| <= y <= x <= pi/4, with z >= 0 when x = pi/4.
struct CartanCoord {
  double x = 0, y = 0, z = 0;

  std::array<double, 3> as_array() const { return {x, y, z}; }
  static CartanCoord from(const std::array<double, 3>& v) {
    return {v[0], v[1], v[2]};
  }
};

/// A two-qubit local gate q0 (x) q1.
struct Local {
  C2 q0 = C2::identity();
  C2 q1 = C2::identity();

  C4 matrix() const { return kron(q0, q1); }
  friend Local operator*(const Local& a, const Local& b) {
    return {a.q0 * b.q0, a.q1 * b.q1};
  }
  static Local both(const C2& u) { return {u, u}; }
};

inline Local adjoint(const Local& l) { return {adjoint(l.q0), adjoint(l.q1)}; }

/// exp(i(x XX + y YY + z ZZ)).
C4 canonical_gate(double x, double y, double z);
inline C4 canonical_gate(const CartanCoord& c) {
  return canonical_gate(c.x, c.y, c.z);
}

/// U = global_phase * (a (x) b) * canonical_gate(coord) * (c (x) d).
struct KakFactorization {
  cplx global_phase = 1.0;
  bool g_half_pi = false;  // branch of the magic-basis phase g
  C2 a = C2::identity(), b = C2::identity(), c = C2::identity(),
     d = C2::identity();
  CartanCoord coord;

  Local left() const { return {a, b}; }
  Local right() const { return {c, d}; }
};

KakFactorization kak_decompose(const C4& u);
C4 kak_recompose(const KakFactorization& f);
CartanCoord cartan_coord(const C4& u);

/// left * exp(i raw.P) * right = phase * exp(i canonical.P).
struct Canonicalized {
  CartanCoord coord;
  Local left, right;
  cplx phase = 1.0;
};
Canonicalized canonicalize(const std::array<double, 3>& raw);

bool in_weyl_chamber(const CartanCoord& c, double tol = 1e-9);

bool locally_equivalent(const C4& u, const C4& v, double tol = 1e-9);

/// L1 norm x + y + |z|.
double k_t(const CartanCoord& c);
double k_t(const C4& u);

struct TemplateClass {
  enum class Tag { Da, Db, Dc };
  Tag tag = Tag::Da;
  double theta_x = 0, theta_y = 0, theta_z = 0;

  std::string name() const;
};

TemplateClass classify_template(const CartanCoord& c, double tol = 1e-9);

}  // namespace cartan
