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

#include "cartan/calib.hpp"

#include <algorithm>
#include <cmath>

namespace cartan {

namespace {

constexpr double kHalfPi = kPi / 2;

double sq(double v) { return v * v; }

C4 z_layer(double t0, double t1) {
  return kron(rotation_1q(Axis::Z, t0), rotation_1q(Axis::Z, t1));
}

double atan2_or_zero(double s, double c) {
  if (std::abs(s) < 1e-300 && std::abs(c) < 1e-300) return 0.0;
  return std::atan2(s, c);
}

// Angle whose (sin, cos) are (s, c) / prefactor; unconstrained when the
// prefactor vanishes.
double scaled_angle(double prefactor, double s, double c) {
  if (std::abs(prefactor) < 1e-9) return 0.0;
  return atan2_or_zero(s / prefactor, c / prefactor);
}

double eta_from_cos2(double cos2, int sign) {
  const double e = std::acos(std::sqrt(std::clamp(cos2, 0.0, 1.0)));
  return sign < 0 ? -e : e;
}

}  // namespace

double fold_pi(double w) {
  double r = std::fmod(std::abs(w), kPi);
  return r <= kHalfPi ? r : kPi - r;
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2 * kPi);
  if (r <= -kPi) r += 2 * kPi;
  return r;
}

double mix_angle(double target, double p, double q) {
  // cos^2 a - cos^2 b = sin(b - a) sin(b + a) keeps both weights accurate
  // near the ends of the interval.
  const double wc = std::sin(q - target) * std::sin(q + target);
  const double ws = std::sin(target - p) * std::sin(target + p);
  const double den = std::sin(q - p) * std::sin(q + p);
  if (std::abs(den) < 1e-14) return std::abs(wc) < 1e-10 ? 0.0 : -1.0;
  const double c = wc / den, s = ws / den;
  if (c < -1e-10 || s < -1e-10) return -1.0;
  return std::atan2(std::sqrt(std::max(s, 0.0)), std::sqrt(std::max(c, 0.0)));
}

// ---- Two XX-type gates around a Z1 rotation ----

C4 DaSandwich::assemble() const {
  const C4 zl = kron(C2::identity(), rotation_1q(Axis::Z, tau_left));
  const C4 zr = kron(C2::identity(), rotation_1q(Axis::Z, tau_right));
  if (!dagger_form)
    return zl * rotation_2q(Axis::X, theta_x) *
           kron(C2::identity(), rotation_1q(Axis::Z, beta - kHalfPi)) *
           rotation_2q(Axis::X, theta_x2) * zr;
  return zl * rotation_2q(Axis::X, theta_x) *
         kron(C2::identity(), rotation_1q(Axis::Z, beta)) *
         rotation_2q(Axis::X, -theta_x2) * zr;
}

DaSandwich da_forward(double theta_x, double theta_x2, double beta,
                      bool dagger_form) {
  // Special case of the XX+YY sandwich with no YY part and beta0 = 0.
  const DbSandwich s = db_forward(theta_x, 0.0, theta_x2, 0.0, 0.0, beta - kHalfPi);
  DaSandwich d;
  d.theta_x = theta_x;
  d.theta_x2 = theta_x2;
  d.beta = beta;
  d.eta = s.eta_x + s.eta_y;
  d.tau_left = s.tau[1];
  d.tau_right = s.tau[3];
  d.dagger_form = dagger_form;
  if (dagger_form) d.tau_right = wrap_angle(d.tau_right + kHalfPi);
  return d;
}

DaSandwich da_invert(double theta_x, double theta_x2, double eta_target,
                     bool dagger_form) {
  const double lo = std::abs(theta_x - theta_x2);
  const double hi = fold_pi(theta_x + theta_x2);
  const double e = eta_target;
  if (e < std::min(lo, hi) - 1e-10 || e > std::max(lo, hi) + 1e-10)
    throw Unreachable("da_invert: target outside the reachable interval");
  // cos^2 eta = sin^2 beta cos^2(sum) + cos^2 beta cos^2(diff).
  const double m = mix_angle(e, theta_x + theta_x2, theta_x - theta_x2);
  if (m < 0) throw Unreachable("da_invert: no real solution");
  const double beta = kHalfPi - m;
  DaSandwich d = da_forward(theta_x, theta_x2, beta, dagger_form);
  return d;
}

// ---- Two XX+YY-type gates around a Z0 Z1 layer ----

C4 DbSandwich::assemble() const {
  return z_layer(tau[0], tau[1]) * canonical_gate(theta_x, theta_y, 0) *
         z_layer(beta0, beta1) * canonical_gate(theta_x2, theta_y2, 0) *
         z_layer(tau[2], tau[3]);
}

std::array<double, 4> db_calibration(double tx, double ty, double tx2,
                                     double ty2, double b0, double b1,
                                     double ex, double ey) {
  const double B0 = tx + tx2, B1 = ty + ty2, B2 = tx - tx2, B3 = ty - ty2;
  const double cm = std::cos(ex - ey), cp = std::cos(ex + ey);
  const double sm = std::sin(ex - ey), sp = std::sin(ex + ey);
  const double s01 = scaled_angle(cm, std::sin(b0 + b1) * std::cos(B2 - B3),
                                  std::cos(b0 + b1) * std::cos(B0 - B1));
  const double d01 = scaled_angle(cp, std::sin(b0 - b1) * std::cos(B2 + B3),
                                  std::cos(b0 - b1) * std::cos(B0 + B1));
  const double d23 = scaled_angle(sp, -std::sin(b0 - b1) * std::sin(B2 + B3),
                                  std::cos(b0 - b1) * std::sin(B0 + B1));
  const double s23 = scaled_angle(sm, -std::sin(b0 + b1) * std::sin(B2 - B3),
                                  std::cos(b0 + b1) * std::sin(B0 - B1));
  const double a0 = (s01 + d01) / 2, a1 = (s01 - d01) / 2;
  const double a2 = (s23 + d23) / 2, a3 = (s23 - d23) / 2;
  // The relations hold for the negated calibration angles in this
  // rotation convention.
  return {wrap_angle(-(a0 + a2) / 2), wrap_angle(-(a1 + a3) / 2),
          wrap_angle(-(a0 - a2) / 2), wrap_angle(-(a1 - a3) / 2)};
}

DbSandwich db_forward(double tx, double ty, double tx2, double ty2, double b0,
                      double b1, int sign_sum, int sign_diff) {
  const double cp2 = sq(std::cos(b0 - b1)) * sq(std::cos(tx + ty + tx2 + ty2)) +
                     sq(std::sin(b0 - b1)) * sq(std::cos(tx + ty - tx2 - ty2));
  const double cm2 = sq(std::cos(b0 + b1)) * sq(std::cos(tx - ty + tx2 - ty2)) +
                     sq(std::sin(b0 + b1)) * sq(std::cos(tx - ty - tx2 + ty2));
  const double u = eta_from_cos2(cp2, sign_sum);
  const double v = eta_from_cos2(cm2, sign_diff);
  DbSandwich s;
  s.theta_x = tx;
  s.theta_y = ty;
  s.theta_x2 = tx2;
  s.theta_y2 = ty2;
  s.beta0 = b0;
  s.beta1 = b1;
  s.eta_x = (u + v) / 2;
  s.eta_y = (u - v) / 2;
  s.tau = db_calibration(tx, ty, tx2, ty2, b0, b1, s.eta_x, s.eta_y);
  return s;
}

DbSandwich db_invert(double tx, double ty, double tx2, double ty2, double ex,
                     double ey) {
  const double u = ex + ey, v = ex - ey;
  const double dm = mix_angle(u, tx + ty + tx2 + ty2, tx + ty - tx2 - ty2);
  const double sm = mix_angle(v, tx - ty + tx2 - ty2, tx - ty - tx2 + ty2);
  if (dm < 0 || sm < 0)
    throw Unreachable("db_invert: target outside the reachable region");
  // dm = beta0 - beta1, sm = beta0 + beta1.
  const double b0 = (sm + dm) / 2, b1 = (sm - dm) / 2;
  DbSandwich s;
  s.theta_x = tx;
  s.theta_y = ty;
  s.theta_x2 = tx2;
  s.theta_y2 = ty2;
  s.beta0 = wrap_angle(b0);
  s.beta1 = wrap_angle(b1);
  // Keep the requested branch; the cos^2 relations only fix it modulo sign and pi.
  s.eta_x = ex;
  s.eta_y = ey;
  s.tau = db_calibration(tx, ty, tx2, ty2, b0, b1, ex, ey);
  return s;
}

std::array<double, 8> DbSandwich::relation_residuals() const {
  const double a0 = -(tau[0] + tau[2]), a1 = -(tau[1] + tau[3]);
  const double a2 = -(tau[0] - tau[2]), a3 = -(tau[1] - tau[3]);
  const double b0 = theta_x + theta_x2, b1 = theta_y + theta_y2;
  const double b2 = theta_x - theta_x2, b3 = theta_y - theta_y2;
  const double ex = eta_x, ey = eta_y, p0 = beta0, p1 = beta1;
  using std::cos;
  using std::sin;
  return {
      cos(ex - ey) * cos(a0 + a1) - cos(p0 + p1) * cos(b0 - b1),
      cos(ex + ey) * cos(a0 - a1) - cos(p0 - p1) * cos(b0 + b1),
      cos(ex - ey) * sin(a0 + a1) - sin(p0 + p1) * cos(b2 - b3),
      cos(ex + ey) * sin(a0 - a1) - sin(p0 - p1) * cos(b2 + b3),
      sin(ex + ey) * cos(a2 - a3) - cos(p0 - p1) * sin(b0 + b1),
      sin(ex - ey) * cos(a2 + a3) - cos(p0 + p1) * sin(b0 - b1),
      sin(ex - ey) * sin(a2 + a3) + sin(p0 + p1) * sin(b2 - b3),
      sin(ex + ey) * sin(a2 - a3) + sin(p0 - p1) * sin(b2 + b3),
  };
}

// ---- Rewrite rules ----

SeqGate SeqGate::templ(const TemplateClass& t, bool dag) {
  SeqGate g;
  g.kind = Kind::Template;
  g.tmpl = t;
  g.dagger = dag;
  return g;
}
SeqGate SeqGate::rot1(Axis a, int q, double angle) {
  SeqGate g;
  g.kind = Kind::Rot1;
  g.axis = a;
  g.qubit = q;
  g.angle = angle;
  return g;
}
SeqGate SeqGate::rot2(Axis a, double angle) {
  SeqGate g;
  g.kind = Kind::Rot2;
  g.axis = a;
  g.angle = angle;
  return g;
}
SeqGate SeqGate::lit(const C4& m) {
  SeqGate g;
  g.kind = Kind::Literal;
  g.literal = m;
  return g;
}

C4 SeqGate::matrix() const {
  switch (kind) {
    case Kind::Template: {
      const double s = dagger ? -1.0 : 1.0;
      return canonical_gate(s * tmpl.theta_x, s * tmpl.theta_y, s * tmpl.theta_z);
    }
    case Kind::Rot1: {
      const C2 r = rotation_1q(axis, angle);
      return qubit == 0 ? kron(r, C2::identity()) : kron(C2::identity(), r);
    }
    case Kind::Rot2:
      return rotation_2q(axis, angle);
    case Kind::Literal:
      break;
  }
  return literal;
}

C4 product(const GateSeq& seq) {
  C4 m = C4::identity();
  for (const auto& g : seq) m = m * g.matrix();
  return m;
}

namespace {

using Tag = TemplateClass::Tag;

bool same_angles(const TemplateClass& a, const TemplateClass& b) {
  return a.theta_x == b.theta_x && a.theta_y == b.theta_y && a.theta_z == b.theta_z;
}

TemplateClass downgrade(const TemplateClass& t) {
  TemplateClass d = t;
  if (t.tag == Tag::Db) {
    d.tag = Tag::Da;
    d.theta_y = 0;
  } else {
    d.tag = Tag::Db;
    d.theta_z = 0;
  }
  return d;
}

[[noreturn]] void mismatch(const char* rule) {
  throw std::invalid_argument(std::string("apply_rule: sequence does not match ") + rule);
}

}  // namespace

GateSeq apply_rule(Rule rule, const GateSeq& lhs) {
  if (lhs.size() != 3 || lhs[1].kind != SeqGate::Kind::Rot1)
    mismatch("a three-gate sandwich");
  const SeqGate& first = lhs[0];
  const SeqGate& mid = lhs[1];
  const SeqGate& last = lhs[2];
  if (first.kind != SeqGate::Kind::Template || last.kind != SeqGate::Kind::Template ||
      !same_angles(first.tmpl, last.tmpl) || first.dagger)
    mismatch("a basis sandwich");
  const Tag tag = first.tmpl.tag;

  switch (rule) {
    case Rule::PauliConversion: {
      // (HSH)^{(x)2} fixes XX and sends Z to -Y.
      if (tag != Tag::Da || !last.dagger || mid.axis != Axis::Y)
        mismatch("Da Y Da^dagger");
      const C2 c = gates::H() * gates::S() * gates::H();
      const C4 k = kron(c, c);
      return {SeqGate::lit(k), first, SeqGate::rot1(Axis::Z, mid.qubit, -mid.angle),
              last, SeqGate::lit(adjoint(k))};
    }
    case Rule::Reduce: {
      const bool ok = !last.dagger &&
                      ((tag == Tag::Da && (mid.axis == Axis::Z || mid.axis == Axis::Y)) ||
                       (tag == Tag::Db && mid.axis == Axis::Z));
      if (!ok) mismatch("D Z D");
      return {first, SeqGate::rot1(mid.axis, mid.qubit, mid.angle - kHalfPi),
              SeqGate::templ(first.tmpl, true),
              SeqGate::rot1(mid.axis, mid.qubit, kHalfPi)};
    }
    case Rule::DowngradeI: {
      const bool ok = last.dagger && ((tag == Tag::Db && mid.axis == Axis::Y) ||
                                      (tag == Tag::Dc && mid.axis == Axis::Z));
      if (!ok) mismatch("Db Y Db^dagger or Dc Z Dc^dagger");
      const TemplateClass d = downgrade(first.tmpl);
      return {SeqGate::templ(d), mid, SeqGate::templ(d, true)};
    }
    case Rule::DowngradeII: {
      const bool ok = !last.dagger && ((tag == Tag::Db && mid.axis == Axis::Y) ||
                                       (tag == Tag::Dc && mid.axis == Axis::Z));
      if (!ok) mismatch("Db Y Db or Dc Z Dc");
      const TemplateClass d = downgrade(first.tmpl);
      const double extra = tag == Tag::Db ? first.tmpl.theta_y : first.tmpl.theta_z;
      return {SeqGate::rot2(mid.axis, 2 * extra), SeqGate::templ(d), mid,
              SeqGate::templ(d)};
    }
  }
  mismatch("a known rule");
}

}  // namespace cartan
