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
#include <stdexcept>
#include <vector>

#include "cartan/kak.hpp"

namespace cartan {

struct Unreachable : std::domain_error {
  using std::domain_error::domain_error;
};

/// Z1(tau_left) XX(theta_x) Z1(beta - pi/2) XX(theta_x2) Z1(tau_right) = XX(eta)
/// up to phase. In dagger form the middle is Z1(beta), the second gate is
/// inverted and tau_right absorbs the extra quarter turn.
struct DaSandwich {
  double theta_x = 0, theta_x2 = 0;
  double beta = 0;
  double eta = 0;
  double tau_left = 0, tau_right = 0;
  bool dagger_form = false;

  C4 assemble() const;
};

DaSandwich da_forward(double theta_x, double theta_x2, double beta,
                      bool dagger_form = false);
/// Throws Unreachable when eta_target lies outside
/// [|theta_x - theta_x2|, fold(theta_x + theta_x2)].
DaSandwich da_invert(double theta_x, double theta_x2, double eta_target,
                     bool dagger_form = false);

/// Z0(t0) Z1(t1) A(tx, ty) Z0(b0) Z1(b1) A(tx2, ty2) Z0(t2) Z1(t3)
///   = A(eta_x, eta_y) up to phase.
struct DbSandwich {
  double theta_x = 0, theta_y = 0, theta_x2 = 0, theta_y2 = 0;
  double beta0 = 0, beta1 = 0;
  double eta_x = 0, eta_y = 0;
  std::array<double, 4> tau{};

  C4 assemble() const;
  /// The eight matrix-element relations, as (lhs - rhs) residuals.
  std::array<double, 8> relation_residuals() const;
};

/// sign_sum / sign_diff pick the branch of eta_x + eta_y and eta_x - eta_y.
DbSandwich db_forward(double theta_x, double theta_y, double theta_x2,
                      double theta_y2, double beta0, double beta1,
                      int sign_sum = 1, int sign_diff = 1);
DbSandwich db_invert(double theta_x, double theta_y, double theta_x2,
                     double theta_y2, double eta_x, double eta_y);

/// Calibration angles for fixed (thetas, betas, etas); no reachability check.
std::array<double, 4> db_calibration(double theta_x, double theta_y,
                                     double theta_x2, double theta_y2,
                                     double beta0, double beta1, double eta_x,
                                     double eta_y);

/// Distance to the nearest multiple of pi, in [0, pi/2].
double fold_pi(double w);

/// Solves cos^2 target = c cos^2(p) + (1 - c) cos^2(q) for the angle acos(sqrt(c)).
/// Returns a negative value when the target is unreachable.
double mix_angle(double target, double p, double q);

/// Wraps into (-pi, pi].
double wrap_angle(double a);

// Rewrite rules over symbolic gate sequences (matrix-product order).

struct SeqGate {
  enum class Kind { Template, Rot1, Rot2, Literal };
  Kind kind = Kind::Literal;
  TemplateClass tmpl;  // Template
  bool dagger = false;
  Axis axis = Axis::Z;  // Rot1 / Rot2
  int qubit = 0;        // Rot1
  double angle = 0;
  C4 literal = C4::identity();

  static SeqGate templ(const TemplateClass& t, bool dag = false);
  static SeqGate rot1(Axis a, int q, double angle);
  static SeqGate rot2(Axis a, double angle);
  static SeqGate lit(const C4& m);

  C4 matrix() const;
};

using GateSeq = std::vector<SeqGate>;

C4 product(const GateSeq& seq);

enum class Rule { PauliConversion, Reduce, DowngradeI, DowngradeII };

/// Throws std::invalid_argument when `lhs` does not have the rule's shape.
GateSeq apply_rule(Rule rule, const GateSeq& lhs);

}  // namespace cartan
