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

#include <cstdint>
#include <optional>
#include <vector>

#include "cartan/calib.hpp"
#include "cartan/synth.hpp"

namespace cartan {

/// Free 1Q slot shapes: ZYZ angles on both qubits (6 parameters), a Z
/// rotation on qubit 1 only (1 parameter), or nothing.
enum class SlotKind { ZYZ, Z1, Fixed };

/// gates[0..N) in time order, with 1Q slots before, between and after them.
struct CandidateTemplate {
  std::vector<C4> gates;
  std::vector<SlotKind> slots;  // size N + 1; empty means all ZYZ

  static CandidateTemplate repeated(const C4& gate, int n);
  int n_params() const;
  SlotKind slot(std::size_t k) const;
  C4 assemble(const std::vector<double>& theta) const;
};

struct RefineOptions {
  int budget = 5000;  // simplex evaluations per restart
  int restarts = 8;
  std::uint64_t seed = 1;
  bool polish = true;  // Levenberg-Marquardt on the best simplex point
  double stop_distance = 1e-10;
};

struct RefineResult {
  std::vector<double> theta;
  double distance = 0;
  long evaluations = 0;
  int restart = -1;  // index of the restart that produced theta
};

RefineResult numeric_refine(const CandidateTemplate& tmpl, const C4& target,
                            const RefineOptions& opts = {});

constexpr double kFeasibleDistance = 1e-6;

struct BruteOptions {
  RefineOptions refine;
  /// When set, only counts below this known-feasible value are searched,
  /// downward, stopping at the first infeasible count.
  std::optional<int> known_feasible;
};

/// Smallest N <= n_max whose refined distance is below kFeasibleDistance.
std::optional<int> brute_force_min_count(const C4& target, const BasisGate& basis, int n_max,
                                         const BruteOptions& opts = {});

struct IdentityCheck {
  bool ok = false;
  double distance = 0;
};
IdentityCheck verify_identity(const GateSeq& lhs, const GateSeq& rhs, double tol = 1e-9);

/// Largest gap between the sorted singular values of the imaginary (or real,
/// on the other phase branch) magic-basis part of U and the sorted |sin|
/// of its eta vector.
double singular_value_gap(const C4& u);
bool check_singular_values(const C4& u, double tol = 1e-8);

/// |cos k_t(U L Da(theta) L')| <= cos(R(k_t(U)) - theta) + slack over
/// random local dressings L, L'. Requires R(k_t(U)) <= pi/4 and
/// 0 < theta < pi/4.
bool check_triangle_inequality(const C4& u, double theta, int trials, std::uint64_t seed = 5,
                               double slack = 1e-9);

}  // namespace cartan
