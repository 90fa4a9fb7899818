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
#include <optional>
#include <string>
#include <vector>

#include "cartan/kak.hpp"
#include "cartan/model.hpp"

namespace cartan {

struct BasisGate {
  C4 matrix = C4::identity();
  KakFactorization kak;
  TemplateClass tmpl;
  std::string label;
  bool dagger_available = true;

  /// Throws NotUnitary, or std::invalid_argument for a local (non-entangling) gate.
  static BasisGate from_matrix(const C4& m, std::string label = "");
  static BasisGate da(double tx, std::string label = "");
  static BasisGate db(double tx, double ty, std::string label = "");
  static BasisGate dc(double tx, double ty, double tz, std::string label = "");

  CartanCoord coord() const { return kak.coord; }
};

struct Step {
  enum class Kind { Basis, OneQ };
  Kind kind = Kind::OneQ;
  int basis = 0;  // index into SynthesisPlan::bases
  int qubit = 0;
  C2 u = C2::identity();

  static Step invoke(int basis_index) {
    Step s;
    s.kind = Kind::Basis;
    s.basis = basis_index;
    return s;
  }
  static Step one(int qubit, const C2& u) {
    Step s;
    s.kind = Kind::OneQ;
    s.qubit = qubit;
    s.u = u;
    return s;
  }
};

struct CostBound {
  int n_lower = 0;
  double k_t_value = 0;
  bool applicable = false;
};

/// Steps are in time order: steps.front() acts first.
struct SynthesisPlan {
  std::vector<BasisGate> bases;
  std::vector<Step> steps;
  int basis_count = 0;
  CartanCoord target_coord;
  C4 target = C4::identity();
  double residual_achieved = 0;
  CostBound bound;
  std::string method;
};

C4 assemble(const std::vector<Step>& steps, const std::vector<BasisGate>& bases);
C4 assemble(const SynthesisPlan& plan);

/// Rotation padding following the per-template counting rules.
struct PadResult {
  std::vector<std::array<double, 3>> pads;  // one signed axis vector per invocation
  std::array<double, 3> residual{};
  int count() const { return static_cast<int>(pads.size()); }
};
PadResult pad_rotations(const CartanCoord& target, const BasisGate& basis);

/// A stand-alone circuit realizing exp(i raw.P) up to the recorded locals:
/// assemble(steps) = phase * left * exp(i raw.P) * right.
struct CoreCircuit {
  std::vector<Step> steps;
  Local left, right;
  int basis_count = 0;
};

/// Residual synthesis for XX-type bases. With a leading pad the residual is
/// merged with one borrowed basis invocation on its largest axis; the
/// borrowed invocation is not counted in `basis_count`.
CoreCircuit synth_residual_da(const std::array<double, 3>& residual,
                              const BasisGate& basis, bool leading_pad_available);
CoreCircuit synth_residual_db(const std::array<double, 3>& residual,
                              const BasisGate& basis);
CoreCircuit synth_residual_dc(const std::array<double, 3>& residual,
                              const BasisGate& basis);

/// Optimal-angle rule for converting Dc pairs into an XX-type gate.
double dc_effective_angle(const TemplateClass& t);

struct CompileOptions {
  /// Try a bounded numerical closure for plans of at most this many invocations
  /// when the analytic plan is above the lower bound. 0 disables it.
  int closure_max = 3;
};

SynthesisPlan compile_2q(const C4& target, const BasisGate& basis,
                         const CompileOptions& opts = {});

/// Basis count only; same planning path as compile_2q without emitting steps.
int compile_count(const CartanCoord& target, const BasisGate& basis,
                  const CompileOptions& opts = {});

enum class Objective { MinCount, MinLatency, MaxFidelity };
Objective parse_objective(const std::string& s);
const char* objective_name(Objective o);

SynthesisPlan compile_2q_mixed(const C4& target, const std::vector<BasisGate>& bases,
                               Objective objective, const HardwareModel& model,
                               const CompileOptions& opts = {});

CostBound lower_bound(const CartanCoord& target, const BasisGate& basis);
CostBound lower_bound(const CartanCoord& target, const TemplateClass& basis);

/// Latency and fidelity of a plan's basis invocations under a model.
double plan_latency(const SynthesisPlan& plan, const HardwareModel& model);
double plan_fidelity(const SynthesisPlan& plan, const HardwareModel& model);

}  // namespace cartan
