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

#include <string>
#include <vector>

#include "cartan/circuit.hpp"
#include "cartan/model.hpp"
#include "cartan/synth.hpp"
#include "cartan/transpile.hpp"

namespace cartan {

/// Latency of a basis gate in CX units.
double gate_latency(const BasisGate& g, const HardwareModel& model);

/// Product of (1 - error) over 2Q ops; 1Q ops are free.
double circuit_fidelity(const Circuit& c, const HardwareModel& model);
/// Serial sum of 2Q latencies in CX units.
double circuit_latency(const Circuit& c, const HardwareModel& model);

struct InstructionSet {
  std::vector<BasisGate> bases;
  double calibration_penalty = 0;  // per distinct basis gate

  std::string label() const;
};

struct Benchmark {
  std::string name;
  Circuit circuit;
};

/// Score = fidelity * (1 - F) + latency * L + count * N + penalty * |bases|;
/// lower is better.
struct ObjectiveWeights {
  double fidelity = 1, latency = 0, count = 0;
  static ObjectiveWeights for_objective(Objective o);
};

struct EvalOptions {
  Objective objective = Objective::MinCount;  // per-op plan selection
  ObjectiveWeights weights;
  TranspileOptions transpile;
};

struct EvalRow {
  std::string benchmark;
  std::string config;
  std::vector<CartanCoord> angles;
  double fidelity = 1;
  double latency = 0;
  std::size_t basis_count = 0;
  std::size_t lower_bound = 0;
  double score = 0;
};

std::vector<EvalRow> evaluate_instruction_set(const std::vector<Benchmark>& benchmarks,
                                              const InstructionSet& iset,
                                              const HardwareModel& model,
                                              const EvalOptions& opts = {});

struct SweepRow {
  std::size_t rank = 0;
  std::string config;
  std::vector<CartanCoord> angles;
  double fidelity = 1;  // product over benchmarks
  double latency = 0;   // sums over benchmarks
  std::size_t basis_count = 0;
  std::size_t lower_bound = 0;
  double score = 0;
  std::vector<EvalRow> rows;
};

/// One row per configuration, ranked by score, then basis count, then
/// lexicographic angle order. Cells run on the transpile worker count.
std::vector<SweepRow> sweep_design_space(const std::vector<Benchmark>& benchmarks,
                                         const std::vector<InstructionSet>& grid,
                                         const HardwareModel& model,
                                         const EvalOptions& opts = {});

std::string eval_rows_csv(const std::vector<EvalRow>& rows);
std::string eval_rows_json(const std::vector<EvalRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);

}  // namespace cartan
