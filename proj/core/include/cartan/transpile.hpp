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

#include <cstddef>
#include <vector>

#include "cartan/circuit.hpp"
#include "cartan/synth.hpp"

namespace cartan {

struct TranspileOptions {
  CompileOptions compile;
  /// 0 reads CARTAN_WORKERS from the environment (default 1).
  int workers = 0;
};

struct TranspileReport {
  std::size_t two_qubit_ops = 0;  // in the input
  std::size_t basis_count = 0;
  std::size_t lower_bound = 0;  // sum of per-op lower bounds
  std::vector<std::size_t> per_basis;
  std::size_t distinct_targets = 0;
  double max_op_distance = 0;
  double compile_seconds = 0;
};

struct TranspileResult {
  Circuit circuit;
  TranspileReport report;
};

int worker_count_from_env();

/// Replaces every 2Q op by a plan over `bases` and merges 1Q runs. Output
/// ordering does not depend on the worker count.
TranspileResult transpile_circuit(const Circuit& c, const std::vector<BasisGate>& bases,
                                  Objective objective, const HardwareModel& model,
                                  const TranspileOptions& opts = {});

/// Merges consecutive 1Q ops on each qubit into one u3 and drops identities.
Circuit merge_single_qubit_runs(const Circuit& c);

}  // namespace cartan
