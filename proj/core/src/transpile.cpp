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

#include "cartan/transpile.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <map>
#include <thread>

namespace cartan {

namespace {

bool near_identity(const C2& u) { return distance_up_to_phase(u, C2::identity()) < 1e-12; }

// Orders 4x4 matrices bitwise for the plan cache.
struct MatrixLess {
  bool operator()(const C4& a, const C4& b) const {
    return std::memcmp(a.e.data(), b.e.data(), sizeof(cplx) * 16) < 0;
  }
};

}  // namespace

int worker_count_from_env() {
  if (const char* v = std::getenv("CARTAN_WORKERS")) {
    const int n = std::atoi(v);
    if (n > 0) return n;
  }
  return 1;
}

Circuit merge_single_qubit_runs(const Circuit& c) {
  Circuit out;
  out.n_qubits = c.n_qubits;
  std::vector<std::optional<C2>> pending(static_cast<std::size_t>(c.n_qubits));
  std::vector<std::optional<GateOp>> single(static_cast<std::size_t>(c.n_qubits));
  auto flush = [&](int q) {
    auto& p = pending[static_cast<std::size_t>(q)];
    auto& s = single[static_cast<std::size_t>(q)];
    if (s) {
      out.ops.push_back(*s);  // a lone op is kept verbatim
    } else if (p && !near_identity(*p)) {
      out.ops.push_back(GateOp::u3_from(*p, q));
    }
    p.reset();
    s.reset();
  };
  std::vector<int> run_length(static_cast<std::size_t>(c.n_qubits), 0);
  for (const auto& op : c.ops) {
    if (op.is_two_qubit()) {
      for (int q : op.qubits) {
        flush(q);
        run_length[static_cast<std::size_t>(q)] = 0;
      }
      out.ops.push_back(op);
      continue;
    }
    const int q = op.qubits[0];
    auto& p = pending[static_cast<std::size_t>(q)];
    auto& s = single[static_cast<std::size_t>(q)];
    int& len = run_length[static_cast<std::size_t>(q)];
    p = p ? op.matrix_1q() * *p : op.matrix_1q();
    s = len == 0 ? std::optional<GateOp>(op) : std::nullopt;
    ++len;
  }
  for (int q = 0; q < c.n_qubits; ++q) flush(q);
  return out;
}

TranspileResult transpile_circuit(const Circuit& c, const std::vector<BasisGate>& bases,
                                  Objective objective, const HardwareModel& model,
                                  const TranspileOptions& opts) {
  c.validate();
  if (bases.empty()) throw std::invalid_argument("transpile_circuit: no basis gates");
  const auto t0 = std::chrono::steady_clock::now();

  // Distinct 2Q targets, compiled once each.
  std::map<C4, std::size_t, MatrixLess> index;
  std::vector<C4> targets;
  std::vector<std::size_t> op_target(c.ops.size(), 0);
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    if (!c.ops[i].is_two_qubit()) continue;
    const C4 m = c.ops[i].matrix_2q();
    const auto [it, inserted] = index.emplace(m, targets.size());
    if (inserted) targets.push_back(m);
    op_target[i] = it->second;
  }

  std::vector<std::optional<SynthesisPlan>> plans(targets.size());
  std::vector<std::exception_ptr> errors(targets.size());
  const int workers = opts.workers > 0 ? opts.workers : worker_count_from_env();
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < targets.size(); k = next++) {
      try {
        plans[k] = bases.size() == 1 ? compile_2q(targets[k], bases[0], opts.compile)
                                     : compile_2q_mixed(targets[k], bases, objective, model,
                                                        opts.compile);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers <= 1 || targets.size() < 2) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min<int>(workers, static_cast<int>(targets.size())); ++w)
      pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  TranspileResult res;
  TranspileReport& rep = res.report;
  rep.per_basis.assign(bases.size(), 0);
  rep.distinct_targets = targets.size();
  Circuit raw;
  raw.n_qubits = c.n_qubits;
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    const GateOp& op = c.ops[i];
    if (!op.is_two_qubit()) {
      raw.ops.push_back(op);
      continue;
    }
    const SynthesisPlan& plan = *plans[op_target[i]];
    ++rep.two_qubit_ops;
    rep.basis_count += static_cast<std::size_t>(plan.basis_count);
    rep.lower_bound += static_cast<std::size_t>(plan.bound.n_lower);
    rep.max_op_distance = std::max(rep.max_op_distance, plan.residual_achieved);
    for (const Step& s : plan.steps) {
      if (s.kind == Step::Kind::Basis) {
        const BasisGate& b = plan.bases[static_cast<std::size_t>(s.basis)];
        raw.ops.push_back(GateOp::opaque(b.matrix, op.qubits[0], op.qubits[1], b.label));
        for (std::size_t k = 0; k < bases.size(); ++k)
          if (bases[k].label == b.label) {
            ++rep.per_basis[k];
            break;
          }
      } else {
        raw.ops.push_back(GateOp::u3_from(s.u, op.qubits[static_cast<std::size_t>(s.qubit)]));
      }
    }
  }
  res.circuit = merge_single_qubit_runs(raw);
  rep.compile_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace cartan
