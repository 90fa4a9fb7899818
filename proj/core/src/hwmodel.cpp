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

#include "cartan/hwmodel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace cartan {

namespace {

using json = nlohmann::json;

// Cartan coordinates of 2Q ops, memoized per matrix; transpiled circuits
// repeat a handful of basis matrices many times.
class CoordCache {
 public:
  CartanCoord operator()(const GateOp& op) {
    if (op.name == "cx") return {kPi / 4, 0, 0};
    const C4 m = op.matrix_2q();
    auto it = seen_.find(m);
    if (it == seen_.end()) it = seen_.emplace(m, cartan_coord(m)).first;
    return it->second;
  }

 private:
  struct Less {
    bool operator()(const C4& a, const C4& b) const {
      return std::memcmp(a.e.data(), b.e.data(), sizeof(cplx) * 16) < 0;
    }
  };
  std::map<C4, CartanCoord, Less> seen_;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x + 0.0);
  return buf;
}

std::string angles_text(const std::vector<CartanCoord>& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ';';
    s += num(a[i].x) + ' ' + num(a[i].y) + ' ' + num(a[i].z);
  }
  return s;
}

json angles_json(const std::vector<CartanCoord>& a) {
  json j = json::array();
  for (const auto& c : a) j.push_back({c.x, c.y, c.z});
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + '"';
}

std::vector<CartanCoord> iset_angles(const InstructionSet& s) {
  std::vector<CartanCoord> out;
  for (const auto& b : s.bases) out.push_back(b.kak.coord);
  return out;
}

bool angles_less(const std::vector<CartanCoord>& a, const std::vector<CartanCoord>& b) {
  std::vector<double> fa, fb;
  for (const auto& c : a) fa.insert(fa.end(), {c.x, c.y, c.z});
  for (const auto& c : b) fb.insert(fb.end(), {c.x, c.y, c.z});
  return fa < fb;
}

}  // namespace

double gate_latency(const BasisGate& g, const HardwareModel& model) {
  return gate_latency(g.kak.coord, model);
}

double circuit_fidelity(const Circuit& c, const HardwareModel& model) {
  CoordCache coord;
  double f = 1;
  for (const auto& op : c.ops)
    if (op.is_two_qubit()) f *= 1 - gate_error(gate_latency(coord(op), model), model);
  return f;
}

double circuit_latency(const Circuit& c, const HardwareModel& model) {
  CoordCache coord;
  double l = 0;
  for (const auto& op : c.ops)
    if (op.is_two_qubit()) l += gate_latency(coord(op), model);
  return l;
}

std::string InstructionSet::label() const {
  std::string s = "{";
  for (std::size_t i = 0; i < bases.size(); ++i) s += (i ? "," : "") + bases[i].label;
  return s + "}";
}

ObjectiveWeights ObjectiveWeights::for_objective(Objective o) {
  switch (o) {
    case Objective::MinCount:
      return {0, 0, 1};
    case Objective::MinLatency:
      return {0, 1, 0};
    default:
      return {1, 0, 0};
  }
}

std::vector<EvalRow> evaluate_instruction_set(const std::vector<Benchmark>& benchmarks,
                                              const InstructionSet& iset,
                                              const HardwareModel& model,
                                              const EvalOptions& opts) {
  if (iset.bases.empty()) throw std::invalid_argument("instruction set is empty");
  std::vector<EvalRow> rows;
  for (const auto& b : benchmarks) {
    const TranspileResult t =
        transpile_circuit(b.circuit, iset.bases, opts.objective, model, opts.transpile);
    EvalRow r;
    r.benchmark = b.name;
    r.config = iset.label();
    r.angles = iset_angles(iset);
    r.fidelity = circuit_fidelity(t.circuit, model);
    r.latency = circuit_latency(t.circuit, model);
    r.basis_count = t.report.basis_count;
    r.lower_bound = t.report.lower_bound;
    const ObjectiveWeights& w = opts.weights;
    r.score = w.fidelity * (1 - r.fidelity) + w.latency * r.latency +
              w.count * static_cast<double>(r.basis_count) +
              iset.calibration_penalty * static_cast<double>(iset.bases.size());
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SweepRow> sweep_design_space(const std::vector<Benchmark>& benchmarks,
                                         const std::vector<InstructionSet>& grid,
                                         const HardwareModel& model, const EvalOptions& opts) {
  if (grid.empty()) throw std::invalid_argument("design grid is empty");
  std::vector<SweepRow> out(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  EvalOptions cell_opts = opts;
  const int workers = opts.transpile.workers > 0 ? opts.transpile.workers : worker_count_from_env();
  cell_opts.transpile.workers = 1;  // parallelism lives at the cell level
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < grid.size(); k = next++) {
      try {
        SweepRow& row = out[k];
        row.config = grid[k].label();
        row.angles = iset_angles(grid[k]);
        row.rows = evaluate_instruction_set(benchmarks, grid[k], model, cell_opts);
        for (const auto& r : row.rows) {
          row.fidelity *= r.fidelity;
          row.latency += r.latency;
          row.basis_count += r.basis_count;
          row.lower_bound += r.lower_bound;
          row.score += r.score;
        }
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::stable_sort(out.begin(), out.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.basis_count != b.basis_count) return a.basis_count < b.basis_count;
    return angles_less(a.angles, b.angles);
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

std::string eval_rows_csv(const std::vector<EvalRow>& rows) {
  std::ostringstream os;
  os << "benchmark,config,angles,fidelity,latency,basis_count,lower_bound,score\n";
  for (const auto& r : rows)
    os << csv_field(r.benchmark) << ',' << csv_field(r.config) << ',' << angles_text(r.angles)
       << ',' << num(r.fidelity) << ',' << num(r.latency) << ',' << r.basis_count << ','
       << r.lower_bound << ',' << num(r.score) << '\n';
  return os.str();
}

std::string eval_rows_json(const std::vector<EvalRow>& rows) {
  json a = json::array();
  for (const auto& r : rows)
    a.push_back({{"benchmark", r.benchmark},
                 {"config", r.config},
                 {"angles", angles_json(r.angles)},
                 {"fidelity", r.fidelity},
                 {"latency", r.latency},
                 {"basis_count", r.basis_count},
                 {"lower_bound", r.lower_bound},
                 {"score", r.score}});
  return a.dump(1) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "rank,config,angles,fidelity,latency,basis_count,lower_bound,score\n";
  for (const auto& r : rows)
    os << r.rank << ',' << csv_field(r.config) << ',' << angles_text(r.angles) << ','
       << num(r.fidelity) << ',' << num(r.latency) << ',' << r.basis_count << ','
       << r.lower_bound << ',' << num(r.score) << '\n';
  return os.str();
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  json a = json::array();
  for (const auto& r : rows)
    a.push_back({{"rank", r.rank},
                 {"config", r.config},
                 {"angles", angles_json(r.angles)},
                 {"fidelity", r.fidelity},
                 {"latency", r.latency},
                 {"basis_count", r.basis_count},
                 {"lower_bound", r.lower_bound},
                 {"score", r.score}});
  return a.dump(1) + "\n";
}

}  // namespace cartan
