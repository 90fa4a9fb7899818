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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "cartan/plan_io.hpp"

namespace cartan::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const std::string& context) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("bad number '" + s + "' in '" + context + "'");
  }
  if (used != s.size() || !std::isfinite(v))
    throw UsageError("bad number '" + s + "' in '" + context + "'");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw UsageError("cannot write '" + path + "'");
}

// Output goes to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_file(path, text);
}

struct ModelFlags {
  std::string coupling = "xx";
  double m = HardwareModel{}.m;
  double b = HardwareModel{}.b;

  void add(CLI::App* app) {
    app->add_option("--coupling", coupling, "Native coupling: xx or xx+yy")
        ->capture_default_str();
    app->add_option("--m", m, "Error per unit latency")->capture_default_str();
    app->add_option("--b", b, "Latency-independent error")->capture_default_str();
  }
  HardwareModel model() const {
    HardwareModel h;
    h.coupling = parse_coupling(coupling);
    h.m = m;
    h.b = b;
    return h;
  }
};

std::vector<BasisGate> parse_bases(const std::vector<std::string>& specs) {
  std::vector<BasisGate> out;
  for (const auto& s : specs)
    for (const BasisGate& g : parse_instruction_set(s).bases) out.push_back(g);
  return out;
}

// ---- decompose ----

struct DecomposeArgs {
  std::string gate, matrix, out;
  std::vector<std::string> basis;
  std::string objective = "min_count";
  ModelFlags model;
};

int cmd_decompose(const DecomposeArgs& a, std::ostream& out) {
  if (a.gate.empty() == a.matrix.empty())
    throw UsageError("decompose needs exactly one of --gate or --matrix");
  const auto wall0 = Clock::now();
  const C4 target = a.gate.empty() ? matrix_from_json_text(read_file(a.matrix)) : named_gate(a.gate);
  const std::vector<BasisGate> bases = parse_bases(a.basis);
  const HardwareModel model = a.model.model();

  const auto t0 = Clock::now();
  const SynthesisPlan plan =
      bases.size() == 1 ? compile_2q(target, bases[0])
                        : compile_2q_mixed(target, bases, parse_objective(a.objective), model);
  const double compile_ms = ms_since(t0);

  if (!a.out.empty()) write_file(a.out, plan_to_json(plan) + "\n");
  fmt::print(out, "target_coord: ({:.12f}, {:.12f}, {:.12f})\n", plan.target_coord.x,
             plan.target_coord.y, plan.target_coord.z);
  fmt::print(out, "basis_count: {}\n", plan.basis_count);
  fmt::print(out, "lower_bound: {}\n", plan.bound.n_lower);
  fmt::print(out, "residual: {:.3e}\n", plan.residual_achieved);
  fmt::print(out, "method: {}\n", plan.method);
  fmt::print(out, "compile_ms: {:.3f}\n", compile_ms);
  fmt::print(out, "wall_ms: {:.3f}\n", ms_since(wall0));
  return kOk;
}

// ---- transpile ----

struct TranspileArgs {
  std::string in, out, format = "json";
  std::vector<std::string> basis;
  std::string objective = "min_count";
  bool dense_check = false;
  int workers = 0;
  ModelFlags model;
};

constexpr int kDenseLimit = 10;
constexpr double kCircuitTol = 1e-6;

int cmd_transpile(const TranspileArgs& a, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(a.in);
  const Circuit c = parse_circuit(text);
  c.validate();
  const std::vector<BasisGate> bases = parse_bases(a.basis);
  const HardwareModel model = a.model.model();
  TranspileOptions opts;
  opts.workers = a.workers;
  const TranspileResult r =
      transpile_circuit(c, bases, parse_objective(a.objective), model, opts);

  int code = kOk;
  double dense = -1;
  if (a.dense_check) {
    if (c.n_qubits > kDenseLimit)
      throw UsageError(fmt::format("--dense-check supports at most {} qubits", kDenseLimit));
    dense = distance_up_to_phase(dense_unitary(c), dense_unitary(r.circuit));
    if (!(dense < kCircuitTol)) code = kVerifyFailed;
  }

  // Basis invocations are opaque 4x4 ops, which only JSON can carry.
  if (a.format == "qasm" && r.report.basis_count > 0)
    throw UsageError("QASM cannot carry basis-gate matrices; use --format json");
  const CircuitFormat f = a.format == "qasm" ? CircuitFormat::Qasm : CircuitFormat::Json;
  if (code == kOk) emit(a.out, emit_circuit(r.circuit, f), out);

  std::ostream& rep = a.out.empty() || a.out == "-" ? err : out;
  fmt::print(rep, "two_qubit_ops: {}\n", r.report.two_qubit_ops);
  fmt::print(rep, "basis_count: {}\n", r.report.basis_count);
  fmt::print(rep, "lower_bound: {}\n", r.report.lower_bound);
  fmt::print(rep, "distinct_targets: {}\n", r.report.distinct_targets);
  fmt::print(rep, "fidelity: {:.6f}\n", circuit_fidelity(r.circuit, model));
  fmt::print(rep, "latency: {:.6f}\n", circuit_latency(r.circuit, model));
  fmt::print(rep, "max_op_distance: {:.3e}\n", r.report.max_op_distance);
  if (a.dense_check) fmt::print(rep, "dense_distance: {:.3e}\n", dense);
  fmt::print(rep, "compile_ms: {:.3f}\n", r.report.compile_seconds * 1e3);
  return code;
}

// ---- bench / design ----

struct ReportArgs {
  std::vector<std::string> benchmarks;
  std::string out, format = "csv";
  std::string objective = "max_fidelity";
  std::uint64_t seed = 0;
  int workers = 0;
  ModelFlags model;
};

std::vector<Benchmark> collect_benchmarks(const ReportArgs& a) {
  std::vector<Benchmark> out;
  for (const auto& s : a.benchmarks)
    for (Benchmark& b : parse_benchmarks(s, a.seed)) out.push_back(std::move(b));
  if (out.empty()) throw UsageError("no benchmarks given");
  return out;
}

EvalOptions eval_options(const ReportArgs& a) {
  EvalOptions o;
  o.objective = parse_objective(a.objective);
  o.weights = ObjectiveWeights::for_objective(o.objective);
  o.transpile.workers = a.workers;
  return o;
}

void check_format(const std::string& f) {
  if (f != "csv" && f != "json") throw UsageError("--format must be csv or json");
}

int cmd_bench(const ReportArgs& a, const std::vector<std::string>& sets, std::ostream& out) {
  check_format(a.format);
  if (sets.empty()) throw UsageError("bench needs at least one --basis");
  const auto benches = collect_benchmarks(a);
  const HardwareModel model = a.model.model();
  const EvalOptions opts = eval_options(a);
  std::vector<EvalRow> rows;
  for (const auto& s : sets)
    for (EvalRow& r : evaluate_instruction_set(benches, parse_instruction_set(s), model, opts))
      rows.push_back(std::move(r));
  emit(a.out, a.format == "csv" ? eval_rows_csv(rows) : eval_rows_json(rows) + "\n", out);
  return kOk;
}

int cmd_design(const ReportArgs& a, const std::vector<std::string>& grid_specs, int top,
               std::ostream& out) {
  check_format(a.format);
  std::vector<InstructionSet> grid;
  for (const auto& g : grid_specs)
    for (InstructionSet& s : parse_grid(g)) grid.push_back(std::move(s));
  if (grid.empty()) throw UsageError("design grid is empty");
  const auto benches = collect_benchmarks(a);
  auto rows = sweep_design_space(benches, grid, a.model.model(), eval_options(a));
  if (top > 0 && rows.size() > static_cast<std::size_t>(top)) rows.resize(static_cast<std::size_t>(top));
  emit(a.out, a.format == "csv" ? sweep_csv(rows) : sweep_json(rows) + "\n", out);
  return kOk;
}

// ---- verify ----

struct VerifyArgs {
  std::string plan;
  std::vector<std::string> circuits;
  double tol = 0;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (a.plan.empty() == a.circuits.empty())
    throw UsageError("verify needs either --plan or two --circuit files");
  double d = 0, tol = a.tol;
  if (!a.plan.empty()) {
    d = plan_from_json(read_file(a.plan)).residual_achieved;
    if (tol <= 0) tol = 1e-7;
  } else {
    if (a.circuits.size() != 2) throw UsageError("verify needs exactly two --circuit files");
    const Circuit x = parse_circuit(read_file(a.circuits[0]));
    const Circuit y = parse_circuit(read_file(a.circuits[1]));
    x.validate();
    y.validate();
    if (x.n_qubits != y.n_qubits) {
      fmt::print(out, "distance: inf (qubit counts {} and {})\nresult: FAIL\n", x.n_qubits,
                 y.n_qubits);
      return kVerifyFailed;
    }
    if (x.n_qubits > kDenseLimit)
      throw UsageError(fmt::format("circuit comparison supports at most {} qubits", kDenseLimit));
    d = distance_up_to_phase(dense_unitary(x), dense_unitary(y));
    if (tol <= 0) tol = kCircuitTol;
  }
  const bool ok = d < tol;
  fmt::print(out, "distance: {:.3e}\ntolerance: {:.1e}\nresult: {}\n", d, tol, ok ? "OK" : "FAIL");
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

double parse_angle(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw UsageError("empty angle");
  if (s.rfind("pi/", 0) == 0 || s.rfind("-pi/", 0) == 0) {
    const bool neg = s[0] == '-';
    const std::string d = s.substr(neg ? 4 : 3);
    std::size_t used = 0;
    long den = 0;
    try {
      den = std::stol(d, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != d.size() || den == 0)
      throw UsageError("bad angle '" + raw + "': expected pi/<nonzero int>");
    return (neg ? -kPi : kPi) / static_cast<double>(den);
  }
  if (s.size() > 3 && s.compare(s.size() - 3, 3, "deg") == 0)
    return parse_number(s.substr(0, s.size() - 3), raw) * kPi / 180;
  return parse_number(s, raw);
}

namespace {

std::pair<std::string, std::string> split_template(const std::string& text) {
  const std::string s = trim(text);
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {s, ""};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

std::size_t arity(const std::string& kind, const std::string& spec) {
  if (kind == "da") return 1;
  if (kind == "db") return 2;
  if (kind == "dc") return 3;
  throw UsageError("unknown basis template in '" + spec + "' (expected cx, da, db or dc)");
}

BasisGate make_basis(const std::string& kind, const std::vector<double>& a,
                     const std::string& label) {
  try {
    if (kind == "da") return BasisGate::da(a[0], label);
    if (kind == "db") return BasisGate::db(a[0], a[1], label);
    return BasisGate::dc(a[0], a[1], a[2], label);
  } catch (const std::invalid_argument& e) {
    throw UsageError("basis '" + label + "': " + e.what());
  }
}

void check_domain(const std::string& kind, const std::vector<double>& a,
                  const std::string& spec) {
  const double q = kPi / 4 + 1e-12;
  bool ok = a[0] > 0 && a[0] <= q;
  if (kind != "da") ok = ok && a[1] > 0 && a[1] <= a[0] + 1e-12;
  if (kind == "dc") ok = ok && a[2] != 0 && std::abs(a[2]) <= a[1] + 1e-12;
  if (!ok)
    throw UsageError("basis '" + spec + "' is outside its template domain " +
                     (kind == "da"   ? "(0 < tx <= pi/4)"
                      : kind == "db" ? "(0 < ty <= tx <= pi/4)"
                                     : "(0 < |tz| <= ty <= tx <= pi/4)"));
}

}  // namespace

BasisGate parse_basis(const std::string& text) {
  const auto [kind, body] = split_template(text);
  const std::string label = trim(text);
  if (kind == "cx" && body.empty()) return BasisGate::da(kPi / 4, "cx");
  const std::size_t n = arity(kind, text);
  const auto parts = split(body, ',');
  if (body.empty() || parts.size() != n)
    throw UsageError(fmt::format("basis '{}' needs {} angle(s)", label, n));
  std::vector<double> a;
  for (const auto& p : parts) a.push_back(parse_angle(p));
  check_domain(kind, a, label);
  return make_basis(kind, a, label);
}

InstructionSet parse_instruction_set(const std::string& text) {
  InstructionSet s;
  for (const auto& part : split(text, '+')) {
    if (part.empty()) throw UsageError("empty basis spec in '" + text + "'");
    s.bases.push_back(parse_basis(part));
  }
  if (s.bases.empty()) throw UsageError("empty instruction set");
  return s;
}

std::vector<Benchmark> parse_benchmarks(const std::string& text, std::uint64_t seed) {
  const auto [name, body] = split_template(text);
  if (body.empty()) throw UsageError("benchmark '" + text + "' needs sizes, e.g. qft:5,7");
  std::vector<Benchmark> out;
  for (const auto& p : split(body, ',')) {
    const double v = parse_number(p, text);
    if (v < 1 || v > 64 || v != std::floor(v))
      throw UsageError("bad benchmark size '" + p + "' in '" + text + "'");
    const int n = static_cast<int>(v);
    try {
      out.push_back({fmt::format("{}{}", name, n), generate_benchmark(name, n, seed)});
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

std::vector<InstructionSet> parse_grid(const std::string& text) {
  const auto [kind, body] = split_template(text);
  const std::string spec = trim(text);
  if (kind == "cx" && body.empty()) return {InstructionSet{{parse_basis("cx")}}};
  const std::size_t n = arity(kind, spec);
  const auto parts = split(body, ',');
  if (body.empty() || parts.size() != n)
    throw UsageError(fmt::format("grid '{}' needs {} angle(s) or range(s)", spec, n));

  std::vector<std::vector<std::string>> axes;
  for (const auto& p : parts) {
    const auto dots = p.find("..");
    if (dots == std::string::npos) {
      axes.push_back({p});
      continue;
    }
    const auto at = p.find('@', dots);
    if (at == std::string::npos) throw UsageError("range '" + p + "' needs @<count>");
    const double lo = parse_angle(p.substr(0, dots));
    const double hi = parse_angle(p.substr(dots + 2, at - dots - 2));
    const double cnt = parse_number(p.substr(at + 1), p);
    if (cnt < 0 || cnt != std::floor(cnt) || cnt > 1e6)
      throw UsageError("bad range count in '" + p + "'");
    std::vector<std::string> vals;
    const long c = static_cast<long>(cnt);
    for (long i = 0; i < c; ++i)
      vals.push_back(fmt::format("{:.17g}", c == 1 ? lo : lo + (hi - lo) * i / (c - 1)));
    axes.push_back(std::move(vals));
  }

  std::vector<InstructionSet> grid;
  std::vector<std::size_t> idx(n, 0);
  for (const auto& ax : axes)
    if (ax.empty()) return grid;
  while (true) {
    std::vector<double> a;
    std::string label = kind + ":";
    for (std::size_t k = 0; k < n; ++k) {
      a.push_back(parse_angle(axes[k][idx[k]]));
      label += (k ? "," : "") + (axes[k].size() == 1 ? axes[k][0] : fmt::format("{:.6g}", a.back()));
    }
    check_domain(kind, a, label);
    grid.push_back(InstructionSet{{make_basis(kind, a, label)}});
    std::size_t k = n;
    while (k-- > 0) {
      if (++idx[k] < axes[k].size()) break;
      idx[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return grid;
}

C4 named_gate(const std::string& name) {
  if (name == "cx" || name == "cnot") return gates::CX();
  if (name == "swap") return gates::SWAP();
  if (name == "cz") {
    C4 m = C4::identity();
    m(3, 3) = -1;
    return m;
  }
  if (name == "iswap") {
    C4 m = C4::identity();
    m(1, 1) = m(2, 2) = 0;
    m(1, 2) = m(2, 1) = cplx{0, 1};
    return m;
  }
  throw UsageError("unknown gate '" + name + "' (expected cx, cz, swap or iswap)");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-qubit gate synthesis and instruction-set design"};
  app.name(args.empty() ? "cartan" : args[0]);
  app.require_subcommand(1);

  DecomposeArgs dec;
  auto* d = app.add_subcommand("decompose", "Compile one 2Q gate into a basis");
  d->add_option("--gate", dec.gate, "Named gate: cx, cz, swap, iswap");
  d->add_option("--matrix", dec.matrix, "JSON file with a 4x4 matrix");
  d->add_option("--basis", dec.basis, "Basis spec, e.g. da:pi/4 (repeat for a mixed set)")
      ->required();
  d->add_option("--objective", dec.objective, "min_count, min_latency or max_fidelity")
      ->capture_default_str();
  d->add_option("-o,--out", dec.out, "Write the plan JSON here");
  dec.model.add(d);

  TranspileArgs tr;
  auto* t = app.add_subcommand("transpile", "Transpile a QASM or JSON circuit");
  t->add_option("--in", tr.in, "Input circuit")->required();
  t->add_option("-o,--out", tr.out, "Output circuit (default stdout)");
  t->add_option("--format", tr.format, "Output format: json (default) or qasm when no basis gate is emitted")
      ->check(CLI::IsMember({"qasm", "json"}));
  t->add_option("--basis", tr.basis, "Basis spec (repeatable)")->required();
  t->add_option("--objective", tr.objective, "Per-op plan selection")->capture_default_str();
  t->add_flag("--dense-check", tr.dense_check, "Compare dense unitaries before and after");
  t->add_option("--workers", tr.workers, "Worker threads (0: CARTAN_WORKERS or 1)");
  tr.model.add(t);

  ReportArgs bench;
  std::vector<std::string> bench_sets;
  auto* b = app.add_subcommand("bench", "Evaluate instruction sets on generated benchmarks");
  b->add_option("benchmarks", bench.benchmarks, "e.g. qft:5,7 bv:8 qaoa:10 pauli:4")
      ->required();
  b->add_option("--basis", bench_sets, "Instruction set, e.g. cx or cx+da:pi/8 (repeatable)")
      ->required();
  b->add_option("--format", bench.format, "csv or json")->capture_default_str();
  b->add_option("-o,--out", bench.out, "Report file (default stdout)");
  b->add_option("--objective", bench.objective, "Plan selection and score")
      ->capture_default_str();
  b->add_option("--seed", bench.seed, "Generator seed (0: per-generator default)");
  b->add_option("--workers", bench.workers, "Worker threads (0: CARTAN_WORKERS or 1)");
  bench.model.add(b);

  ReportArgs design;
  std::vector<std::string> grid_specs;
  int top = 0;
  auto* g = app.add_subcommand("design", "Rank a grid of basis gates on benchmarks");
  g->add_option("benchmarks", design.benchmarks, "e.g. qaoa:10")->required();
  g->add_option("--grid", grid_specs, "Grid spec, e.g. da:pi/1000..pi/4@1000 (repeatable)");
  g->add_option("--top", top, "Keep only the best N configurations");
  g->add_option("--format", design.format, "csv or json")->capture_default_str();
  g->add_option("-o,--out", design.out, "Report file (default stdout)");
  g->add_option("--objective", design.objective, "Plan selection and score")
      ->capture_default_str();
  g->add_option("--seed", design.seed, "Generator seed (0: per-generator default)");
  g->add_option("--workers", design.workers, "Worker threads (0: CARTAN_WORKERS or 1)");
  design.model.add(g);

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Check a plan or compare two circuits");
  v->add_option("--plan", ver.plan, "Plan JSON from decompose");
  v->add_option("--circuit", ver.circuits, "Circuit file (give two)");
  v->add_option("--tol", ver.tol, "Distance tolerance (default 1e-7 plans, 1e-6 circuits)");

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*d) return cmd_decompose(dec, out);
    if (*t) return cmd_transpile(tr, out, err);
    if (*b) return cmd_bench(bench, bench_sets, out);
    if (*g) return cmd_design(design, grid_specs, top, out);
    return cmd_verify(ver, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const CircuitError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const PlanFormatError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const NotUnitary& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Unsupported& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace cartan::cli
