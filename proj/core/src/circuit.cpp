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

#include "cartan/circuit.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

namespace cartan {

namespace {

using json = nlohmann::json;

struct GateInfo {
  int arity;
  int n_params;
};

const std::map<std::string, GateInfo>& vocabulary() {
  static const std::map<std::string, GateInfo> v = {
      {"h", {1, 0}},  {"x", {1, 0}},  {"y", {1, 0}},   {"z", {1, 0}},   {"s", {1, 0}},
      {"sdg", {1, 0}}, {"rx", {1, 1}}, {"ry", {1, 1}},  {"rz", {1, 1}},  {"u3", {1, 3}},
      {"cx", {2, 0}}, {"swap", {2, 0}}, {"crz", {2, 1}}, {"rzz", {2, 1}}};
  return v;
}

// External (QASM) parameters to internal angles and back.
std::vector<double> to_internal(const std::string& name, const std::vector<double>& p) {
  if (name == "u3") return {-p[1] / 2, -p[0] / 2, -p[2] / 2};
  std::vector<double> out;
  for (double x : p) out.push_back(-x / 2);
  return out;
}

std::vector<double> to_external(const std::string& name, const std::vector<double>& p) {
  if (name == "u3") return {-2 * p[1], -2 * p[0], -2 * p[2]};
  std::vector<double> out;
  for (double x : p) out.push_back(-2 * x);
  return out;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

CircuitError::CircuitError(const std::string& msg, int line_, int column_)
    : std::runtime_error(line_ > 0 ? msg + " at line " + std::to_string(line_) + ", column " +
                                         std::to_string(column_)
                                   : msg),
      line(line_),
      column(column_) {}

GateOp GateOp::named(std::string name, std::vector<int> qubits, std::vector<double> params) {
  GateOp g;
  g.name = std::move(name);
  g.qubits = std::move(qubits);
  g.params = std::move(params);
  return g;
}

GateOp GateOp::opaque(const C4& m, int q0, int q1, std::string label) {
  GateOp g;
  g.qubits = {q0, q1};
  g.matrix = m;
  g.label = std::move(label);
  return g;
}

GateOp GateOp::u3_from(const C2& u, int qubit) {
  const auto a = zyz_angles(u);
  return named("u3", {qubit}, {a[0], a[1], a[2]});
}

C2 GateOp::matrix_1q() const {
  if (qubits.size() != 1) throw CircuitError("matrix_1q on a two-qubit op");
  if (name == "h") return gates::H();
  if (name == "x") return gates::X();
  if (name == "y") return gates::Y();
  if (name == "z") return gates::Z();
  if (name == "s") return gates::S();
  if (name == "sdg") return adjoint(gates::S());
  if (name == "rx") return rotation_1q(Axis::X, params.at(0));
  if (name == "ry") return rotation_1q(Axis::Y, params.at(0));
  if (name == "rz") return rotation_1q(Axis::Z, params.at(0));
  if (name == "u3") return from_zyz({params.at(0), params.at(1), params.at(2)});
  throw CircuitError("unknown gate '" + name + "'");
}

C4 GateOp::matrix_2q() const {
  if (qubits.size() != 2) throw CircuitError("matrix_2q on a one-qubit op");
  if (matrix) return *matrix;
  if (name == "cx") return gates::CX();
  if (name == "swap") return gates::SWAP();
  if (name == "rzz") return rotation_2q(Axis::Z, params.at(0));
  if (name == "crz") {
    C4 m = C4::identity();
    const C2 r = rotation_1q(Axis::Z, params.at(0));
    m(2, 2) = r(0, 0);
    m(2, 3) = r(0, 1);
    m(3, 2) = r(1, 0);
    m(3, 3) = r(1, 1);
    return m;
  }
  throw CircuitError("unknown gate '" + name + "'");
}

bool operator==(const GateOp& a, const GateOp& b) {
  if (a.name != b.name || a.qubits != b.qubits || a.params != b.params || a.label != b.label)
    return false;
  if (a.matrix.has_value() != b.matrix.has_value()) return false;
  return !a.matrix || a.matrix->e == b.matrix->e;
}

std::size_t Circuit::two_qubit_count() const {
  std::size_t n = 0;
  for (const auto& op : ops) n += op.is_two_qubit();
  return n;
}

void Circuit::validate() const {
  if (n_qubits < 1) throw CircuitError("circuit needs at least one qubit");
  for (const auto& op : ops) {
    if (op.qubits.empty() || op.qubits.size() > 2) throw CircuitError("ops act on one or two qubits");
    for (int q : op.qubits)
      if (q < 0 || q >= n_qubits)
        throw CircuitError("qubit index " + std::to_string(q) + " out of range");
    if (op.is_two_qubit() && op.qubits[0] == op.qubits[1])
      throw CircuitError("two-qubit op on a repeated qubit");
    if (op.is_opaque()) {
      if (!op.matrix || !op.is_two_qubit()) throw CircuitError("opaque ops need a 4x4 matrix");
      if (unitarity_error(*op.matrix) > 1e-8) throw CircuitError("opaque matrix is not unitary");
    } else {
      const auto it = vocabulary().find(op.name);
      if (it == vocabulary().end()) throw CircuitError("unknown gate '" + op.name + "'");
      if (static_cast<int>(op.qubits.size()) != it->second.arity ||
          static_cast<int>(op.params.size()) != it->second.n_params)
        throw CircuitError("wrong operand count for '" + op.name + "'");
    }
  }
}

// ---- QASM subset ----

namespace {

class QasmReader {
 public:
  explicit QasmReader(const std::string& text) : s_(text) {}

  Circuit read() {
    Circuit c;
    std::map<std::string, std::pair<int, int>> regs;  // name -> (offset, size)
    while (true) {
      skip_space();
      if (pos_ >= s_.size()) break;
      const int line = line_, col = col_;
      const std::string word = ident();
      if (word.empty()) fail("expected a statement", line, col);
      if (word == "OPENQASM") {
        skip_space();
        const std::string ver = until(';');
        if (ver.rfind("2", 0) != 0) fail("unsupported OPENQASM version", line, col);
        expect(';');
        continue;
      }
      if (word == "include") {
        until(';');
        expect(';');
        continue;
      }
      if (word == "qreg" || word == "creg") {
        skip_space();
        const std::string name = ident();
        expect('[');
        const int size = integer();
        expect(']');
        expect(';');
        if (word == "qreg") {
          regs[name] = {c.n_qubits, size};
          c.n_qubits += size;
        }
        continue;
      }
      if (word == "barrier") {
        until(';');
        expect(';');
        continue;
      }
      const auto it = vocabulary().find(word);
      if (it == vocabulary().end()) fail("unknown gate '" + word + "'", line, col);
      std::vector<double> params;
      skip_space();
      if (peek() == '(') {
        ++pos_;
        ++col_;
        while (true) {
          params.push_back(expr());
          skip_space();
          if (peek() == ',') {
            advance();
            continue;
          }
          expect(')');
          break;
        }
      }
      if (static_cast<int>(params.size()) != it->second.n_params)
        fail("wrong parameter count for '" + word + "'", line, col);
      std::vector<int> qubits;
      while (true) {
        skip_space();
        const int ql = line_, qc = col_;
        const std::string reg = ident();
        const auto r = regs.find(reg);
        if (r == regs.end()) fail("unknown register '" + reg + "'", ql, qc);
        expect('[');
        const int idx = integer();
        expect(']');
        if (idx < 0 || idx >= r->second.second) fail("qubit index out of range", ql, qc);
        qubits.push_back(r->second.first + idx);
        skip_space();
        if (peek() == ',') {
          advance();
          continue;
        }
        break;
      }
      expect(';');
      if (static_cast<int>(qubits.size()) != it->second.arity)
        fail("wrong qubit count for '" + word + "'", line, col);
      if (qubits.size() == 2 && qubits[0] == qubits[1]) fail("repeated qubit", line, col);
      c.ops.push_back(GateOp::named(word, qubits, to_internal(word, params)));
    }
    if (c.n_qubits == 0) throw CircuitError("no qreg declared");
    return c;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  [[noreturn]] void fail(const std::string& msg, int line, int col) {
    throw CircuitError(msg, line, col);
  }
  [[noreturn]] void fail(const std::string& msg) { fail(msg, line_, col_); }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        advance();
      } else if (s_.compare(pos_, 2, "//") == 0) {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }
  std::string ident() {
    skip_space();
    std::string w;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      w += s_[pos_], advance();
    return w;
  }
  std::string until(char c) {
    std::string w;
    while (pos_ < s_.size() && s_[pos_] != c) w += s_[pos_], advance();
    return w;
  }
  void expect(char c) {
    skip_space();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }
  int integer() {
    skip_space();
    std::string w;
    while (std::isdigit(static_cast<unsigned char>(peek()))) w += peek(), advance();
    if (w.empty()) fail("expected an integer");
    return std::stoi(w);
  }
  // expr := term (('+'|'-') term)*; term := unary (('*'|'/') unary)*
  double expr() {
    double v = term();
    while (true) {
      skip_space();
      if (peek() == '+') {
        advance();
        v += term();
      } else if (peek() == '-') {
        advance();
        v -= term();
      } else {
        return v;
      }
    }
  }
  double term() {
    double v = unary();
    while (true) {
      skip_space();
      if (peek() == '*') {
        advance();
        v *= unary();
      } else if (peek() == '/') {
        advance();
        v /= unary();
      } else {
        return v;
      }
    }
  }
  double unary() {
    skip_space();
    if (peek() == '-') {
      advance();
      return -unary();
    }
    if (peek() == '+') {
      advance();
      return unary();
    }
    if (peek() == '(') {
      advance();
      const double v = expr();
      expect(')');
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(peek()))) {
      const std::string w = ident();
      if (w == "pi") return kPi;
      fail("unknown symbol '" + w + "'");
    }
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s_.substr(pos_, 40), &used);
    } catch (const std::exception&) {
      fail("expected a number");
    }
    for (std::size_t i = 0; i < used; ++i) advance();
    return v;
  }
};

}  // namespace

Circuit parse_qasm(const std::string& text) {
  Circuit c = QasmReader(text).read();
  c.validate();
  return c;
}

std::string emit_qasm(const Circuit& c) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << c.n_qubits << "];\n";
  for (const auto& op : c.ops) {
    if (op.is_opaque()) throw CircuitError("opaque ops can only be emitted as JSON");
    os << op.name;
    if (!op.params.empty()) {
      os << '(';
      const auto ext = to_external(op.name, op.params);
      for (std::size_t i = 0; i < ext.size(); ++i) os << (i ? "," : "") << fmt_double(ext[i]);
      os << ')';
    }
    for (std::size_t i = 0; i < op.qubits.size(); ++i)
      os << (i ? "," : " ") << "q[" << op.qubits[i] << ']';
    os << ";\n";
  }
  return os.str();
}

// ---- JSON ----

namespace {

json matrix_json(const C4& m) {
  json a = json::array();
  for (const auto& x : m.e) a.push_back({x.real(), x.imag()});
  return a;
}

C4 matrix_from_json(const json& a) {
  if (!a.is_array() || a.size() != 16) throw CircuitError("matrix must hold 16 [re, im] pairs");
  C4 m;
  for (std::size_t i = 0; i < 16; ++i) {
    const json& p = a[i];
    if (!p.is_array() || p.size() != 2) throw CircuitError("matrix entries are [re, im] pairs");
    m.e[i] = {p[0].get<double>(), p[1].get<double>()};
  }
  return m;
}

}  // namespace

Circuit parse_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CircuitError(std::string("invalid JSON: ") + e.what());
  }
  Circuit c;
  try {
    c.n_qubits = j.at("n_qubits").get<int>();
    for (const json& o : j.at("ops")) {
      GateOp op;
      op.qubits = o.at("qubits").get<std::vector<int>>();
      if (o.contains("matrix")) {
        op.matrix = matrix_from_json(o.at("matrix"));
        if (o.contains("label")) op.label = o.at("label").get<std::string>();
      } else {
        op.name = o.at("name").get<std::string>();
        if (!vocabulary().count(op.name)) throw CircuitError("unknown gate '" + op.name + "'");
        const auto ext = o.value("params", std::vector<double>{});
        if (static_cast<int>(ext.size()) != vocabulary().at(op.name).n_params)
          throw CircuitError("wrong parameter count for '" + op.name + "'");
        op.params = to_internal(op.name, ext);
      }
      c.ops.push_back(std::move(op));
    }
  } catch (const json::exception& e) {
    throw CircuitError(std::string("malformed circuit JSON: ") + e.what());
  }
  c.validate();
  return c;
}

std::string emit_json(const Circuit& c) {
  json ops = json::array();
  for (const auto& op : c.ops) {
    json o;
    if (op.is_opaque()) {
      o["matrix"] = matrix_json(*op.matrix);
      o["qubits"] = op.qubits;
      if (!op.label.empty()) o["label"] = op.label;
    } else {
      o["name"] = op.name;
      o["qubits"] = op.qubits;
      o["params"] = to_external(op.name, op.params);
    }
    ops.push_back(std::move(o));
  }
  json j;
  j["n_qubits"] = c.n_qubits;
  j["ops"] = std::move(ops);
  return j.dump(1) + "\n";
}

Circuit parse_circuit(const std::string& text) {
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    return ch == '{' ? parse_json(text) : parse_qasm(text);
  }
  throw CircuitError("empty circuit input");
}

std::string emit_circuit(const Circuit& c, CircuitFormat f) {
  return f == CircuitFormat::Json ? emit_json(c) : emit_qasm(c);
}

// ---- dense simulation ----

DenseUnitary dense_unitary(const Circuit& c) {
  if (c.n_qubits > 12) throw CircuitError("dense unitary limited to 12 qubits");
  const int dim = 1 << c.n_qubits;
  DenseUnitary u;
  u.dim = dim;
  u.data.assign(static_cast<std::size_t>(dim) * dim, cplx{});
  for (int i = 0; i < dim; ++i) u.at(i, i) = 1;
  for (const auto& op : c.ops) {
    if (!op.is_two_qubit()) {
      const C2 g = op.matrix_1q();
      const int bit = c.n_qubits - 1 - op.qubits[0];
      for (int col = 0; col < dim; ++col)
        for (int r = 0; r < dim; ++r) {
          if (r & (1 << bit)) continue;
          const int r1 = r | (1 << bit);
          const cplx a = u.at(r, col), b = u.at(r1, col);
          u.at(r, col) = g(0, 0) * a + g(0, 1) * b;
          u.at(r1, col) = g(1, 0) * a + g(1, 1) * b;
        }
    } else {
      const C4 g = op.matrix_2q();
      const int b0 = c.n_qubits - 1 - op.qubits[0], b1 = c.n_qubits - 1 - op.qubits[1];
      for (int col = 0; col < dim; ++col)
        for (int r = 0; r < dim; ++r) {
          if ((r & (1 << b0)) || (r & (1 << b1))) continue;
          int idx[4];
          cplx v[4];
          for (int k = 0; k < 4; ++k) {
            idx[k] = r | ((k >> 1) ? (1 << b0) : 0) | ((k & 1) ? (1 << b1) : 0);
            v[k] = u.at(idx[k], col);
          }
          for (int k = 0; k < 4; ++k) {
            cplx s{};
            for (int l = 0; l < 4; ++l) s += g(k, l) * v[l];
            u.at(idx[k], col) = s;
          }
        }
    }
  }
  return u;
}

double distance_up_to_phase(const DenseUnitary& a, const DenseUnitary& b) {
  if (a.dim != b.dim) throw std::invalid_argument("dimension mismatch");
  cplx t{};
  for (std::size_t i = 0; i < a.data.size(); ++i) t += std::conj(b.data[i]) * a.data[i];
  const cplx phi = std::abs(t) > 0 ? t / std::abs(t) : cplx{1, 0};
  double s = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += std::norm(a.data[i] - phi * b.data[i]);
  return std::sqrt(s);
}

}  // namespace cartan
