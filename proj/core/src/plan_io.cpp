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

#include "cartan/plan_io.hpp"

#include "json.hpp"

namespace cartan {

namespace {

using json = nlohmann::json;

json mat_json(const C4& m) {
  json a = json::array();
  for (const auto& x : m.e) a.push_back({x.real(), x.imag()});
  return a;
}

C4 mat_from(const json& a) {
  if (!a.is_array() || a.size() != 16) throw PlanFormatError("matrix must hold 16 [re, im] pairs");
  C4 m;
  for (std::size_t i = 0; i < 16; ++i) {
    if (!a[i].is_array() || a[i].size() != 2) throw PlanFormatError("matrix entries are [re, im] pairs");
    m.e[i] = {a[i][0].get<double>(), a[i][1].get<double>()};
  }
  return m;
}

const char* tag_name(TemplateClass::Tag t) {
  switch (t) {
    case TemplateClass::Tag::Da:
      return "Da";
    case TemplateClass::Tag::Db:
      return "Db";
    default:
      return "Dc";
  }
}

}  // namespace

std::string matrix_to_json(const C4& m) { return mat_json(m).dump(); }

C4 matrix_from_json_text(const std::string& text) {
  try {
    const json j = json::parse(text);
    return mat_from(j.is_object() ? j.at("matrix") : j);
  } catch (const json::exception& e) {
    throw PlanFormatError(std::string("invalid matrix JSON: ") + e.what());
  }
}

std::string plan_to_json(const SynthesisPlan& plan) {
  json bases = json::array();
  for (const auto& b : plan.bases)
    bases.push_back({{"label", b.label},
                     {"template", tag_name(b.tmpl.tag)},
                     {"coord", {b.kak.coord.x, b.kak.coord.y, b.kak.coord.z}},
                     {"matrix", mat_json(b.matrix)}});
  json steps = json::array();
  for (const auto& s : plan.steps) {
    if (s.kind == Step::Kind::Basis) {
      steps.push_back({{"basis", s.basis}});
    } else {
      const auto a = zyz_angles(s.u);
      steps.push_back({{"qubit", s.qubit}, {"zyz", {a[0], a[1], a[2]}}});
    }
  }
  json j;
  j["schema"] = 1;
  j["method"] = plan.method;
  j["basis_count"] = plan.basis_count;
  j["residual_achieved"] = plan.residual_achieved;
  j["target"] = {{"coord", {plan.target_coord.x, plan.target_coord.y, plan.target_coord.z}},
                 {"matrix", mat_json(plan.target)}};
  j["lower_bound"] = {{"n_lower", plan.bound.n_lower},
                      {"k_t", plan.bound.k_t_value},
                      {"applicable", plan.bound.applicable}};
  j["bases"] = std::move(bases);
  j["steps"] = std::move(steps);
  return j.dump(1) + "\n";
}

SynthesisPlan plan_from_json(const std::string& text) {
  SynthesisPlan p;
  try {
    const json j = json::parse(text);
    if (j.value("schema", 0) != 1) throw PlanFormatError("unsupported plan schema");
    p.method = j.value("method", "");
    p.target = mat_from(j.at("target").at("matrix"));
    for (const json& b : j.at("bases"))
      p.bases.push_back(BasisGate::from_matrix(mat_from(b.at("matrix")), b.value("label", "")));
    int count = 0;
    for (const json& s : j.at("steps")) {
      if (s.contains("basis")) {
        const int idx = s.at("basis").get<int>();
        if (idx < 0 || idx >= static_cast<int>(p.bases.size()))
          throw PlanFormatError("step references a missing basis gate");
        p.steps.push_back(Step::invoke(idx));
        ++count;
      } else {
        const int q = s.at("qubit").get<int>();
        if (q != 0 && q != 1) throw PlanFormatError("1Q step qubit must be 0 or 1");
        const auto a = s.at("zyz").get<std::array<double, 3>>();
        p.steps.push_back(Step::one(q, from_zyz(a)));
      }
    }
    p.basis_count = count;
    if (j.contains("basis_count") && j.at("basis_count").get<int>() != count)
      throw PlanFormatError("basis_count does not match the step list");
  } catch (const json::exception& e) {
    throw PlanFormatError(std::string("malformed plan: ") + e.what());
  }
  p.target_coord = cartan_coord(p.target);
  if (!p.bases.empty()) p.bound = lower_bound(p.target_coord, p.bases.front());
  p.residual_achieved = distance_up_to_phase(assemble(p), p.target);
  return p;
}

}  // namespace cartan
