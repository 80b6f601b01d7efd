// Copyright 2026 The qerr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>

#include <json.hpp>

#include "qerr/logic.hpp"

namespace qerr {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "qerr-derivation";

json matrix_json(const CMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

CMatrix matrix_from(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (rows < 0 || cols < 0 || rows > 64 || cols > 64 ||
      re.size() != static_cast<std::size_t>(rows * cols) || im.size() != re.size()) {
    throw InputError("matrix entry count does not match its shape");
  }
  CMatrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c, ++k) m(i, c) = Complex(re[k].get<double>(), im[k].get<double>());
  }
  return m;
}

json node_json(const Derivation& d) {
  json j{{"rule", rule_name(d.rule)},
         {"pre", {{"snapshot", d.pre_digest}, {"delta", d.delta}}},
         {"epsilon", d.epsilon}};
  if (d.gate) {
    const GateEvidence& g = *d.gate;
    j["gate"] = json{{"index", g.index},
                     {"name", g.gate},
                     {"qubits", g.qubits},
                     {"local_rho", matrix_json(g.local_rho)},
                     {"constrained", g.constrained},
                     {"primal", g.primal},
                     {"worst_case", g.worst_case},
                     {"certificate",
                      {{"v", matrix_json(g.certificate.v)},
                       {"kappa", g.certificate.kappa},
                       {"z", matrix_json(g.certificate.z)},
                       {"t", g.certificate.t},
                       {"y0", g.certificate.y0},
                       {"digest", g.certificate_digest}}}};
  }
  if (d.step) j["tn_step"] = json{{"delta_step", d.step->delta_step}, {"post", d.step->post_digest}};
  if (d.meas) {
    const MeasEvidence& m = *d.meas;
    j["meas"] = json{{"qubit", m.qubit},
                     {"probability", m.probability},
                     {"live", m.live},
                     {"branch_snapshot", m.branch_digest},
                     {"zero_mass", m.zero_mass},
                     {"uniform_epsilon", m.uniform_epsilon}};
  }
  if (!d.children.empty()) {
    json kids = json::array();
    for (const auto& c : d.children) kids.push_back(node_json(c));
    j["children"] = std::move(kids);
  }
  return j;
}

Derivation node_from(const json& j) {
  Derivation d;
  d.rule = parse_rule_name(j.at("rule").get<std::string>());
  d.pre_digest = j.at("pre").at("snapshot").get<std::string>();
  d.delta = j.at("pre").at("delta").get<double>();
  d.epsilon = j.at("epsilon").get<double>();
  if (j.contains("gate")) {
    const json& g = j.at("gate");
    GateEvidence ev;
    ev.index = g.at("index").get<std::size_t>();
    ev.gate = g.at("name").get<std::string>();
    ev.qubits = g.at("qubits").get<std::vector<int>>();
    ev.local_rho = matrix_from(g.at("local_rho"));
    ev.constrained = g.at("constrained").get<bool>();
    ev.primal = g.at("primal").get<double>();
    ev.worst_case = g.at("worst_case").get<double>();
    const json& c = g.at("certificate");
    ev.certificate.v = matrix_from(c.at("v"));
    ev.certificate.kappa = c.at("kappa").get<double>();
    ev.certificate.z = matrix_from(c.at("z"));
    ev.certificate.t = c.at("t").get<double>();
    ev.certificate.y0 = c.at("y0").get<double>();
    ev.certificate_digest = c.at("digest").get<std::string>();
    d.gate = std::move(ev);
  }
  if (j.contains("tn_step")) {
    d.step = TnStep{j.at("tn_step").at("delta_step").get<double>(),
                    j.at("tn_step").at("post").get<std::string>()};
  }
  if (j.contains("meas")) {
    const json& m = j.at("meas");
    MeasEvidence ev;
    ev.qubit = m.at("qubit").get<int>();
    ev.probability = m.at("probability").get<std::array<double, 2>>();
    ev.live = m.at("live").get<std::array<bool, 2>>();
    ev.branch_digest = m.at("branch_snapshot").get<std::array<std::string, 2>>();
    ev.zero_mass = m.at("zero_mass").get<double>();
    ev.uniform_epsilon = m.at("uniform_epsilon").get<double>();
    d.meas = std::move(ev);
  }
  if (j.contains("children")) {
    for (const auto& c : j.at("children")) d.children.push_back(node_from(c));
  }
  return d;
}

}  // namespace

std::string write_derivation(const DerivationFile& d) {
  const DerivationHeader& h = d.header;
  json j{{"format", kFormat},
         {"version", h.version},
         {"program", h.program_digest},
         {"noise", h.noise_digest},
         {"input", h.basis.to_string()},
         {"width", h.width},
         {"branch_cap", h.branch_cap},
         {"root", node_json(d.root)}};
  return j.dump(1) + "\n";
}

DerivationFile read_derivation(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != kFormat) throw InputError("not a derivation file");
    DerivationFile d;
    d.header.version = j.at("version").get<int>();
    if (d.header.version != 1) {
      throw InputError("unsupported derivation version " + std::to_string(d.header.version));
    }
    d.header.program_digest = j.at("program").get<std::string>();
    d.header.noise_digest = j.at("noise").get<std::string>();
    d.header.basis = BasisState::parse(j.at("input").get<std::string>());
    d.header.width = j.at("width").get<int>();
    d.header.branch_cap = j.at("branch_cap").get<std::size_t>();
    d.root = node_from(j.at("root"));
    return d;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed derivation: ") + e.what());
  }
}

}  // namespace qerr
