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

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qerr/bench.hpp"
#include "qerr/circuit.hpp"
#include "qerr/densesim.hpp"
#include "qerr/diamond.hpp"
#include "qerr/logic.hpp"
#include "qerr/noise.hpp"

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitCheckFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Config {
  std::string mode;
  std::string circuit;
  std::vector<std::string> noise;
  std::string input;
  int width = 128;
  bool json = false;
  std::string emit_derivation;
  std::string derivation;
  std::size_t branch_cap = qerr::kDefaultBranchCap;
  std::uint64_t seed = 1;
  // gen-bench
  std::string kind = "qaoa-line";
  int qubits = 10;
  int layers = 1;
  bool no_prep = false;
  bool no_mixer = false;
  std::string output;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qerr::InputError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw qerr::InputError(path + ": cannot write file");
}

// Prefixes parse errors with the file they came from.
template <typename F>
auto load(const std::string& path, F parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const qerr::InputError& e) {
    throw qerr::InputError(path + ": " + e.what());
  }
}

qerr::Program load_program(const std::string& path) {
  return load(path, [](const std::string& t) { return qerr::parse_program(t); });
}

qerr::NoiseModel load_noise(const std::string& path) {
  return load(path, [](const std::string& t) { return qerr::parse_noise_model(t); });
}

int threads_from_env() {
  const char* s = std::getenv("QERR_THREADS");
  if (!s || !*s) return 1;
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (*end != '\0' || v < 1) throw qerr::InputError("QERR_THREADS must be a positive integer");
  return static_cast<int>(std::min(v, 256L));
}

int effective_width(int requested, int nqubits) {
  if (requested < 1) throw qerr::InputError("--mps-width must be >= 1");
  const int half = nqubits / 2;
  if (half >= 30) return requested;
  return std::min(requested, 1 << half);
}

qerr::BasisState input_state(const Config& c, const qerr::Program& p) {
  if (c.input.empty()) return qerr::BasisState::zeros(p.nqubits());
  qerr::BasisState s = qerr::BasisState::parse(c.input);
  if (s.nqubits() != p.nqubits()) {
    throw qerr::InputError("--input has " + std::to_string(s.nqubits()) + " qubits but " + c.circuit +
                           " declares " + std::to_string(p.nqubits()));
  }
  return s;
}

const std::string& single_noise(const Config& c) {
  if (c.noise.size() != 1) throw qerr::InputError("mode '" + c.mode + "' needs exactly one --noise");
  return c.noise.front();
}

json gate_json(const qerr::GateReport& g) {
  return json{{"branch", g.branch},   {"index", g.index},           {"gate", g.gate},
              {"qubits", g.qubits},   {"delta", g.delta},           {"epsilon", g.epsilon},
              {"worst_case", g.worst_case}, {"constrained", g.constrained}};
}

std::string qubit_list(const std::vector<int>& qs) {
  std::string s;
  for (int q : qs) s += " q" + std::to_string(q);
  return s;
}

int run_analyze(const Config& c, Clock::time_point start) {
  const qerr::Program p = load_program(c.circuit);
  const qerr::NoiseModel model = load_noise(single_noise(c));
  const qerr::BasisState basis = input_state(c, p);
  const int w = effective_width(c.width, p.nqubits());
  qerr::AnalyzeOptions opts;
  opts.branch_cap = c.branch_cap;
  opts.threads = threads_from_env();
  const qerr::Analysis a = qerr::analyze(p, basis, model, w, opts);
  const double worst = qerr::worst_case_bound(p, model, c.branch_cap);
  if (!c.emit_derivation.empty()) write_file(c.emit_derivation, qerr::write_derivation(a.derivation));
  const double wall = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  if (c.json) {
    json per = json::array();
    for (const auto& g : a.per_gate) per.push_back(gate_json(g));
    json out{{"mode", "analyze"},
             {"epsilon", a.epsilon},
             {"delta", a.delta},
             {"worst_case", worst},
             {"gate_count", qerr::gate_count(p)},
             {"width", w},
             {"input", basis.to_string()},
             {"per_gate", per},
             {"sdp_solves", a.sdp_solves},
             {"warnings", a.warnings},
             {"wall_ms", wall},
             {"timing",
              {{"tn_ms", a.timing.tn_ms}, {"sdp_ms", a.timing.sdp_ms}, {"logic_ms", a.timing.logic_ms}}}};
    if (!c.emit_derivation.empty()) out["derivation_path"] = c.emit_derivation;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout.precision(10);
    std::cout << "epsilon     " << a.epsilon << "\n"
              << "delta       " << a.delta << "\n"
              << "worst_case  " << worst << "\n"
              << "gates       " << qerr::gate_count(p) << "\n"
              << "width       " << w << "\n";
    for (const auto& g : a.per_gate) {
      std::cout << "  " << (g.branch.empty() ? "" : "[" + g.branch + "] ") << "#" << g.index << " "
                << g.gate << qubit_list(g.qubits) << "  eps " << g.epsilon << "  worst " << g.worst_case
                << "  delta " << g.delta << "\n";
    }
    for (const auto& wmsg : a.warnings) std::cout << "warning: " << wmsg << "\n";
    std::cout.precision(4);
    std::cout << "time        tn " << a.timing.tn_ms << " ms, sdp " << a.timing.sdp_ms << " ms, logic "
              << a.timing.logic_ms << " ms, wall " << wall << " ms\n";
    if (!c.emit_derivation.empty()) std::cout << "derivation  " << c.emit_derivation << "\n";
  }
  return 0;
}

int run_worst_case(const Config& c, Clock::time_point start) {
  const qerr::Program p = load_program(c.circuit);
  const qerr::NoiseModel model = load_noise(single_noise(c));
  json per = json::array();
  const auto branches = qerr::enumerate_branches(p, c.branch_cap);
  for (const auto& br : branches) {
    std::size_t index = 0;
    for (const auto& step : br.steps) {
      if (step.kind != qerr::BranchStep::Kind::Gate) continue;
      const double e = qerr::unconstrained_diamond_norm(qerr::gate_error_map(step.gate, model));
      per.push_back(json{{"branch", br.label_string()}, {"index", index++}, {"gate", step.gate.kind->name},
                         {"qubits", step.gate.qubits}, {"epsilon", e}, {"worst_case", e}});
    }
  }
  const double worst = qerr::worst_case_bound(p, model, c.branch_cap);
  const double wall = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (c.json) {
    json out{{"mode", "worst-case"}, {"epsilon", worst},  {"delta", 0.0},   {"worst_case", worst},
             {"gate_count", qerr::gate_count(p)}, {"per_gate", per}, {"wall_ms", wall}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout.precision(10);
    std::cout << "worst_case  " << worst << "\n" << "gates       " << qerr::gate_count(p) << "\n";
  }
  return 0;
}

int run_compare(const Config& c, Clock::time_point start) {
  if (c.noise.size() < 2) throw qerr::InputError("compare needs at least two --noise files");
  const qerr::Program p = load_program(c.circuit);
  std::vector<qerr::NamedModel> models;
  for (const auto& path : c.noise) models.push_back({path, load_noise(path)});
  const qerr::BasisState basis = input_state(c, p);
  qerr::AnalyzeOptions opts;
  opts.branch_cap = c.branch_cap;
  opts.threads = threads_from_env();
  const auto ranked = qerr::compare_noise_models(p, basis, models, effective_width(c.width, p.nqubits()), opts);
  const double wall = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (c.json) {
    json rows = json::array();
    for (const auto& r : ranked) {
      rows.push_back(json{{"noise", r.name}, {"epsilon", r.epsilon}, {"worst_case", r.worst_case}});
    }
    std::cout << json{{"mode", "compare"}, {"ranking", rows}, {"wall_ms", wall}}.dump(2) << "\n";
  } else {
    std::cout.precision(10);
    int rank = 1;
    for (const auto& r : ranked) {
      std::cout << rank++ << ". " << r.name << "  epsilon " << r.epsilon << "  worst_case " << r.worst_case << "\n";
    }
  }
  return 0;
}

int run_oracle(const Config& c, Clock::time_point start) {
  const qerr::Program p = load_program(c.circuit);
  const qerr::NoiseModel model = load_noise(single_noise(c));
  const qerr::BasisState basis = input_state(c, p);
  const double err = qerr::exact_error(p, qerr::basis_density(basis), model);
  const double wall = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (c.json) {
    std::cout << json{{"mode", "oracle"}, {"exact_error", err}, {"gate_count", qerr::gate_count(p)},
                      {"wall_ms", wall}}.dump(2)
              << "\n";
  } else {
    std::cout.precision(10);
    std::cout << "exact_error " << err << "\n";
  }
  return 0;
}

int run_check(const Config& c) {
  if (c.derivation.empty()) throw qerr::InputError("check needs --derivation");
  const qerr::Program p = load_program(c.circuit);
  const qerr::NoiseModel model = load_noise(single_noise(c));
  const qerr::DerivationFile d =
      load(c.derivation, [](const std::string& t) { return qerr::read_derivation(t); });
  const qerr::CheckResult r = qerr::check(d, p, model);
  if (c.json) {
    json out{{"mode", "check"}, {"ok", r.ok}, {"epsilon", d.root.epsilon}};
    if (!r.ok) {
      out["path"] = r.path;
      out["reason"] = r.reason;
    }
    std::cout << out.dump(2) << "\n";
  } else if (r.ok) {
    std::cout << "ok: derivation verified, epsilon " << d.root.epsilon << "\n";
  } else {
    std::cout << "rejected at " << r.path << ": " << r.reason << "\n";
  }
  return r.ok ? 0 : kExitCheckFailed;
}

int run_gen_bench(const Config& c) {
  qerr::BenchOptions o;
  o.kind = qerr::parse_bench_kind(c.kind);
  o.nqubits = c.qubits;
  o.seed = c.seed;
  o.layers = c.layers;
  o.prep = !c.no_prep;
  o.mixer = !c.no_mixer;
  const std::string text = qerr::gen_bench_text(o);
  if (c.output.empty()) {
    std::cout << text;
  } else {
    write_file(c.output, text);
    std::cerr << c.output << ": " << qerr::gate_count(qerr::gen_bench(o)) << " gates\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = Clock::now();
  CLI::App app{"Certified error bounds for noisy quantum programs"};
  Config c;
  std::string positional_mode;
  const std::vector<std::string> modes{"analyze", "worst-case", "compare", "oracle", "check", "gen-bench"};
  app.add_option("mode_arg", positional_mode, "analyze | worst-case | compare | oracle | check | gen-bench")
      ->check(CLI::IsMember(modes));
  app.add_option("--mode", c.mode, "Same as the positional mode")->check(CLI::IsMember(modes));
  app.add_option("--circuit", c.circuit, "Circuit file (.qc)");
  app.add_option("--noise", c.noise, "Noise model file (.nm); repeat for compare");
  app.add_option("--input", c.input, "Input basis state, e.g. 0101 (default all zeros)");
  app.add_option("-w,--mps-width", c.width, "Maximum bond width (lowered to 2^floor(n/2))")
      ->capture_default_str();
  app.add_flag("--json", c.json, "JSON report on stdout");
  app.add_option("--emit-derivation", c.emit_derivation, "Write the derivation to PATH");
  app.add_option("--derivation", c.derivation, "Derivation to verify (check mode)");
  app.add_option("--branch-cap", c.branch_cap, "Maximum number of measurement paths")->capture_default_str();
  app.add_option("--seed", c.seed, "Seed for generators")->capture_default_str();
  app.add_option("--kind", c.kind, "gen-bench: qaoa-line | qaoa-random | ising-chain")->capture_default_str();
  app.add_option("-n,--qubits", c.qubits, "gen-bench: qubit count")->capture_default_str();
  app.add_option("--layers", c.layers, "gen-bench: QAOA rounds or Trotter steps")->capture_default_str();
  app.add_flag("--no-prep", c.no_prep, "gen-bench: omit the Hadamard layer");
  app.add_flag("--no-mixer", c.no_mixer, "gen-bench: omit QAOA mixer layers");
  app.add_option("-o,--output", c.output, "gen-bench: output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (!positional_mode.empty() && !c.mode.empty() && positional_mode != c.mode) {
      throw qerr::InputError("conflicting modes '" + positional_mode + "' and '" + c.mode + "'");
    }
    if (c.mode.empty()) c.mode = positional_mode;
    if (c.mode.empty()) throw qerr::InputError("no mode given (try --help)");
    if (c.mode == "gen-bench") return run_gen_bench(c);
    if (c.circuit.empty()) throw qerr::InputError("--circuit is required");
    if (c.mode == "analyze") return run_analyze(c, start);
    if (c.mode == "worst-case") return run_worst_case(c, start);
    if (c.mode == "compare") return run_compare(c, start);
    if (c.mode == "oracle") return run_oracle(c, start);
    return run_check(c);
  } catch (const qerr::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const qerr::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
