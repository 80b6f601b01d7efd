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

#include "qerr/logic.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <future>
#include <map>
#include <mutex>
#include <sstream>
#include <string_view>
#include <utility>

namespace qerr {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string fnv_text(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xF];
    h >>= 4;
  }
  return out;
}

std::string bits(double x) {
  return std::to_string(std::bit_cast<std::uint64_t>(x));
}

std::string gate_label(const GateStmt& g) {
  std::string s = g.kind->name;
  for (int q : g.qubits) s += " q" + std::to_string(q);
  return s;
}

bool close(double a, double b, double rel = 1e-12) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

double meas_bound(double delta, double zero_mass, double uniform) {
  const double m = std::min(1.0, delta + zero_mass);
  return std::min(1.0, (1.0 - m) * uniform + m);
}

class Engine {
 public:
  Engine(const NoiseModel& model, Analysis& out, std::shared_ptr<SolveCache> cache)
      : model_(model), out_(out), cache_(cache ? std::move(cache) : std::make_shared<SolveCache>()) {}

  Derivation derive(const Node& node, MpsState state, std::size_t index, const std::string& branch,
                    int threads) {
    if (std::holds_alternative<SkipStmt>(node.value)) {
      Derivation d;
      d.rule = RuleKind::Skip;
      d.pre_digest = timed_digest(state);
      d.delta = state.delta();
      std::lock_guard lock(mu_);
      out_.delta = std::max(out_.delta, state.delta());
      return d;
    }
    if (const auto* g = std::get_if<GateStmt>(&node.value)) {
      Derivation d = gate_rule(*g, state, index, branch);
      std::lock_guard lock(mu_);
      out_.delta = std::max(out_.delta, state.delta());
      return d;
    }
    if (const auto* s = std::get_if<SeqStmt>(&node.value)) {
      const auto* first = std::get_if<GateStmt>(&s->first->value);
      if (!first) throw InputError("sequence does not start with a gate; program is not in normal form");
      Derivation d;
      d.rule = RuleKind::Seq;
      d.pre_digest = timed_digest(state);
      d.delta = state.delta();
      Derivation head = gate_rule(*first, state, index, branch);
      TnStep step;
      const auto t0 = Clock::now();
      const double before = state.delta();
      state.apply_gate(*first);
      step.delta_step = state.delta() - before;
      step.post_digest = state_digest(state);
      add_tn(elapsed_ms(t0));
      Derivation tail = derive(*s->second, std::move(state), index + 1, branch, threads);
      d.epsilon = head.epsilon + tail.epsilon;
      d.step = std::move(step);
      d.children.push_back(std::move(head));
      d.children.push_back(std::move(tail));
      return d;
    }
    return meas_rule(std::get<IfStmt>(node.value), std::move(state), index, branch, threads);
  }

  std::size_t solves() const { return solves_; }

 private:
  std::string timed_digest(const MpsState& s) {
    const auto t0 = Clock::now();
    std::string h = state_digest(s);
    add_tn(elapsed_ms(t0));
    return h;
  }

  void add_tn(double ms) {
    std::lock_guard lock(mu_);
    out_.timing.tn_ms += ms;
  }

  SdpSolution cached_solve(const std::string& key, const HermitianMap& phi, const Predicate* pred) {
    if (auto hit = cache_->find(key)) return *hit;
    const auto t0 = Clock::now();
    SdpSolution sol = pred ? constrained_diamond_norm(phi, *pred) : unconstrained_diamond_solution(phi);
    cache_->insert(key, sol);
    std::lock_guard lock(mu_);
    out_.timing.sdp_ms += elapsed_ms(t0);
    ++solves_;
    return sol;
  }

  Derivation gate_rule(const GateStmt& g, const MpsState& state, std::size_t index,
                       const std::string& branch) {
    Derivation d;
    d.rule = RuleKind::Gate;
    d.pre_digest = timed_digest(state);
    d.delta = state.delta();

    GateEvidence ev;
    ev.index = index;
    ev.gate = g.kind->name;
    ev.qubits = g.qubits;
    const auto t0 = Clock::now();
    ev.local_rho = state.local_density(g.qubits);
    add_tn(elapsed_ms(t0));
    const Predicate pred{ev.local_rho, d.delta};

    const HermitianMap phi = gate_error_map(g, model_);
    const std::string key = digest(phi.choi);
    try {
      const SdpSolution& loose = cached_solve("u|" + key, phi, nullptr);
      const SdpSolution* chosen = &loose;
      SdpSolution tight;
      if (max_abs(phi.choi) > 0.0 && frobenius_constraint_needed(pred)) {
        tight = cached_solve("c|" + key + "|" + digest(ev.local_rho) + "|" + bits(d.delta), phi,
                             &pred);
        if (tight.dual <= loose.dual) chosen = &tight;
      }
      ev.constrained = chosen == &tight && tight.constrained;
      ev.certificate = chosen->certificate;
      ev.primal = chosen->primal;
      ev.worst_case = loose.dual;
      d.epsilon = certificate_bound(phi.choi, ev.certificate, ev.constrained ? &pred : nullptr);
    } catch (const NumericalError& e) {
      throw NumericalError("gate #" + std::to_string(index) + " (" + gate_label(g) + ")" +
                           (branch.empty() ? "" : " on branch " + branch) + ": " + e.what());
    }
    ev.certificate_digest = certificate_digest(ev);

    GateReport rep;
    rep.branch = branch;
    rep.index = index;
    rep.gate = ev.gate;
    rep.qubits = ev.qubits;
    rep.delta = d.delta;
    rep.epsilon = d.epsilon;
    rep.worst_case = ev.worst_case;
    rep.constrained = ev.constrained;
    {
      std::lock_guard lock(mu_);
      out_.per_gate.push_back(std::move(rep));
    }
    d.gate = std::move(ev);
    return d;
  }

  Derivation meas_rule(const IfStmt& s, MpsState state, std::size_t index, const std::string& branch,
                       int threads) {
    Derivation d;
    d.rule = RuleKind::Meas;
    d.pre_digest = timed_digest(state);
    d.delta = state.delta();
    MeasEvidence ev;
    ev.qubit = s.qubit;

    std::array<std::optional<MpsState>, 2> post;
    const auto t0 = Clock::now();
    for (int b = 0; b < 2; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      ev.probability[ub] = state.probability(s.qubit, b);
      ev.live[ub] = ev.probability[ub] > kZeroProbability;
      if (ev.live[ub]) {
        post[ub] = state;
        post[ub]->collapse(s.qubit, b);
        ev.branch_digest[ub] = state_digest(*post[ub]);
      } else {
        ev.zero_mass += ev.probability[ub];
      }
    }
    add_tn(elapsed_ms(t0));

    auto label = [&](int b) {
      return (branch.empty() ? "" : branch + ",") + "q" + std::to_string(s.qubit) + "=" +
             std::to_string(b);
    };
    for (int b = 0; b < 2; ++b) {
      if (!ev.live[static_cast<std::size_t>(b)]) {
        std::lock_guard lock(mu_);
        out_.warnings.push_back("branch " + label(b) + " has probability " +
                                std::to_string(ev.probability[static_cast<std::size_t>(b)]) +
                                " and was skipped");
      }
    }

    const Node* body[2] = {s.then0.get(), s.else1.get()};
    std::array<std::optional<Derivation>, 2> sub;
    if (threads > 1 && ev.live[0] && ev.live[1]) {
      auto other = std::async(std::launch::async, [&] {
        return derive(*body[0], std::move(*post[0]), index, label(0), threads / 2);
      });
      sub[1] = derive(*body[1], std::move(*post[1]), index, label(1), threads - threads / 2);
      sub[0] = other.get();
    } else {
      for (int b = 0; b < 2; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        if (ev.live[ub]) sub[ub] = derive(*body[b], std::move(*post[ub]), index, label(b), threads);
      }
    }

    for (const auto& c : sub) {
      if (c) ev.uniform_epsilon = std::max(ev.uniform_epsilon, c->epsilon);
    }
    for (int b = 0; b < 2; ++b) {
      auto& c = sub[static_cast<std::size_t>(b)];
      if (!c) continue;
      Derivation w;
      w.rule = RuleKind::Weaken;
      w.pre_digest = c->pre_digest;
      w.delta = c->delta;
      w.epsilon = ev.uniform_epsilon;
      w.children.push_back(std::move(*c));
      d.children.push_back(std::move(w));
    }
    d.epsilon = meas_bound(d.delta, ev.zero_mass, ev.uniform_epsilon);
    d.meas = std::move(ev);
    return d;
  }

  const NoiseModel& model_;
  Analysis& out_;
  std::mutex mu_;
  std::shared_ptr<SolveCache> cache_;
  std::size_t solves_ = 0;
};

struct CheckFailure {
  std::string path;
  std::string reason;
};

class Verifier {
 public:
  explicit Verifier(const NoiseModel& model) : model_(model) {}

  void verify(const Derivation& d, const Node& node, const MpsState& state, std::size_t index,
              const std::string& path) {
    if (d.pre_digest != state_digest(state)) fail(path, "predicate snapshot does not match the replay");
    if (!std::isfinite(d.delta) || !close(d.delta, state.delta())) {
      fail(path, "delta " + num(d.delta) + " does not match the approximation ledger " +
                     num(state.delta()));
    }
    if (!std::isfinite(d.epsilon) || d.epsilon < 0.0) fail(path, "epsilon must be finite and >= 0");
    const bool evidence_ok = (d.gate.has_value() == (d.rule == RuleKind::Gate)) &&
                             (d.step.has_value() == (d.rule == RuleKind::Seq)) &&
                             (d.meas.has_value() == (d.rule == RuleKind::Meas));
    if (!evidence_ok) fail(path, "evidence does not match the rule kind");

    switch (d.rule) {
      case RuleKind::Weaken: {
        if (d.children.size() != 1) fail(path, "weaken needs exactly one premise");
        const Derivation& c = d.children[0];
        if (c.epsilon > d.epsilon * (1.0 + 1e-12)) fail(path, "weaken lowers epsilon");
        if (c.delta < d.delta * (1.0 - 1e-12)) fail(path, "weaken enlarges delta");
        verify(c, node, state, index, path + "/weaken");
        return;
      }
      case RuleKind::Skip:
        if (!std::holds_alternative<SkipStmt>(node.value)) fail(path, "skip rule on a non-skip program");
        if (!d.children.empty()) fail(path, "skip has no premises");
        if (d.epsilon != 0.0) fail(path, "skip must have epsilon 0");
        return;
      case RuleKind::Gate: {
        const auto* g = std::get_if<GateStmt>(&node.value);
        if (!g) fail(path, "gate rule on a program that is not a single gate");
        if (!d.children.empty()) fail(path, "gate rule has no premises");
        verify_gate(d, *g, state, index, path);
        return;
      }
      case RuleKind::Seq: {
        const auto* s = std::get_if<SeqStmt>(&node.value);
        const GateStmt* first = s ? std::get_if<GateStmt>(&s->first->value) : nullptr;
        if (!first) fail(path, "sequence rule on a program that is not gate; rest");
        if (d.children.size() != 2) fail(path, "sequence needs two premises");
        verify(d.children[0], *s->first, state, index, path + "/seq[0]");
        MpsState next = state;
        const double before = next.delta();
        next.apply_gate(*first);
        const double step = next.delta() - before;
        if (!close(step, d.step->delta_step)) {
          fail(path, "recorded truncation " + num(d.step->delta_step) + " differs from replay " +
                         num(step));
        }
        if (d.step->post_digest != state_digest(next)) fail(path, "post-state snapshot mismatch");
        if (!close(d.children[1].delta, d.delta + d.step->delta_step)) {
          fail(path, "second premise delta is not delta + truncation");
        }
        verify(d.children[1], *s->second, next, index + 1, path + "/seq[1]");
        if (!close(d.epsilon, d.children[0].epsilon + d.children[1].epsilon)) {
          fail(path, "epsilon is not the sum of the premises");
        }
        return;
      }
      case RuleKind::Meas:
        verify_meas(d, node, state, index, path);
        return;
    }
    fail(path, "unknown rule");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& reason) {
    throw CheckFailure{path, reason};
  }

 private:
  static std::string num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  }

  void verify_gate(const Derivation& d, const GateStmt& g, const MpsState& state, std::size_t index,
                   const std::string& path) {
    const GateEvidence& ev = *d.gate;
    if (ev.gate != g.kind->name || ev.qubits != g.qubits) {
      fail(path, "evidence names a different gate than the program");
    }
    if (ev.index != index) fail(path, "gate index out of sequence");
    const CMatrix local = state.local_density(g.qubits);
    if (ev.local_rho.rows() != local.rows() || ev.local_rho.cols() != local.cols() ||
        max_abs(ev.local_rho - local) > 1e-12) {
      fail(path, "local density does not match the replayed state");
    }
    if (ev.certificate_digest != certificate_digest(ev)) fail(path, "certificate digest mismatch");
    const Predicate pred{ev.local_rho, d.delta};
    const CMatrix j = gate_error_map(g, model_).choi;
    double bound = 0.0;
    double violation = 0.0;
    try {
      bound = certificate_bound(j, ev.certificate, ev.constrained ? &pred : nullptr);
      violation = certificate_violation(j, ev.certificate, ev.constrained ? &pred : nullptr);
    } catch (const std::exception& e) {
      fail(path, std::string("certificate rejected: ") + e.what());
    }
    if (!close(bound, d.epsilon, 1e-9)) {
      fail(path, "epsilon " + num(d.epsilon) + " is not the certificate bound " + num(bound));
    }
    if (violation < -1e-6 * std::max(1.0, max_abs(j))) {
      fail(path, "certificate residual " + num(violation) + " exceeds tolerance");
    }
  }

  void verify_meas(const Derivation& d, const Node& node, const MpsState& state, std::size_t index,
                   const std::string& path) {
    const auto* s = std::get_if<IfStmt>(&node.value);
    if (!s) fail(path, "measurement rule on a program that is not a measurement");
    const MeasEvidence& ev = *d.meas;
    if (ev.qubit != s->qubit) fail(path, "measured qubit differs from the program");
    MpsState probe = state;
    double zero_mass = 0.0;
    std::size_t next_child = 0;
    const Node* body[2] = {s->then0.get(), s->else1.get()};
    for (int b = 0; b < 2; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      const double p = probe.probability(s->qubit, b);
      if (!close(p, ev.probability[ub])) fail(path, "outcome probability differs from replay");
      const bool live = p > kZeroProbability;
      if (live != ev.live[ub]) fail(path, "branch liveness differs from replay");
      if (!live) {
        zero_mass += p;
        continue;
      }
      MpsState branch = state;
      branch.collapse(s->qubit, b);
      if (ev.branch_digest[ub] != state_digest(branch)) fail(path, "branch snapshot mismatch");
      if (next_child >= d.children.size()) fail(path, "missing premise for a live branch");
      const Derivation& c = d.children[next_child++];
      const std::string sub = path + "/meas[" + std::to_string(b) + "]";
      if (!close(c.epsilon, ev.uniform_epsilon)) fail(sub, "branch epsilon is not the uniform bound");
      verify(c, *body[b], branch, index, sub);
    }
    if (next_child != d.children.size()) fail(path, "premise for an unreachable branch");
    if (!close(zero_mass, ev.zero_mass)) fail(path, "skipped probability mass differs from replay");
    if (!close(d.epsilon, meas_bound(d.delta, ev.zero_mass, ev.uniform_epsilon))) {
      fail(path, "epsilon is not (1 - delta) eps + delta");
    }
  }

  const NoiseModel& model_;
};

}  // namespace

std::optional<SdpSolution> SolveCache::find(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void SolveCache::insert(const std::string& key, const SdpSolution& s) {
  std::lock_guard lock(mu_);
  map_.emplace(key, s);
}

std::size_t SolveCache::size() const {
  std::lock_guard lock(mu_);
  return map_.size();
}

const char* rule_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::Skip: return "skip";
    case RuleKind::Gate: return "gate";
    case RuleKind::Seq: return "seq";
    case RuleKind::Weaken: return "weaken";
    case RuleKind::Meas: return "meas";
  }
  return "?";
}

RuleKind parse_rule_name(const std::string& name) {
  for (RuleKind k : {RuleKind::Skip, RuleKind::Gate, RuleKind::Seq, RuleKind::Weaken, RuleKind::Meas}) {
    if (name == rule_name(k)) return k;
  }
  throw InputError("unknown rule '" + name + "'");
}

std::string state_digest(const MpsState& s) {
  std::string acc;
  for (const auto& site : s.sites()) acc += digest(site[0]) + digest(site[1]) + ";";
  for (int p : s.perm()) acc += std::to_string(p) + ",";
  acc += std::to_string(s.center());
  return fnv_text(acc);
}

std::string program_digest(const Program& p) { return fnv_text(print_program(p)); }

std::string noise_digest(const NoiseModel& m) {
  std::string acc;
  for (const auto& r : m.rules()) {
    acc += r.gate + "|" + (r.replace ? "r" : "n") + "|";
    if (r.qubits) {
      for (int q : *r.qubits) acc += std::to_string(q) + ",";
    } else {
      acc += "*";
    }
    acc += "|" + digest(r.channel.choi()) + "\n";
  }
  for (int arity : {1, 2}) {
    const auto& c = m.default_noise(arity);
    acc += "default" + std::to_string(arity) + "|" + (c ? digest(c->choi()) : "none") + "\n";
  }
  return fnv_text(acc);
}

std::string certificate_digest(const GateEvidence& g) {
  std::string acc = g.constrained ? "c|" : "u|";
  acc += digest(g.certificate.v) + "|" + digest(g.certificate.z) + "|" + bits(g.certificate.kappa) +
         "|" + bits(g.certificate.t) + "|" + bits(g.certificate.y0) + "|" + digest(g.local_rho);
  return fnv_text(acc);
}

Analysis analyze(const Program& p, const BasisState& basis, const NoiseModel& model, int width,
                 const AnalyzeOptions& options) {
  const auto start = Clock::now();
  if (basis.nqubits() != p.nqubits()) {
    throw InputError("input state has " + std::to_string(basis.nqubits()) +
                     " qubits but the program has " + std::to_string(p.nqubits()));
  }
  const Program normal = branch_normal_form(p, options.branch_cap);
  Analysis out;
  out.derivation.header.program_digest = program_digest(p);
  out.derivation.header.noise_digest = noise_digest(model);
  out.derivation.header.basis = basis;
  out.derivation.header.width = width;
  out.derivation.header.branch_cap = options.branch_cap;

  Engine engine(model, out, options.cache);
  const auto t0 = Clock::now();
  MpsState init = MpsState::init(basis, width);
  out.timing.tn_ms += elapsed_ms(t0);
  out.derivation.root = engine.derive(normal.body(), std::move(init), 0, "", std::max(1, options.threads));
  out.epsilon = out.derivation.root.epsilon;
  out.sdp_solves = engine.solves();
  std::stable_sort(out.per_gate.begin(), out.per_gate.end(), [](const GateReport& a, const GateReport& b) {
    return a.branch != b.branch ? a.branch < b.branch : a.index < b.index;
  });
  out.timing.total_ms = elapsed_ms(start);
  out.timing.logic_ms = std::max(0.0, out.timing.total_ms - out.timing.tn_ms - out.timing.sdp_ms);
  return out;
}

CheckResult check(const DerivationFile& d, const Program& p, const NoiseModel& model) {
  CheckResult res;
  try {
    const DerivationHeader& h = d.header;
    if (h.version != 1) Verifier::fail("root", "unsupported derivation version");
    if (h.program_digest != program_digest(p)) Verifier::fail("root", "derivation is for a different program");
    if (h.noise_digest != noise_digest(model)) Verifier::fail("root", "derivation is for a different noise model");
    if (h.basis.nqubits() != p.nqubits()) Verifier::fail("root", "input state size mismatch");
    if (h.width < 1) Verifier::fail("root", "width must be >= 1");
    const Program normal = branch_normal_form(p, h.branch_cap);
    Verifier v(model);
    v.verify(d.root, normal.body(), MpsState::init(h.basis, h.width), 0, "root");
  } catch (const CheckFailure& f) {
    res.ok = false;
    res.path = f.path;
    res.reason = f.reason;
  } catch (const std::exception& e) {
    res.ok = false;
    res.path = "root";
    res.reason = e.what();
  }
  return res;
}

std::vector<RankedModel> compare_noise_models(const Program& p, const BasisState& basis,
                                              const std::vector<NamedModel>& models, int width,
                                              const AnalyzeOptions& options) {
  std::vector<RankedModel> out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    RankedModel r;
    r.name = models[i].name;
    r.order = i;
    r.epsilon = analyze(p, basis, models[i].model, width, options).epsilon;
    r.worst_case = worst_case_bound(p, models[i].model, options.branch_cap);
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedModel& a, const RankedModel& b) {
    if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
    if (a.worst_case != b.worst_case) return a.worst_case < b.worst_case;
    return a.order < b.order;
  });
  return out;
}

std::size_t node_count(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& c : d.children) n += node_count(c);
  return n;
}

}  // namespace qerr
