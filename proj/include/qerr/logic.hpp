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

#ifndef QERR_LOGIC_HPP_
#define QERR_LOGIC_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qerr/circuit.hpp"
#include "qerr/diamond.hpp"
#include "qerr/linalg.hpp"
#include "qerr/mps.hpp"
#include "qerr/noise.hpp"

namespace qerr {

enum class RuleKind { Skip, Gate, Seq, Weaken, Meas };

const char* rule_name(RuleKind kind);
/// Throws InputError on unknown names.
RuleKind parse_rule_name(const std::string& name);

/// Evidence for one gate: the predicate and a dual certificate for it.
struct GateEvidence {
  std::size_t index = 0;  // position of the gate along its branch
  std::string gate;
  std::vector<int> qubits;
  CMatrix local_rho;
  bool constrained = false;  // certificate is checked against the predicate
  DiamondCertificate certificate;
  std::string certificate_digest;
  double primal = 0.0;      // value of a feasible point, for reports
  double worst_case = 0.0;  // unconstrained norm, for reports
};

/// Approximator step taken between the two halves of a sequence.
struct TnStep {
  double delta_step = 0.0;
  std::string post_digest;
};

struct MeasEvidence {
  int qubit = 0;
  std::array<double, 2> probability{0.0, 0.0};
  std::array<bool, 2> live{false, false};
  std::array<std::string, 2> branch_digest;
  double zero_mass = 0.0;  // estimated probability of the skipped outcomes
  double uniform_epsilon = 0.0;
};

/// One rule application. The judgment is: every state within trace
/// distance `delta` of the snapshot `pre_digest` runs with error <= epsilon.
struct Derivation {
  RuleKind rule = RuleKind::Skip;
  std::string pre_digest;
  double delta = 0.0;
  double epsilon = 0.0;
  std::vector<Derivation> children;
  std::optional<GateEvidence> gate;
  std::optional<TnStep> step;
  std::optional<MeasEvidence> meas;
};

/// What a derivation is about.
struct DerivationHeader {
  int version = 1;
  std::string program_digest;
  std::string noise_digest;
  BasisState basis;
  int width = 1;
  std::size_t branch_cap = kDefaultBranchCap;
};

struct DerivationFile {
  DerivationHeader header;
  Derivation root;
};

struct GateReport {
  std::string branch;
  std::size_t index = 0;
  std::string gate;
  std::vector<int> qubits;
  double delta = 0.0;
  double epsilon = 0.0;
  double worst_case = 0.0;
  bool constrained = false;
};

struct PhaseTiming {
  double tn_ms = 0.0;
  double sdp_ms = 0.0;
  double logic_ms = 0.0;
  double total_ms = 0.0;
};

struct Analysis {
  DerivationFile derivation;
  double epsilon = 0.0;
  double delta = 0.0;  // largest approximation bound reached at a leaf
  std::vector<GateReport> per_gate;
  std::vector<std::string> warnings;
  std::size_t sdp_solves = 0;
  PhaseTiming timing;
};

/// Solver results keyed by error map and predicate; safe to share between
/// analyses and threads.
class SolveCache {
 public:
  std::optional<SdpSolution> find(const std::string& key) const;
  void insert(const std::string& key, const SdpSolution& s);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, SdpSolution> map_;
};

struct AnalyzeOptions {
  std::size_t branch_cap = kDefaultBranchCap;
  int threads = 1;
  std::shared_ptr<SolveCache> cache;  // null: private to the call
};

/// Snapshot identity of an approximate state (bit patterns of its tensors).
std::string state_digest(const MpsState& s);
std::string program_digest(const Program& p);
std::string noise_digest(const NoiseModel& m);
std::string certificate_digest(const GateEvidence& g);

/// Left-to-right derivation of an error bound for `p` on `basis`. Throws
/// NumericalError naming the gate when a solve fails, BranchCapError when
/// the program has too many measurement paths.
Analysis analyze(const Program& p, const BasisState& basis, const NoiseModel& model, int width,
                 const AnalyzeOptions& options = {});

struct CheckResult {
  bool ok = true;
  std::string path;    // first failing node, e.g. "root/seq[1]/gate"
  std::string reason;
};

/// Re-verifies every node by replaying the approximator and re-evaluating
/// the stored certificates. Never re-solves.
CheckResult check(const DerivationFile& d, const Program& p, const NoiseModel& model);

struct RankedModel {
  std::string name;
  std::size_t order = 0;
  double epsilon = 0.0;
  double worst_case = 0.0;
};

struct NamedModel {
  std::string name;
  NoiseModel model;
};

/// Ascending by epsilon, then worst-case bound, then input order.
std::vector<RankedModel> compare_noise_models(const Program& p, const BasisState& basis,
                                              const std::vector<NamedModel>& models, int width,
                                              const AnalyzeOptions& options = {});

/// Versioned JSON text; `read_derivation` throws InputError on malformed input.
std::string write_derivation(const DerivationFile& d);
DerivationFile read_derivation(const std::string& text);

/// Total node count, for tests and reports.
std::size_t node_count(const Derivation& d);

}  // namespace qerr

#endif  // QERR_LOGIC_HPP_
