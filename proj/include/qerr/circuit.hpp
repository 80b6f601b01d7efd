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

#ifndef QERR_CIRCUIT_HPP_
#define QERR_CIRCUIT_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qerr/linalg.hpp"

namespace qerr {

/// A named 1- or 2-qubit unitary. Built-in kinds are shared singletons;
/// custom kinds come from `gate` declarations in a circuit file.
struct GateKind {
  std::string name;
  int arity = 1;
  CMatrix matrix;
  bool builtin = false;
};
using GateKindPtr = std::shared_ptr<const GateKind>;

/// Returns nullptr for unknown names. Accepts the alias `cx` for `cnot`.
GateKindPtr builtin_gate(std::string_view name);
const std::vector<std::string>& builtin_gate_names();

/// Validates unitarity (1e-10) and derives the arity from the dimension.
GateKindPtr make_gate_kind(std::string name, CMatrix matrix);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct SkipStmt {};
struct SeqStmt {
  NodePtr first;
  NodePtr second;
};
struct GateStmt {
  GateKindPtr kind;
  std::vector<int> qubits;
};
struct IfStmt {
  int qubit = 0;
  NodePtr then0;  // taken on outcome 0
  NodePtr else1;  // taken on outcome 1
};

struct Node {
  std::variant<SkipStmt, SeqStmt, GateStmt, IfStmt> value;
};

NodePtr make_skip();
NodePtr make_seq(NodePtr first, NodePtr second);
NodePtr make_gate(GateKindPtr kind, std::vector<int> qubits);
NodePtr make_if(int qubit, NodePtr then0, NodePtr else1);
/// Right-nested sequence; empty input gives skip.
NodePtr make_block(const std::vector<NodePtr>& stmts);

/// Immutable program over a fixed number of qubits.
class Program {
 public:
  /// Throws InputError when a qubit index is out of range, a gate's qubit
  /// list has duplicates, or its length does not match the arity.
  Program(int nqubits, NodePtr body);

  int nqubits() const { return nqubits_; }
  const Node& body() const { return *body_; }
  const NodePtr& body_ptr() const { return body_; }

 private:
  int nqubits_;
  NodePtr body_;
};

bool structurally_equal(const Node& a, const Node& b);

/// Syntax error carrying a 1-based source position.
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses the `.qc` circuit format (see docs/circuit-format.md).
Program parse_program(std::string_view text);
std::string print_program(const Program& program);

std::size_t gate_count(const Program& program);
std::size_t if_count(const Program& program);

/// Number of root-to-leaf paths, saturating at `limit + 1`.
std::size_t branch_count(const Node& node, std::size_t limit);

class BranchCapError : public InputError {
 public:
  using InputError::InputError;
};

struct MeasurementOutcome {
  int qubit = 0;
  int outcome = 0;
};

/// One step of a straight-line branch: a gate, or the projection onto
/// `outcome` of a measured qubit.
struct BranchStep {
  enum class Kind { Gate, Project };
  Kind kind = Kind::Gate;
  GateStmt gate;
  int qubit = 0;
  int outcome = 0;
};

struct Branch {
  std::vector<MeasurementOutcome> label;
  std::vector<BranchStep> steps;

  /// The gates of this path as a program, measurements dropped.
  Program straight_line(int nqubits) const;
  /// E.g. "q1=0,q3=1"; empty for the unique path of a straight-line program.
  std::string label_string() const;
};

inline constexpr std::size_t kDefaultBranchCap = 64;

/// One branch per root-to-leaf path through the measurement nodes; code
/// sequenced after a branch point is duplicated into both paths.
std::vector<Branch> enumerate_branches(const Program& program,
                                       std::size_t cap = kDefaultBranchCap);

/// Equivalent program in which every measurement is in tail position:
/// `(if q {A} else {B}); C` becomes `if q {A; C} else {B; C}`. The result is
/// a right-nested chain of gates ending in a gate, a measurement, or skip.
Program branch_normal_form(const Program& program,
                           std::size_t cap = kDefaultBranchCap);

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with decimal or exponent
/// reals. Returns false on anything else.
bool parse_complex_literal(std::string_view text, Complex& out);
/// Round-trippable `a+bi` form.
std::string format_complex_literal(Complex value);

/// Computational basis input |s_1 ... s_n>.
struct BasisState {
  std::vector<int> bits;

  /// Parses a string of '0'/'1'; throws InputError on other characters.
  static BasisState parse(std::string_view text);
  static BasisState zeros(int n);
  int nqubits() const { return static_cast<int>(bits.size()); }
  std::string to_string() const;
};

}  // namespace qerr

#endif  // QERR_CIRCUIT_HPP_
