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

#include "qerr/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace qerr {

namespace {

GateKindPtr make_builtin(std::string name, CMatrix m) {
  auto k = std::make_shared<GateKind>();
  k->name = std::move(name);
  k->arity = exact_log2(m.rows());
  k->matrix = std::move(m);
  k->builtin = true;
  return k;
}

const std::map<std::string, GateKindPtr, std::less<>>& builtin_table() {
  static const auto table = [] {
    const Complex i(0.0, 1.0);
    const double r = 1.0 / std::sqrt(2.0);
    std::map<std::string, GateKindPtr, std::less<>> t;
    t["i"] = make_builtin("i", pauli(0));
    t["x"] = make_builtin("x", pauli(1));
    t["y"] = make_builtin("y", pauli(2));
    t["z"] = make_builtin("z", pauli(3));
    CMatrix h(2, 2);
    h << r, r, r, -r;
    t["h"] = make_builtin("h", h);
    CMatrix s(2, 2);
    s << 1.0, 0.0, 0.0, i;
    t["s"] = make_builtin("s", s);
    t["sdg"] = make_builtin("sdg", s.adjoint());
    CMatrix tg(2, 2);
    tg << 1.0, 0.0, 0.0, std::polar(1.0, M_PI / 4.0);
    t["t"] = make_builtin("t", tg);
    t["tdg"] = make_builtin("tdg", tg.adjoint());
    CMatrix cnot = CMatrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
    t["cnot"] = make_builtin("cnot", cnot);
    CMatrix cz = CMatrix::Identity(4, 4);
    cz(3, 3) = -1.0;
    t["cz"] = make_builtin("cz", cz);
    CMatrix swap = CMatrix::Zero(4, 4);
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
    t["swap"] = make_builtin("swap", swap);
    return t;
  }();
  return table;
}

bool is_keyword(std::string_view w) {
  return w == "qubits" || w == "gate" || w == "if" || w == "else" || w == "skip";
}

void validate_node(const Node& node, int n) {
  std::visit(
      [n](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SeqStmt>) {
          validate_node(*s.first, n);
          validate_node(*s.second, n);
        } else if constexpr (std::is_same_v<T, GateStmt>) {
          if (!s.kind) throw InputError("gate statement without a gate kind");
          if (static_cast<int>(s.qubits.size()) != s.kind->arity) {
            throw InputError("gate '" + s.kind->name + "' expects " +
                             std::to_string(s.kind->arity) + " qubit(s)");
          }
          std::set<int> seen;
          for (int q : s.qubits) {
            if (q < 0 || q >= n) {
              throw InputError("qubit index q" + std::to_string(q) +
                               " out of range for " + std::to_string(n) + " qubits");
            }
            if (!seen.insert(q).second) {
              throw InputError("gate '" + s.kind->name + "' repeats qubit q" +
                               std::to_string(q));
            }
          }
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          if (s.qubit < 0 || s.qubit >= n) {
            throw InputError("measured qubit q" + std::to_string(s.qubit) +
                             " out of range");
          }
          validate_node(*s.then0, n);
          validate_node(*s.else1, n);
        }
      },
      node.value);
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Program parse() {
    std::vector<NodePtr> stmts;
    skip_separators();
    while (!at_end()) {
      std::size_t save = pos_;
      int save_line = line_, save_col = col_;
      std::string word = peek_word();
      if (word == "qubits") {
        if (!stmts.empty()) error("'qubits' header must precede all statements");
        read_word();
        skip_blanks();
        nqubits_ = static_cast<int>(read_int("qubit count"));
        if (nqubits_ <= 0) error("qubit count must be positive");
      } else if (word == "gate") {
        if (!stmts.empty()) error("gate declarations must precede all statements");
        parse_declaration();
      } else {
        pos_ = save;
        line_ = save_line;
        col_ = save_col;
        stmts.push_back(parse_statement());
      }
      expect_separator_or_end('\0');
      skip_separators();
    }
    int n = nqubits_ > 0 ? nqubits_ : std::max(1, max_qubit_ + 1);
    return Program(n, make_block(stmts));
  }

 private:
  [[noreturn]] void error(const std::string& message) const {
    throw ParseError(message, line_, col_);
  }
  [[noreturn]] void error_at(const std::string& message, int line, int col) const {
    throw ParseError(message, line, col);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (at_end()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_comment() {
    while (!at_end() && peek() != '\n') advance();
  }

  // Spaces, tabs, carriage returns and comments; newlines are significant.
  void skip_blanks() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        skip_comment();
      } else {
        break;
      }
    }
  }

  void skip_separators() {
    while (true) {
      skip_blanks();
      if (peek() == '\n' || peek() == ';') {
        advance();
      } else {
        break;
      }
    }
  }

  void skip_all_whitespace() {
    while (true) {
      skip_blanks();
      if (peek() == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  // After a statement: a separator, a closing brace, or the end of input.
  void expect_separator_or_end(char closer) {
    skip_blanks();
    char c = peek();
    if (at_end() || c == '\n' || c == ';') return;
    if (closer != '\0' && c == closer) return;
    error(std::string("expected ';' or newline, found '") + c + "'");
  }

  std::string peek_word() {
    skip_blanks();
    std::size_t p = pos_;
    std::string w;
    while (p < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[p])) || text_[p] == '_')) {
      w.push_back(text_[p]);
      ++p;
    }
    return w;
  }

  std::string read_word() {
    skip_blanks();
    std::string w;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      w.push_back(peek());
      advance();
    }
    return w;
  }

  long read_int(const char* what) {
    skip_blanks();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      error(std::string("expected ") + what);
    }
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      if (v > 1'000'000) error(std::string(what) + " too large");
      advance();
    }
    return v;
  }

  void expect(char c) {
    skip_blanks();
    if (peek() != c) {
      error(std::string("expected '") + c + "'" +
            (at_end() ? std::string(", found end of input")
                      : std::string(", found '") + peek() + "'"));
    }
    advance();
  }

  int parse_qubit_ref() {
    skip_blanks();
    int line = line_, col = col_;
    std::string w = read_word();
    if (w.size() < 2 || w[0] != 'q' ||
        !std::all_of(w.begin() + 1, w.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      error_at("expected qubit reference qN, found '" + w + "'", line, col);
    }
    long q = std::strtol(w.c_str() + 1, nullptr, 10);
    if (q > 1'000'000) error_at("qubit index too large", line, col);
    if (nqubits_ > 0 && q >= nqubits_) {
      error_at("qubit index q" + std::to_string(q) + " out of range for " +
                   std::to_string(nqubits_) + " qubits",
               line, col);
    }
    max_qubit_ = std::max(max_qubit_, static_cast<int>(q));
    return static_cast<int>(q);
  }

  void parse_declaration() {
    read_word();  // "gate"
    skip_blanks();
    int line = line_, col = col_;
    std::string name = read_word();
    if (name.empty()) error("expected gate name");
    if (is_keyword(name)) error_at("'" + name + "' is a reserved word", line, col);
    if (builtin_gate(name) || custom_.count(name)) {
      error_at("gate '" + name + "' is already defined", line, col);
    }
    CMatrix m = parse_matrix();
    try {
      custom_[name] = make_gate_kind(name, m);
    } catch (const InputError& e) {
      error_at(e.what(), line, col);
    }
  }

  CMatrix parse_matrix() {
    skip_all_whitespace();
    expect('[');
    std::vector<std::vector<Complex>> rows(1);
    while (true) {
      skip_all_whitespace();
      int line = line_, col = col_;
      std::string lit;
      while (!at_end() && peek() != ',' && peek() != ';' && peek() != ']' &&
             !std::isspace(static_cast<unsigned char>(peek()))) {
        lit.push_back(peek());
        advance();
      }
      Complex v;
      if (!parse_complex_literal(lit, v)) {
        error_at("malformed complex literal '" + lit + "'", line, col);
      }
      rows.back().push_back(v);
      skip_all_whitespace();
      char c = peek();
      if (c == ',') {
        advance();
      } else if (c == ';') {
        advance();
        rows.emplace_back();
      } else if (c == ']') {
        advance();
        break;
      } else {
        error("expected ',', ';' or ']' in matrix literal");
      }
    }
    const std::size_t dim = rows.size();
    CMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (rows[i].size() != dim) error("gate matrix must be square");
      for (std::size_t j = 0; j < dim; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  NodePtr parse_block() {
    expect('{');
    std::vector<NodePtr> stmts;
    skip_separators();
    while (true) {
      skip_separators();
      if (peek() == '}') break;
      if (at_end()) error("unterminated block, expected '}'");
      stmts.push_back(parse_statement());
      expect_separator_or_end('}');
    }
    advance();
    return make_block(stmts);
  }

  NodePtr parse_statement() {
    skip_blanks();
    if (peek() == '{') return parse_block();
    int line = line_, col = col_;
    std::string word = read_word();
    if (word.empty()) {
      error(at_end() ? std::string("unexpected end of input")
                     : std::string("unexpected character '") + peek() + "'");
    }
    if (word == "skip") return make_skip();
    if (word == "if") {
      int q = parse_qubit_ref();
      skip_blanks();
      NodePtr then0 = parse_block();
      skip_all_whitespace();
      int eline = line_, ecol = col_;
      if (read_word() != "else") error_at("expected 'else'", eline, ecol);
      skip_blanks();
      NodePtr else1 = parse_block();
      return make_if(q, then0, else1);
    }
    if (word == "qubits" || word == "gate") {
      error_at("'" + word + "' is only allowed in the file header", line, col);
    }
    if (word == "else") error_at("'else' without 'if'", line, col);
    GateKindPtr kind = builtin_gate(word);
    if (!kind) {
      auto it = custom_.find(word);
      if (it == custom_.end()) error_at("unknown gate '" + word + "'", line, col);
      kind = it->second;
    }
    std::vector<int> qubits;
    while (true) {
      skip_blanks();
      if (peek() != 'q') break;
      qubits.push_back(parse_qubit_ref());
    }
    if (static_cast<int>(qubits.size()) != kind->arity) {
      error_at("gate '" + word + "' expects " + std::to_string(kind->arity) +
                   " qubit(s), got " + std::to_string(qubits.size()),
               line, col);
    }
    std::set<int> uniq(qubits.begin(), qubits.end());
    if (uniq.size() != qubits.size()) {
      error_at("gate '" + word + "' applied to a repeated qubit", line, col);
    }
    return make_gate(kind, std::move(qubits));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int nqubits_ = 0;
  int max_qubit_ = -1;
  std::map<std::string, GateKindPtr, std::less<>> custom_;
};

// ---------------------------------------------------------------------------
// Printer

std::string format_real(double v) {
  char buf[40];
  if (v == 0.0) v = 0.0;
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex_impl(Complex c) {
  double im = c.imag() == 0.0 ? 0.0 : c.imag();
  return format_real(c.real()) + (std::signbit(im) ? "-" : "+") +
         format_real(std::fabs(im)) + "i";
}

void collect_custom(const Node& node, std::vector<GateKindPtr>& out,
                    std::set<std::string>& seen) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SeqStmt>) {
          collect_custom(*s.first, out, seen);
          collect_custom(*s.second, out, seen);
        } else if constexpr (std::is_same_v<T, GateStmt>) {
          if (!s.kind->builtin && seen.insert(s.kind->name).second) out.push_back(s.kind);
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          collect_custom(*s.then0, out, seen);
          collect_custom(*s.else1, out, seen);
        }
      },
      node.value);
}

void print_stmts(const Node& node, int indent, std::ostringstream& os);

void print_single(const Node& node, int indent, std::ostringstream& os) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SkipStmt>) {
          os << pad << "skip\n";
        } else if constexpr (std::is_same_v<T, SeqStmt>) {
          // Only reached for a left-nested sequence: keep it grouped.
          os << pad << "{\n";
          print_stmts(node, indent + 1, os);
          os << pad << "}\n";
        } else if constexpr (std::is_same_v<T, GateStmt>) {
          os << pad << s.kind->name;
          for (int q : s.qubits) os << " q" << q;
          os << "\n";
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          os << pad << "if q" << s.qubit << " {\n";
          print_stmts(*s.then0, indent + 1, os);
          os << pad << "} else {\n";
          print_stmts(*s.else1, indent + 1, os);
          os << pad << "}\n";
        }
      },
      node.value);
}

// Prints a right-nested chain flat; a Seq in first position is grouped.
void print_stmts(const Node& node, int indent, std::ostringstream& os) {
  const Node* cur = &node;
  while (const auto* seq = std::get_if<SeqStmt>(&cur->value)) {
    print_single(*seq->first, indent, os);
    cur = seq->second.get();
  }
  // A trailing skip inside a chain must survive the round trip.
  print_single(*cur, indent, os);
}

std::size_t count_gates(const Node& node) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SeqStmt>) {
          return count_gates(*s.first) + count_gates(*s.second);
        } else if constexpr (std::is_same_v<T, GateStmt>) {
          return 1;
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          return count_gates(*s.then0) + count_gates(*s.else1);
        } else {
          return 0;
        }
      },
      node.value);
}

std::size_t count_ifs(const Node& node) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SeqStmt>) {
          return count_ifs(*s.first) + count_ifs(*s.second);
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          return 1 + count_ifs(*s.then0) + count_ifs(*s.else1);
        } else {
          return 0;
        }
      },
      node.value);
}

// Paths of `node` when followed by a continuation with `tail` paths.
std::size_t paths(const Node& node, std::size_t tail, std::size_t limit) {
  auto sat = [limit](std::size_t v) { return std::min(v, limit + 1); };
  return std::visit(
      [&](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SeqStmt>) {
          return paths(*s.first, paths(*s.second, tail, limit), limit);
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          return sat(paths(*s.then0, tail, limit) + paths(*s.else1, tail, limit));
        } else {
          return tail;
        }
      },
      node.value);
}

void check_cap(const Program& program, std::size_t cap) {
  std::size_t count = branch_count(program.body(), cap);
  if (count > cap) {
    throw BranchCapError("program has more than " + std::to_string(cap) +
                         " measurement branches (branch cap " + std::to_string(cap) +
                         "); raise --branch-cap to analyze it");
  }
}

void expand(const Node& node, std::vector<Branch>& partial) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SeqStmt>) {
          expand(*s.first, partial);
          expand(*s.second, partial);
        } else if constexpr (std::is_same_v<T, GateStmt>) {
          for (auto& b : partial) {
            BranchStep step;
            step.kind = BranchStep::Kind::Gate;
            step.gate = s;
            b.steps.push_back(step);
          }
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          std::vector<Branch> zero = partial;
          std::vector<Branch> one = std::move(partial);
          auto mark = [&s](std::vector<Branch>& bs, int outcome) {
            for (auto& b : bs) {
              b.label.push_back({s.qubit, outcome});
              BranchStep step;
              step.kind = BranchStep::Kind::Project;
              step.qubit = s.qubit;
              step.outcome = outcome;
              b.steps.push_back(step);
            }
          };
          mark(zero, 0);
          mark(one, 1);
          expand(*s.then0, zero);
          expand(*s.else1, one);
          partial = std::move(zero);
          partial.insert(partial.end(), std::make_move_iterator(one.begin()),
                         std::make_move_iterator(one.end()));
        }
      },
      node.value);
}

NodePtr normalize(const NodePtr& node, const NodePtr& cont) {
  return std::visit(
      [&](const auto& s) -> NodePtr {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SkipStmt>) {
          return cont;
        } else if constexpr (std::is_same_v<T, SeqStmt>) {
          return normalize(s.first, normalize(s.second, cont));
        } else if constexpr (std::is_same_v<T, GateStmt>) {
          if (std::holds_alternative<SkipStmt>(cont->value)) return node;
          return make_seq(node, cont);
        } else {
          return make_if(s.qubit, normalize(s.then0, cont), normalize(s.else1, cont));
        }
      },
      node->value);
}

}  // namespace

GateKindPtr builtin_gate(std::string_view name) {
  if (name == "cx") name = "cnot";
  const auto& t = builtin_table();
  auto it = t.find(name);
  return it == t.end() ? nullptr : it->second;
}

const std::vector<std::string>& builtin_gate_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : builtin_table()) v.push_back(k);
    return v;
  }();
  return names;
}

GateKindPtr make_gate_kind(std::string name, CMatrix matrix) {
  if (matrix.rows() != matrix.cols() || (matrix.rows() != 2 && matrix.rows() != 4)) {
    throw InputError("gate '" + name + "' must be a 2x2 or 4x4 matrix");
  }
  if (!is_unitary(matrix, 1e-10)) {
    throw InputError("gate '" + name + "' is not unitary within 1e-10");
  }
  auto k = std::make_shared<GateKind>();
  k->name = std::move(name);
  k->arity = exact_log2(matrix.rows());
  k->matrix = std::move(matrix);
  return k;
}

NodePtr make_skip() {
  static const NodePtr s = std::make_shared<const Node>(Node{SkipStmt{}});
  return s;
}

NodePtr make_seq(NodePtr first, NodePtr second) {
  return std::make_shared<const Node>(Node{SeqStmt{std::move(first), std::move(second)}});
}

NodePtr make_gate(GateKindPtr kind, std::vector<int> qubits) {
  return std::make_shared<const Node>(Node{GateStmt{std::move(kind), std::move(qubits)}});
}

NodePtr make_if(int qubit, NodePtr then0, NodePtr else1) {
  return std::make_shared<const Node>(Node{IfStmt{qubit, std::move(then0), std::move(else1)}});
}

NodePtr make_block(const std::vector<NodePtr>& stmts) {
  if (stmts.empty()) return make_skip();
  NodePtr acc = stmts.back();
  for (auto it = stmts.rbegin() + 1; it != stmts.rend(); ++it) acc = make_seq(*it, acc);
  return acc;
}

Program::Program(int nqubits, NodePtr body) : nqubits_(nqubits), body_(std::move(body)) {
  if (nqubits_ <= 0) throw InputError("program must have at least one qubit");
  if (!body_) throw InputError("program body is null");
  validate_node(*body_, nqubits_);
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.value.index() != b.value.index()) return false;
  return std::visit(
      [&b](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        const auto& o = std::get<T>(b.value);
        if constexpr (std::is_same_v<T, SkipStmt>) {
          return true;
        } else if constexpr (std::is_same_v<T, SeqStmt>) {
          return structurally_equal(*s.first, *o.first) &&
                 structurally_equal(*s.second, *o.second);
        } else if constexpr (std::is_same_v<T, GateStmt>) {
          return s.kind->name == o.kind->name && s.qubits == o.qubits &&
                 s.kind->matrix == o.kind->matrix;
        } else {
          return s.qubit == o.qubit && structurally_equal(*s.then0, *o.then0) &&
                 structurally_equal(*s.else1, *o.else1);
        }
      },
      a.value);
}

ParseError::ParseError(const std::string& message, int line, int column)
    : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                 ": " + message),
      line_(line),
      column_(column) {}

Program parse_program(std::string_view text) { return Parser(text).parse(); }

std::string print_program(const Program& program) {
  std::ostringstream os;
  os << "qubits " << program.nqubits() << "\n";
  std::vector<GateKindPtr> custom;
  std::set<std::string> seen;
  collect_custom(program.body(), custom, seen);
  for (const auto& k : custom) {
    os << "gate " << k->name << " [";
    for (Eigen::Index i = 0; i < k->matrix.rows(); ++i) {
      if (i > 0) os << "; ";
      for (Eigen::Index j = 0; j < k->matrix.cols(); ++j) {
        if (j > 0) os << ", ";
        os << format_complex_literal(k->matrix(i, j));
      }
    }
    os << "]\n";
  }
  print_stmts(program.body(), 0, os);
  return os.str();
}

std::size_t gate_count(const Program& program) { return count_gates(program.body()); }

std::size_t if_count(const Program& program) { return count_ifs(program.body()); }

std::size_t branch_count(const Node& node, std::size_t limit) {
  return paths(node, 1, limit);
}

Program Branch::straight_line(int nqubits) const {
  std::vector<NodePtr> gates;
  for (const auto& step : steps) {
    if (step.kind == BranchStep::Kind::Gate) {
      gates.push_back(make_gate(step.gate.kind, step.gate.qubits));
    }
  }
  return Program(nqubits, make_block(gates));
}

std::string Branch::label_string() const {
  std::string out;
  for (const auto& m : label) {
    if (!out.empty()) out += ",";
    out += "q" + std::to_string(m.qubit) + "=" + std::to_string(m.outcome);
  }
  return out;
}

std::vector<Branch> enumerate_branches(const Program& program, std::size_t cap) {
  check_cap(program, cap);
  std::vector<Branch> partial(1);
  expand(program.body(), partial);
  return partial;
}

Program branch_normal_form(const Program& program, std::size_t cap) {
  check_cap(program, cap);
  return Program(program.nqubits(), normalize(program.body_ptr(), make_skip()));
}

bool parse_complex_literal(std::string_view s, Complex& out) {
  const std::string buf(s);
  if (s.empty()) return false;
  const char* begin = buf.c_str();
  const char* end = begin + buf.size();
  auto parse_imag_unit = [&](const char* p, double scale) -> bool {
    // Accepts "i", "+i", "-i".
    double sign = 1.0;
    if (*p == '+' || *p == '-') {
      sign = (*p == '-') ? -1.0 : 1.0;
      ++p;
    }
    if (p + 1 == end && *p == 'i') {
      out = Complex(0.0, sign * scale);
      return true;
    }
    return false;
  };
  if (parse_imag_unit(begin, 1.0)) return true;
  char* p = nullptr;
  double re = std::strtod(begin, &p);
  if (p == begin || !std::isfinite(re)) return false;
  if (p == end) {
    out = Complex(re, 0.0);
    return true;
  }
  if (*p == 'i' && p + 1 == end) {
    out = Complex(0.0, re);
    return true;
  }
  if (*p != '+' && *p != '-') return false;
  const char* imag_begin = p;
  if (imag_begin + 2 == end && imag_begin[1] == 'i') {
    out = Complex(re, imag_begin[0] == '-' ? -1.0 : 1.0);
    return true;
  }
  char* q = nullptr;
  double im = std::strtod(imag_begin, &q);
  if (q == imag_begin || *q != 'i' || q + 1 != end || !std::isfinite(im)) return false;
  out = Complex(re, im);
  return true;
}

std::string format_complex_literal(Complex value) { return format_complex_impl(value); }

BasisState BasisState::parse(std::string_view text) {
  BasisState s;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw InputError("basis state must consist of '0'/'1' characters, got '" +
                       std::string(text) + "'");
    }
    s.bits.push_back(c - '0');
  }
  if (s.bits.empty()) throw InputError("basis state is empty");
  return s;
}

BasisState BasisState::zeros(int n) {
  BasisState s;
  s.bits.assign(static_cast<std::size_t>(n), 0);
  return s;
}

std::string BasisState::to_string() const {
  std::string out;
  for (int b : bits) out.push_back(static_cast<char>('0' + b));
  return out;
}

}  // namespace qerr
