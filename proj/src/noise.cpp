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

#include "qerr/noise.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace qerr {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError(std::string(what) + " probability must lie in [0, 1], got " +
                     std::to_string(p));
  }
}

// Pauli string for index k in base 4, first qubit most significant.
CMatrix pauli_string(int k, int arity) {
  if (arity == 1) return pauli(k);
  return kron(pauli(k / 4), pauli(k % 4));
}

}  // namespace

CMatrix kraus_to_superoperator(const std::vector<CMatrix>& kraus) {
  const Eigen::Index d = kraus.front().rows();
  CMatrix s = CMatrix::Zero(d * d, d * d);
  for (const auto& e : kraus) s += kron(e.conjugate(), e);
  return s;
}

CMatrix kraus_to_choi(const std::vector<CMatrix>& kraus) {
  const Eigen::Index d = kraus.front().rows();
  CMatrix j = CMatrix::Zero(d * d, d * d);
  for (const auto& e : kraus) {
    // Column-major storage makes the flat view exactly v[i*d + a] = E(a, i).
    Eigen::Map<const CVector> v(e.data(), d * d);
    j += v * v.adjoint();
  }
  return j;
}

CMatrix superoperator_to_choi(const CMatrix& superop) {
  const Eigen::Index d = static_cast<Eigen::Index>(std::llround(std::sqrt(superop.rows())));
  CMatrix j(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index jj = 0; jj < d; ++jj)
        for (Eigen::Index b = 0; b < d; ++b)
          j(i * d + a, jj * d + b) = superop(b * d + a, jj * d + i);
  return j;
}

CMatrix choi_to_superoperator(const CMatrix& choi) {
  const Eigen::Index d = static_cast<Eigen::Index>(std::llround(std::sqrt(choi.rows())));
  CMatrix s(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index jj = 0; jj < d; ++jj)
        for (Eigen::Index b = 0; b < d; ++b)
          s(b * d + a, jj * d + i) = choi(i * d + a, jj * d + b);
  return s;
}

std::vector<CMatrix> choi_to_kraus(const CMatrix& choi) {
  const Eigen::Index d = static_cast<Eigen::Index>(std::llround(std::sqrt(choi.rows())));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(choi));
  if (es.info() != Eigen::Success) throw NumericalError("Choi eigendecomposition failed");
  const double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  std::vector<CMatrix> out;
  for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
    const double lam = es.eigenvalues()(k);
    if (lam < -1e-9 * top) throw InputError("Choi matrix is not positive semidefinite");
    if (lam <= 1e-13 * top) continue;
    CVector v = std::sqrt(lam) * es.eigenvectors().col(k);
    out.push_back(Eigen::Map<const CMatrix>(v.data(), d, d));
  }
  if (out.empty()) out.push_back(CMatrix::Zero(d, d));
  return out;
}

Channel::Channel(std::vector<CMatrix> kraus, double tp_tol) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw InputError("channel needs at least one Kraus operator");
  const Eigen::Index d = kraus_.front().rows();
  if (d != 2 && d != 4) throw InputError("channel dimension must be 2 or 4");
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& e : kraus_) {
    if (e.rows() != d || e.cols() != d) {
      throw InputError("Kraus operators must all be " + std::to_string(d) + "x" +
                       std::to_string(d));
    }
    if (!e.allFinite()) throw InputError("Kraus operator has non-finite entries");
    sum += e.adjoint() * e;
  }
  const double dev = max_abs(sum - CMatrix::Identity(d, d));
  if (dev > tp_tol) {
    std::ostringstream os;
    os << "channel is not trace preserving: max |sum E^dag E - I| = " << dev;
    throw InputError(os.str());
  }
  dim_ = static_cast<int>(d);
  arity_ = exact_log2(d);
  superop_ = kraus_to_superoperator(kraus_);
  choi_ = kraus_to_choi(kraus_);
}

Channel Channel::identity(int arity) {
  if (arity != 1 && arity != 2) throw InputError("channel arity must be 1 or 2");
  const int d = 1 << arity;
  return Channel({CMatrix::Identity(d, d)});
}

Channel Channel::from_superoperator(const CMatrix& superop) {
  return from_choi(superoperator_to_choi(superop));
}

Channel Channel::from_choi(const CMatrix& choi) { return Channel(choi_to_kraus(choi)); }

CMatrix Channel::apply(const CMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw InputError("density matrix dimension does not match channel");
  }
  CMatrix out = CMatrix::Zero(dim_, dim_);
  for (const auto& e : kraus_) out += e * rho * e.adjoint();
  return out;
}

Channel channel_from_unitary(const CMatrix& u) {
  if (u.rows() != u.cols() || (u.rows() != 2 && u.rows() != 4)) {
    throw InputError("unitary must be 2x2 or 4x4");
  }
  if (!is_unitary(u, 1e-10)) throw InputError("matrix is not unitary within 1e-10");
  return Channel({u});
}

Channel bit_flip(double p) {
  check_probability(p, "bit flip");
  return Channel({std::sqrt(1.0 - p) * pauli(0), std::sqrt(p) * pauli(1)});
}

Channel phase_flip(double p) {
  check_probability(p, "phase flip");
  return Channel({std::sqrt(1.0 - p) * pauli(0), std::sqrt(p) * pauli(3)});
}

Channel depolarizing(double p) {
  check_probability(p, "depolarizing");
  const double q = std::sqrt(p / 4.0);
  return Channel({std::sqrt(1.0 - 3.0 * p / 4.0) * pauli(0), q * pauli(1), q * pauli(2),
                  q * pauli(3)});
}

Channel decoherence(double gamma, double lam) {
  if (!(gamma >= 0.0 && lam >= 0.0 && gamma + lam <= 1.0 + 1e-15)) {
    throw InputError("decoherence needs gamma >= 0, lambda >= 0 and gamma + lambda <= 1");
  }
  const Complex i(0.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - gamma - lam));
  CMatrix e1 = (1.0 + s) / 2.0 * pauli(0) + (1.0 - s) / 2.0 * pauli(3);
  CMatrix e2 = std::sqrt(gamma) / 2.0 * pauli(1) + i * std::sqrt(gamma) / 2.0 * pauli(2);
  CMatrix e3 = std::sqrt(lam) / 2.0 * pauli(0) - std::sqrt(lam) / 2.0 * pauli(3);
  return Channel({e1, e2, e3});
}

Channel pauli_twirl(const Channel& n) {
  if (n.arity() != 1) throw InputError("pauli_twirl expects a 1-qubit channel");
  std::vector<CMatrix> kraus;
  for (int p = 0; p < 4; ++p) {
    for (const auto& e : n.kraus()) kraus.push_back(0.5 * pauli(p) * e * pauli(p));
  }
  // Re-derive a minimal Kraus set; the twirled channel is diagonal in Paulis.
  return Channel(choi_to_kraus(kraus_to_choi(kraus)));
}

RMatrix pauli_transfer_matrix(const Channel& c) {
  const int n = c.dim() * c.dim();
  RMatrix r(n, n);
  for (int j = 0; j < n; ++j) {
    CMatrix out = c.apply(pauli_string(j, c.arity()));
    for (int i = 0; i < n; ++i) {
      r(i, j) = (pauli_string(i, c.arity()) * out).trace().real() / c.dim();
    }
  }
  return r;
}

Channel compose(const Channel& after, const Channel& before) {
  if (after.dim() != before.dim()) throw InputError("cannot compose channels of different size");
  std::vector<CMatrix> kraus;
  for (const auto& a : after.kraus())
    for (const auto& b : before.kraus()) kraus.push_back(a * b);
  const std::size_t d2 = static_cast<std::size_t>(after.dim() * after.dim());
  if (kraus.size() > d2) kraus = choi_to_kraus(kraus_to_choi(kraus));
  return Channel(std::move(kraus));
}

Channel extend_to_first_qubit(const Channel& c) {
  if (c.arity() != 1) throw InputError("only 1-qubit channels can be extended");
  std::vector<CMatrix> kraus;
  for (const auto& e : c.kraus()) kraus.push_back(kron(e, CMatrix::Identity(2, 2)));
  return Channel(std::move(kraus));
}

HermitianMap difference(const Channel& a, const Channel& b) {
  if (a.dim() != b.dim()) throw InputError("channel difference needs equal dimensions");
  HermitianMap m;
  m.dim = a.dim();
  m.superoperator = a.superoperator() - b.superoperator();
  m.choi = a.choi() - b.choi();
  return m;
}

HermitianMap zero_map(int dim) {
  HermitianMap m;
  m.dim = dim;
  m.superoperator = CMatrix::Zero(dim * dim, dim * dim);
  m.choi = CMatrix::Zero(dim * dim, dim * dim);
  return m;
}

// ---------------------------------------------------------------------------
// Noise model

void NoiseModel::add_rule(NoiseRule rule) { rules_.push_back(std::move(rule)); }

void NoiseModel::set_default(int arity, Channel noise, std::string expr) {
  if (arity == 1) {
    if (noise.arity() != 1) throw InputError("default for 1-qubit gates must be a 1-qubit channel");
    default1_ = std::move(noise);
    default1_expr_ = std::move(expr);
  } else if (arity == 2) {
    default2_ = std::move(noise);
    default2_expr_ = std::move(expr);
  } else {
    throw InputError("default arity must be 1 or 2");
  }
}

const std::optional<Channel>& NoiseModel::default_noise(int arity) const {
  return arity == 1 ? default1_ : default2_;
}

const NoiseRule* NoiseModel::match(const GateStmt& g) const {
  for (const auto& r : rules_) {
    if (r.gate != "*" && r.gate != g.kind->name &&
        !(r.gate == "cx" && g.kind->name == "cnot")) {
      continue;
    }
    if (r.qubits) {
      const auto& allowed = *r.qubits;
      bool ok = std::all_of(g.qubits.begin(), g.qubits.end(), [&](int q) {
        return std::find(allowed.begin(), allowed.end(), q) != allowed.end();
      });
      if (!ok) continue;
    }
    return &r;
  }
  return nullptr;
}

namespace {

Channel noisy_gate(const GateStmt& g, const Channel& noise, bool replace,
                   const std::string& where) {
  Channel ideal = channel_from_unitary(g.kind->matrix);
  if (replace) {
    if (noise.arity() != g.kind->arity) {
      throw InputError(where + ": replacement channel acts on " +
                       std::to_string(noise.arity()) + " qubit(s) but gate '" +
                       g.kind->name + "' acts on " + std::to_string(g.kind->arity));
    }
    return noise;
  }
  if (noise.arity() == g.kind->arity) return compose(noise, ideal);
  if (noise.arity() == 1 && g.kind->arity == 2) {
    return compose(extend_to_first_qubit(noise), ideal);
  }
  throw InputError(where + ": 2-qubit noise cannot follow 1-qubit gate '" + g.kind->name + "'");
}

}  // namespace

Channel NoiseModel::lookup(const GateStmt& g) const {
  if (const NoiseRule* r = match(g)) {
    return noisy_gate(g, r->channel, r->replace, "noise rule on line " + std::to_string(r->line));
  }
  const auto& def = default_noise(g.kind->arity);
  if (def) return noisy_gate(g, *def, false, "default noise");
  return channel_from_unitary(g.kind->matrix);
}

std::string NoiseModel::describe(const GateStmt& g) const {
  if (const NoiseRule* r = match(g)) {
    return (r->replace ? "replace " : "") + r->expr;
  }
  const auto& def = default_noise(g.kind->arity);
  if (def) return g.kind->arity == 1 ? default1_expr_ : default2_expr_;
  return "ideal";
}

// ---------------------------------------------------------------------------
// Noise-model parser

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, int line, int col0) : text_(text), line_(line), col0_(col0) {}

  Channel parse_all() {
    Channel c = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) error("unexpected trailing text in channel expression");
    return c;
  }

 private:
  [[noreturn]] void error(const std::string& message) const {
    throw ParseError(message, line_, col0_ + static_cast<int>(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string ident() {
    skip_ws();
    std::string w;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      w.push_back(text_[pos_++]);
    }
    return w;
  }

  std::string token_until(std::string_view stops) {
    skip_ws();
    std::string t;
    while (pos_ < text_.size() && stops.find(text_[pos_]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      t.push_back(text_[pos_++]);
    }
    return t;
  }

  double number() {
    std::size_t at = pos_;
    std::string t = token_until(",)");
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
      pos_ = at;
      skip_ws();
      error("expected a number, found '" + t + "'");
    }
    return v;
  }

  std::vector<double> args(std::size_t count, const std::string& name) {
    expect('(');
    std::vector<double> v;
    while (true) {
      v.push_back(number());
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(')');
      break;
    }
    if (v.size() != count) {
      error(name + " takes " + std::to_string(count) + " argument(s), got " +
            std::to_string(v.size()));
    }
    return v;
  }

  CMatrix matrix() {
    expect('[');
    std::vector<std::vector<Complex>> rows(1);
    while (true) {
      std::string t = token_until(",;]");
      Complex c;
      if (!parse_complex_literal(t, c)) error("malformed complex literal '" + t + "'");
      rows.back().push_back(c);
      char s = peek();
      ++pos_;
      if (s == ',') continue;
      if (s == ';') {
        rows.emplace_back();
        continue;
      }
      if (s == ']') break;
      --pos_;
      error("expected ',', ';' or ']' in matrix");
    }
    const std::size_t d = rows.size();
    CMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r) {
      if (rows[r].size() != d) error("Kraus matrix must be square");
      for (std::size_t c = 0; c < d; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  Channel parse_expr() {
    std::size_t at = pos_;
    std::string name = ident();
    auto wrap = [&](auto&& make) -> Channel {
      try {
        return make();
      } catch (const ParseError&) {
        throw;
      } catch (const InputError& e) {
        pos_ = at;
        skip_ws();
        error(e.what());
      }
    };
    if (name == "none") return Channel::identity(1);
    if (name == "bitflip") {
      auto a = args(1, name);
      return wrap([&] { return bit_flip(a[0]); });
    }
    if (name == "phaseflip") {
      auto a = args(1, name);
      return wrap([&] { return phase_flip(a[0]); });
    }
    if (name == "depolarizing") {
      auto a = args(1, name);
      return wrap([&] { return depolarizing(a[0]); });
    }
    if (name == "decoherence") {
      auto a = args(2, name);
      return wrap([&] { return decoherence(a[0], a[1]); });
    }
    if (name == "twirl") {
      expect('(');
      Channel inner = parse_expr();
      expect(')');
      return wrap([&] { return pauli_twirl(inner); });
    }
    if (name == "kraus") {
      expect('[');
      std::vector<CMatrix> ops;
      while (true) {
        ops.push_back(matrix());
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(']');
        break;
      }
      return wrap([&] { return Channel(std::move(ops)); });
    }
    pos_ = at;
    skip_ws();
    if (name.empty()) error("expected a channel expression");
    error("unknown channel '" + name + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  int col0_;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

Channel parse_channel_expr(std::string_view text) { return ExprParser(text, 1, 1).parse_all(); }

NoiseModel parse_noise_model(std::string_view text) {
  NoiseModel model;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view raw = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = raw.substr(0, raw.find('#'));
    if (trim(line).empty()) continue;

    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected ':' in noise rule", line_no, 1);
    std::istringstream head{std::string(line.substr(0, colon))};
    std::string kw;
    head >> kw;
    std::string_view rhs = line.substr(colon + 1);
    const int rhs_col = static_cast<int>(colon) + 2;

    if (kw == "default") {
      int arity = 0;
      std::string extra;
      if (!(head >> arity) || (head >> extra) || (arity != 1 && arity != 2)) {
        throw ParseError("expected 'default 1' or 'default 2'", line_no, 1);
      }
      Channel c = ExprParser(rhs, line_no, rhs_col).parse_all();
      if (c.arity() > arity) {
        throw ParseError("default noise for " + std::to_string(arity) +
                             "-qubit gates cannot act on 2 qubits",
                         line_no, rhs_col);
      }
      model.set_default(arity, std::move(c), trim(rhs));
      continue;
    }
    if (kw != "gate") {
      throw ParseError("expected 'gate' or 'default', found '" + kw + "'", line_no, 1);
    }
    NoiseRule rule;
    rule.line = line_no;
    if (!(head >> rule.gate)) throw ParseError("expected gate name or '*'", line_no, 1);
    std::string word;
    if (head >> word) {
      if (word != "on") throw ParseError("expected 'on' after gate name", line_no, 1);
      std::vector<int> qs;
      while (head >> word) {
        if (word.size() < 2 || word[0] != 'q' ||
            !std::all_of(word.begin() + 1, word.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
          throw ParseError("expected qubit reference qN, found '" + word + "'", line_no, 1);
        }
        qs.push_back(std::atoi(word.c_str() + 1));
      }
      if (qs.empty()) throw ParseError("'on' needs at least one qubit", line_no, 1);
      rule.qubits = std::move(qs);
    }
    std::string body = trim(rhs);
    int body_col = rhs_col;
    if (body.rfind("replace", 0) == 0 &&
        (body.size() == 7 || std::isspace(static_cast<unsigned char>(body[7])))) {
      rule.replace = true;
      std::size_t off = rhs.find("replace") + 7;
      rhs = rhs.substr(off);
      body_col += static_cast<int>(off);
      body = trim(rhs);
    }
    rule.channel = ExprParser(rhs, line_no, body_col).parse_all();
    rule.expr = body;
    if (rule.gate != "*") {
      if (GateKindPtr k = builtin_gate(rule.gate)) {
        if (rule.replace ? rule.channel.arity() != k->arity : rule.channel.arity() > k->arity) {
          throw ParseError("channel size does not match gate '" + rule.gate + "'", line_no,
                           body_col);
        }
      }
    }
    model.add_rule(std::move(rule));
  }
  return model;
}

}  // namespace qerr
