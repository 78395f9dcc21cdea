// Copyright 2026 The FCQW Authors
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

#include <charconv>
#include <regex>
#include <sstream>

#include "fcqw/circuit.hpp"
#include "fcqw/errors.hpp"
#include "fcqw/format.hpp"
#include "fcqw/harness.hpp"

namespace fcqw {

namespace {

constexpr std::string_view kLabelPrefix = "// circuit: ";

std::string qref(std::size_t q) { return "q[" + std::to_string(q) + "]"; }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Statement {
  std::size_t line;
  std::string text;
};

struct GateStatement {
  std::string name;
  std::optional<double> angle;
  std::vector<std::size_t> qubits;
};

}  // namespace

std::string emit_qasm3(const Circuit& circuit) {
  std::ostringstream out;
  out << "OPENQASM 3.0;\n";
  out << "include \"stdgates.inc\";\n";
  if (!circuit.label().empty()) out << kLabelPrefix << circuit.label() << '\n';
  out << "qubit[" << circuit.num_qubits() << "] q;\n";
  for (const auto& g : circuit.instructions()) {
    switch (g.kind) {
      case GateKind::H:
        out << "h " << qref(g.qubits[0]) << ";\n";
        break;
      case GateKind::HY:
        out << "// hy " << qref(g.qubits[0]) << '\n';
        out << "sdg " << qref(g.qubits[0]) << ";\n";
        out << "h " << qref(g.qubits[0]) << ";\n";
        out << "s " << qref(g.qubits[0]) << ";\n";
        break;
      case GateKind::RZ:
        out << "rz(" << format_double(*g.theta) << ") " << qref(g.qubits[0]) << ";\n";
        break;
      case GateKind::CNOT:
        out << "cx " << qref(g.qubits[0]) << ", " << qref(g.qubits[1]) << ";\n";
        break;
      case GateKind::SWAP:
        out << "swap " << qref(g.qubits[0]) << ", " << qref(g.qubits[1]) << ";\n";
        break;
    }
  }
  return out.str();
}

Circuit parse_qasm_minimal(std::string_view text) {
  std::vector<Statement> statements;
  std::string label;
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos <= text.size();) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = trim(raw);
    if (line.starts_with(kLabelPrefix) && statements.size() <= 2) {
      label = std::string(line.substr(kLabelPrefix.size()));
      continue;
    }
    if (const auto c = line.find("//"); c != std::string_view::npos) line = trim(line.substr(0, c));
    if (line.empty()) continue;
    statements.push_back({line_no, std::string(line)});
  }

  static const std::regex header_re(R"(^OPENQASM\s+3(\.0)?\s*;$)");
  static const std::regex include_re(R"(^include\s+"stdgates\.inc"\s*;$)");
  static const std::regex qubit_re(R"(^qubit\s*\[\s*(\d+)\s*\]\s*([A-Za-z_]\w*)\s*;$)");
  static const std::regex gate_re(
      R"(^([a-z]+)\s*(?:\(\s*([^)]*?)\s*\))?\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\])"
      R"((?:\s*,\s*([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\])?\s*;$)");

  if (statements.empty() || !std::regex_match(statements[0].text, header_re)) {
    throw ParseError(statements.empty() ? line_no : statements[0].line,
                     "expected 'OPENQASM 3.0;' header");
  }
  std::size_t i = 1;
  if (i < statements.size() && std::regex_match(statements[i].text, include_re)) ++i;

  std::smatch m;
  if (i >= statements.size() || !std::regex_match(statements[i].text, m, qubit_re)) {
    throw ParseError(i < statements.size() ? statements[i].line : line_no,
                     "expected a single 'qubit[N] name;' register declaration");
  }
  const std::string reg = m[2].str();
  std::size_t width = 0;
  try {
    width = std::stoul(m[1].str());
  } catch (const std::exception&) {
    throw ParseError(statements[i].line, "register size out of range");
  }
  if (width < 1 || width > kMaxQubits) {
    throw ParseError(statements[i].line, "register size outside [1, " +
                                             std::to_string(kMaxQubits) + "]");
  }
  ++i;
  Circuit circuit(width, label);

  auto parse_gate = [&](const Statement& st) {
    std::smatch g;
    if (!std::regex_match(st.text, g, gate_re)) {
      throw ParseError(st.line, "unsupported statement '" + st.text + "'");
    }
    GateStatement out;
    out.name = g[1].str();
    if (g[2].matched) {
      const std::string a = g[2].str();
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), v);
      if (ec != std::errc() || ptr != a.data() + a.size()) {
        throw ParseError(st.line, "angle '" + a + "' is not a plain decimal number");
      }
      out.angle = v;
    }
    for (int k : {3, 5}) {
      if (!g[k].matched) continue;
      if (g[k].str() != reg) throw ParseError(st.line, "unknown register '" + g[k].str() + "'");
      std::size_t q = 0;
      try {
        q = std::stoul(g[k + 1].str());
      } catch (const std::exception&) {
        throw ParseError(st.line, "qubit index out of range");
      }
      if (q >= width) throw ParseError(st.line, "qubit index " + std::to_string(q) + " out of range");
      out.qubits.push_back(q);
    }
    return out;
  };

  auto expect_shape = [](const Statement& st, const GateStatement& g, std::size_t nq,
                         bool angle) {
    if (g.qubits.size() != nq) {
      throw ParseError(st.line, g.name + " takes " + std::to_string(nq) + " qubit operand(s)");
    }
    if (g.angle.has_value() != angle) {
      throw ParseError(st.line, angle ? g.name + " needs an angle" : g.name + " takes no angle");
    }
    if (nq == 2 && g.qubits[0] == g.qubits[1]) {
      throw ParseError(st.line, g.name + " operands must be distinct");
    }
  };

  for (; i < statements.size(); ++i) {
    const Statement& st = statements[i];
    if (std::regex_match(st.text, qubit_re)) {
      throw ParseError(st.line, "only one qubit register is supported");
    }
    const GateStatement g = parse_gate(st);
    if (g.name == "h") {
      expect_shape(st, g, 1, false);
      circuit.append(GateInstruction::h(g.qubits[0]));
    } else if (g.name == "rz") {
      expect_shape(st, g, 1, true);
      circuit.append(GateInstruction::rz(g.qubits[0], *g.angle));
    } else if (g.name == "cx") {
      expect_shape(st, g, 2, false);
      circuit.append(GateInstruction::cnot(g.qubits[0], g.qubits[1]));
    } else if (g.name == "swap") {
      expect_shape(st, g, 2, false);
      circuit.append(GateInstruction::swap(g.qubits[0], g.qubits[1]));
    } else if (g.name == "sdg") {
      expect_shape(st, g, 1, false);
      const std::size_t q = g.qubits[0];
      for (const char* want : {"h", "s"}) {
        if (++i >= statements.size()) {
          throw ParseError(st.line, "incomplete hy decomposition: expected '" +
                                        std::string(want) + "' after 'sdg'");
        }
        const GateStatement next = parse_gate(statements[i]);
        if (next.name != want || next.qubits != std::vector<std::size_t>{q} || next.angle) {
          throw ParseError(statements[i].line, "expected '" + std::string(want) + " " +
                                                   reg + "[" + std::to_string(q) +
                                                   "];' inside hy decomposition");
        }
      }
      circuit.append(GateInstruction::hy(q));
    } else {
      throw ParseError(st.line, "unsupported gate '" + g.name + "'");
    }
  }
  return circuit;
}

}  // namespace fcqw
