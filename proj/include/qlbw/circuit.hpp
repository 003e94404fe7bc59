// Copyright 2026 The qlbw developers
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

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "qlbw/errors.hpp"
#include "qlbw/lattice.hpp"

namespace qlbw {

enum class GateKind { X, H, Swap, Phase, U, Measure };

/// One gate of the IR. Any unitary kind may carry controls; `polarity[i]`
/// false means the i-th control fires on |0> (expanded only at lowering).
struct Gate {
  GateKind kind = GateKind::X;
  std::vector<uint32_t> targets;
  std::vector<uint32_t> controls;
  std::vector<bool> polarity;
  double theta = 0.0;
  double phi = 0.0;
  double lambda = 0.0;

  static Gate x(uint32_t t) { return {GateKind::X, {t}, {}, {}}; }
  static Gate h(uint32_t t) { return {GateKind::H, {t}, {}, {}}; }
  static Gate swap(uint32_t a, uint32_t b) { return {GateKind::Swap, {a, b}, {}, {}}; }
  static Gate phase(double theta, uint32_t t) {
    return {GateKind::Phase, {t}, {}, {}, theta};
  }
  static Gate u(double theta, double phi, double lambda, uint32_t t) {
    return {GateKind::U, {t}, {}, {}, theta, phi, lambda};
  }
  static Gate measure(uint32_t t) { return {GateKind::Measure, {t}, {}, {}}; }

  static Gate cx(uint32_t c, uint32_t t) { return Gate::x(t).controlled({c}); }
  static Gate cphase(double theta, uint32_t c, uint32_t t) {
    return Gate::phase(theta, t).controlled({c});
  }
  static Gate mcx(std::vector<uint32_t> cs, uint32_t t) {
    return Gate::x(t).controlled(std::move(cs));
  }

  Gate controlled(std::vector<uint32_t> cs, std::vector<bool> pol = {}) const {
    Gate g = *this;
    if (pol.empty()) pol.assign(cs.size(), true);
    g.controls.insert(g.controls.end(), cs.begin(), cs.end());
    g.polarity.insert(g.polarity.end(), pol.begin(), pol.end());
    return g;
  }

  /// Adjoint. Phase and U negate their angles; the rest are self-adjoint.
  Gate adjoint() const {
    Gate g = *this;
    switch (kind) {
      case GateKind::Phase:
        g.theta = -theta;
        break;
      case GateKind::U:
        g.theta = -theta;
        g.phi = -lambda;
        g.lambda = -phi;
        break;
      case GateKind::Measure:
        throw Error(ErrorCode::NonUnitaryGate, "measurement has no adjoint");
      default:
        break;
    }
    return g;
  }

  /// Taxonomy label used by metrics and the debug dump.
  std::string kind_name() const {
    const std::size_t nc = controls.size();
    switch (kind) {
      case GateKind::X:
        return nc == 0 ? "x" : (nc == 1 ? "cx" : "mcx");
      case GateKind::H: return "h";
      case GateKind::Swap: return nc == 0 ? "swap" : "cswap";
      case GateKind::Phase:
        return nc == 0 ? "p" : (nc == 1 ? "cp" : "mcp");
      case GateKind::U: return "u";
      case GateKind::Measure: return "measure";
    }
    return "?";
  }

  bool is_diagonal() const { return kind == GateKind::Phase; }
};

/// Ordered gate list over a register map. Immutable by convention once built;
/// construction helpers validate indices and keep Measure gates terminal.
struct Circuit {
  RegisterMap regs;
  std::string name;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(RegisterMap r, std::string label = "")
      : regs(std::move(r)), name(std::move(label)) {}
  explicit Circuit(uint32_t n, std::string label = "")
      : regs(RegisterMap::flat(n)), name(std::move(label)) {}

  uint32_t qubit_count() const { return regs.total_qubits; }

  bool has_measure() const {
    return !gates.empty() && gates.back().kind == GateKind::Measure;
  }

  Circuit& add(Gate g) {
    validate_gate(g);
    if (has_measure() && g.kind != GateKind::Measure)
      throw Error(ErrorCode::MeasureNotTerminal,
                  "cannot append a unitary gate after measurement");
    gates.push_back(std::move(g));
    return *this;
  }

  void validate_gate(const Gate& g) const {
    if (g.targets.empty())
      throw Error(ErrorCode::IndexOutOfRange, "gate has no target");
    if (g.controls.size() != g.polarity.size())
      throw Error(ErrorCode::IndexOutOfRange, "control/polarity size mismatch");
    uint64_t seen = 0;  // qubit_count <= 63 throughout this project
    auto check = [&](uint32_t q) {
      if (q >= qubit_count())
        throw Error(ErrorCode::IndexOutOfRange,
                    "qubit " + std::to_string(q) + " outside circuit of " +
                        std::to_string(qubit_count()));
      const uint64_t bit = uint64_t{1} << q;
      if (seen & bit)
        throw Error(ErrorCode::IndexOutOfRange,
                    "qubit " + std::to_string(q) + " repeated in one gate");
      seen |= bit;
    };
    for (uint32_t q : g.targets) check(q);
    for (uint32_t q : g.controls) check(q);
    if (!std::isfinite(g.theta) || !std::isfinite(g.phi) || !std::isfinite(g.lambda))
      throw Error(ErrorCode::NonUnitaryGate, "gate angle is not finite");
  }
};

/// Append b's gates after a's, optionally remapping b's qubit indices.
inline Circuit compose(const Circuit& a, const Circuit& b,
                       const std::vector<uint32_t>& qubit_mapping = {}) {
  if (!qubit_mapping.empty() && qubit_mapping.size() < b.qubit_count())
    throw Error(ErrorCode::IndexOutOfRange,
                "qubit mapping smaller than composed circuit");
  if (a.has_measure() && !b.gates.empty())
    throw Error(ErrorCode::MeasureNotTerminal,
                "cannot compose past a measured circuit");
  auto map = [&](uint32_t q) -> uint32_t {
    const uint32_t m = qubit_mapping.empty() ? q : qubit_mapping[q];
    if (m >= a.qubit_count())
      throw Error(ErrorCode::IndexOutOfRange,
                  "mapped qubit " + std::to_string(m) + " outside circuit of " +
                      std::to_string(a.qubit_count()));
    return m;
  };
  Circuit out = a;
  for (std::size_t i = 0; i < b.gates.size(); ++i) {
    Gate g = b.gates[i];
    if (g.kind == GateKind::Measure && i + 1 < b.gates.size() &&
        b.gates[i + 1].kind != GateKind::Measure)
      throw Error(ErrorCode::MeasureNotTerminal,
                  "measurement mid-circuit in composed operand");
    for (auto& q : g.targets) q = map(q);
    for (auto& q : g.controls) q = map(q);
    out.add(std::move(g));
  }
  return out;
}

/// Reverse the gate list, replacing each gate by its adjoint.
inline Circuit inverse(const Circuit& c) {
  if (c.has_measure())
    throw Error(ErrorCode::NonUnitaryGate, "cannot invert a measured circuit");
  Circuit out(c.regs, c.name.empty() ? "" : c.name + "_dg");
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it)
    out.add(it->adjoint());
  return out;
}

/// Standard quantum Fourier transform on n qubits (LSB-first basis),
/// including the terminal qubit-reversal swaps, expanded into H, controlled
/// phases, and swaps.
inline Circuit qft(uint32_t n) {
  if (n < 1) throw Error(ErrorCode::IndexOutOfRange, "qft needs n >= 1");
  Circuit c(n, "qft" + std::to_string(n));
  for (uint32_t j = n; j-- > 0;) {
    c.add(Gate::h(j));
    for (uint32_t m = 0; m < j; ++m)
      c.add(Gate::cphase(std::numbers::pi / double(uint64_t{1} << (j - m)), m, j));
  }
  for (uint32_t i = 0; i < n / 2; ++i) c.add(Gate::swap(i, n - 1 - i));
  return c;
}

struct CircuitMetrics {
  std::size_t gate_count = 0;
  std::size_t depth = 0;
  std::map<std::string, std::size_t> per_kind;
};

/// Gate count, per-kind counts, and depth via a per-qubit frontier sweep.
inline CircuitMetrics metrics(const Circuit& c) {
  CircuitMetrics m;
  m.gate_count = c.gates.size();
  std::vector<std::size_t> frontier(c.qubit_count(), 0);
  for (const Gate& g : c.gates) {
    ++m.per_kind[g.kind_name()];
    std::size_t level = 0;
    for (uint32_t q : g.targets) level = std::max(level, frontier[q]);
    for (uint32_t q : g.controls) level = std::max(level, frontier[q]);
    ++level;
    for (uint32_t q : g.targets) frontier[q] = level;
    for (uint32_t q : g.controls) frontier[q] = level;
    m.depth = std::max(m.depth, level);
  }
  return m;
}

/// Textual debug dump, one gate per line:
///   KIND(params) targets | controls(polarity)
inline std::string dump(const Circuit& c) {
  std::string out;
  char buf[96];
  for (const Gate& g : c.gates) {
    std::string line = g.kind_name();
    for (auto& ch : line) ch = char(std::toupper(ch));
    if (g.kind == GateKind::Phase) {
      std::snprintf(buf, sizeof buf, "(%.10g)", g.theta);
      line += buf;
    } else if (g.kind == GateKind::U) {
      std::snprintf(buf, sizeof buf, "(%.10g,%.10g,%.10g)", g.theta, g.phi,
                    g.lambda);
      line += buf;
    }
    for (uint32_t q : g.targets) line += " " + std::to_string(q);
    line += " |";
    for (std::size_t i = 0; i < g.controls.size(); ++i)
      line += " " + std::to_string(g.controls[i]) + (g.polarity[i] ? "+" : "-");
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace qlbw
