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

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qlbw/circuit.hpp"
#include "qlbw/errors.hpp"

namespace qlbw {

namespace lowering_detail {

constexpr double kPi = std::numbers::pi;

struct Emitter {
  Circuit& out;

  void u(double theta, double phi, double lambda, uint32_t q) {
    out.add(Gate::u(theta, phi, lambda, q));
  }
  void x(uint32_t q) { u(kPi, 0.0, kPi, q); }
  void h(uint32_t q) { u(kPi / 2, 0.0, kPi, q); }
  void p(double theta, uint32_t q) { u(0.0, 0.0, theta, q); }
  void cx(uint32_t c, uint32_t t) { out.add(Gate::cx(c, t)); }

  void cp(double theta, uint32_t a, uint32_t b) {
    p(theta / 2, a);
    p(theta / 2, b);
    cx(a, b);
    p(-theta / 2, b);
    cx(a, b);
  }

  void toffoli(uint32_t a, uint32_t b, uint32_t t) {
    h(t);
    cx(b, t);
    p(-kPi / 4, t);
    cx(a, t);
    p(kPi / 4, t);
    cx(b, t);
    p(-kPi / 4, t);
    cx(a, t);
    p(kPi / 4, b);
    p(kPi / 4, t);
    cx(a, b);
    h(t);
    p(kPi / 4, a);
    p(-kPi / 4, b);
    cx(a, b);
  }

  /// Multi-controlled phase over the qubit set `qs` (phase iff all ones).
  /// Recursion peels one qubit per level into two smaller MCX conjugations,
  /// so no extra qubits are ever needed.
  void mcp(double theta, std::vector<uint32_t> qs) {
    const std::size_t k = qs.size();
    if (k == 1) {
      p(theta, qs[0]);
      return;
    }
    if (k == 2) {
      cp(theta, qs[0], qs[1]);
      return;
    }
    const uint32_t t = qs.back();
    std::vector<uint32_t> rest(qs.begin(), qs.end() - 1);
    const uint32_t pivot = rest.back();
    std::vector<uint32_t> others(rest.begin(), rest.end() - 1);
    cp(theta / 2, pivot, t);
    mcx(others, pivot);
    cp(-theta / 2, pivot, t);
    mcx(others, pivot);
    others.push_back(t);
    mcp(theta / 2, std::move(others));
  }

  /// Multi-controlled X. Up to four controls the phase-recursion handles it
  /// in place; above that the gate splits in half around a borrowed qubit
  /// (state-preserving, so any free qubit will do -- the comparator ancillae
  /// are preferred when available).
  void mcx(const std::vector<uint32_t>& controls, uint32_t t) {
    const std::size_t m = controls.size();
    if (m == 0) {
      x(t);
      return;
    }
    if (m == 1) {
      cx(controls[0], t);
      return;
    }
    if (m == 2) {
      toffoli(controls[0], controls[1], t);
      return;
    }
    if (m <= 4) {
      h(t);
      std::vector<uint32_t> qs = controls;
      qs.push_back(t);
      mcp(kPi, std::move(qs));
      h(t);
      return;
    }
    const uint32_t borrowed = borrow(controls, t);
    const std::size_t half = (m + 1) / 2;
    std::vector<uint32_t> first(controls.begin(), controls.begin() + half);
    std::vector<uint32_t> second(controls.begin() + half, controls.end());
    second.push_back(borrowed);
    mcx(second, t);
    mcx(first, borrowed);
    mcx(second, t);
    mcx(first, borrowed);
  }

  uint32_t borrow(const std::vector<uint32_t>& busy_controls, uint32_t t) const {
    uint64_t busy = uint64_t{1} << t;
    for (uint32_t q : busy_controls) busy |= uint64_t{1} << q;
    auto free_in = [&](uint32_t lo, uint32_t width) -> int64_t {
      for (uint32_t q = lo; q < lo + width; ++q)
        if (!(busy & (uint64_t{1} << q))) return q;
      return -1;
    };
    if (out.regs.has("ac")) {
      const auto& r = out.regs.reg("ac");
      const int64_t q = free_in(r.offset, r.width);
      if (q >= 0) return uint32_t(q);
    }
    const int64_t q = free_in(0, out.qubit_count());
    if (q >= 0) return uint32_t(q);
    throw Error(ErrorCode::InsufficientScratch,
                "no free qubit to borrow for a wide multi-controlled gate");
  }

  /// Singly- or multi-controlled U via two MCX conjugations plus a
  /// multi-controlled phase absorbing the U(3) global phase.
  void mcu(double theta, double phi, double lambda,
           const std::vector<uint32_t>& controls, uint32_t t) {
    if (controls.empty()) {
      u(theta, phi, lambda, t);
      return;
    }
    mcp((lambda + phi) / 2, controls);
    p((lambda - phi) / 2, t);
    mcx(controls, t);
    u(-theta / 2, 0.0, -(phi + lambda) / 2, t);
    mcx(controls, t);
    u(theta / 2, phi, 0.0, t);
  }
};

}  // namespace lowering_detail

/// Compile to the hardware-style basis {U, CX} (plus terminal Measure).
/// Control-on-zero polarities are expanded with X sandwiches; wide
/// multi-controlled gates may borrow idle qubits, preferring the comparator
/// ancilla register.
inline Circuit lower(const Circuit& c) {
  Circuit out(c.regs, c.name.empty() ? "lowered" : c.name + "_lowered");
  lowering_detail::Emitter e{out};

  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::Measure) {
      out.add(g);
      continue;
    }

    std::vector<uint32_t> negated;
    for (std::size_t i = 0; i < g.controls.size(); ++i)
      if (!g.polarity[i]) negated.push_back(g.controls[i]);
    for (uint32_t q : negated) e.x(q);

    switch (g.kind) {
      case GateKind::X:
        e.mcx(g.controls, g.targets[0]);
        break;
      case GateKind::Phase: {
        std::vector<uint32_t> qs = g.controls;
        qs.push_back(g.targets[0]);
        e.mcp(g.theta, std::move(qs));
        break;
      }
      case GateKind::H:
        e.mcu(lowering_detail::kPi / 2, 0.0, lowering_detail::kPi, g.controls,
              g.targets[0]);
        break;
      case GateKind::U:
        e.mcu(g.theta, g.phi, g.lambda, g.controls, g.targets[0]);
        break;
      case GateKind::Swap: {
        // swap = 3 CX; a controlled swap conditions only the middle one.
        e.cx(g.targets[1], g.targets[0]);
        std::vector<uint32_t> ctrls = g.controls;
        ctrls.push_back(g.targets[0]);
        e.mcx(ctrls, g.targets[1]);
        e.cx(g.targets[1], g.targets[0]);
        break;
      }
      case GateKind::Measure:
        break;
    }

    for (uint32_t q : negated) e.x(q);
  }
  return out;
}

namespace lowering_detail {

inline bool is_cx(const Gate& g) {
  return g.kind == GateKind::X && g.controls.size() == 1 && g.polarity[0];
}

inline bool is_bare_u(const Gate& g) {
  return g.kind == GateKind::U && g.controls.empty();
}

/// U(theta, phi, lambda) angles reproducing a 2x2 unitary up to global phase.
inline void euler_angles(std::complex<double> m00, std::complex<double> m01,
                         std::complex<double> m10, std::complex<double> m11,
                         double& theta, double& phi, double& lambda) {
  const double a0 = std::abs(m00), a1 = std::abs(m10);
  theta = 2.0 * std::atan2(a1, a0);
  constexpr double eps = 1e-12;
  if (a1 < eps) {
    phi = 0.0;
    lambda = std::arg(m11) - std::arg(m00);
  } else if (a0 < eps) {
    phi = 0.0;
    lambda = std::arg(-m01) - std::arg(m10);
  } else {
    phi = std::arg(m10) - std::arg(m00);
    lambda = std::arg(-m01) - std::arg(m00);
  }
}

inline void u_matrix(const Gate& g, std::complex<double>& m00,
                     std::complex<double>& m01, std::complex<double>& m10,
                     std::complex<double>& m11) {
  const double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
  m00 = c;
  m01 = -std::polar(s, g.lambda);
  m10 = std::polar(s, g.phi);
  m11 = std::polar(c, g.phi + g.lambda);
}

}  // namespace lowering_detail

/// Peephole optimization of a lowered circuit. Level 0 is the identity;
/// level 1 cancels adjacent CX pairs and fuses adjacent single-qubit U gates.
/// Unitary preserved up to global phase; idempotent per level.
inline Circuit optimize(const Circuit& c, int level = 1) {
  if (level <= 0) return c;
  using lowering_detail::is_bare_u;
  using lowering_detail::is_cx;

  Circuit out(c.regs, c.name);
  std::vector<Gate> kept;
  std::vector<int64_t> last(c.qubit_count(), -1);

  auto blocker = [&](const Gate& g) -> int64_t {
    int64_t j = -1;
    for (uint32_t q : g.targets) j = std::max(j, last[q]);
    for (uint32_t q : g.controls) j = std::max(j, last[q]);
    return j;
  };

  for (const Gate& g : c.gates) {
    const int64_t j = blocker(g);
    if (is_cx(g) && j >= 0 && is_cx(kept[std::size_t(j)]) &&
        kept[std::size_t(j)].targets[0] == g.targets[0] &&
        kept[std::size_t(j)].controls[0] == g.controls[0]) {
      // cancel the pair: retire the earlier CX and drop this one
      kept[std::size_t(j)].targets.clear();
      for (uint32_t q : {g.targets[0], g.controls[0]}) {
        last[q] = -1;
        for (int64_t i = j - 1; i >= 0; --i) {
          const Gate& prev = kept[std::size_t(i)];
          bool touches = false;
          for (uint32_t p : prev.targets) touches = touches || p == q;
          for (uint32_t p : prev.controls) touches = touches || p == q;
          if (touches) {
            last[q] = i;
            break;
          }
        }
      }
      continue;
    }
    if (is_bare_u(g) && j >= 0 && is_bare_u(kept[std::size_t(j)]) &&
        kept[std::size_t(j)].targets[0] == g.targets[0]) {
      // fuse: replace the predecessor with the 2x2 product
      Gate& prev = kept[std::size_t(j)];
      std::complex<double> a00, a01, a10, a11, b00, b01, b10, b11;
      lowering_detail::u_matrix(prev, a00, a01, a10, a11);
      lowering_detail::u_matrix(g, b00, b01, b10, b11);
      const std::complex<double> m00 = b00 * a00 + b01 * a10;
      const std::complex<double> m01 = b00 * a01 + b01 * a11;
      const std::complex<double> m10 = b10 * a00 + b11 * a10;
      const std::complex<double> m11 = b10 * a01 + b11 * a11;
      lowering_detail::euler_angles(m00, m01, m10, m11, prev.theta, prev.phi,
                                    prev.lambda);
      continue;
    }
    kept.push_back(g);
    const int64_t idx = int64_t(kept.size()) - 1;
    for (uint32_t q : g.targets) last[q] = idx;
    for (uint32_t q : g.controls) last[q] = idx;
  }

  for (Gate& g : kept)
    if (!g.targets.empty()) out.add(std::move(g));
  return out;
}

struct CompileReport {
  CircuitMetrics lowered;
  double compile_seconds = 0.0;
};

/// Lower, optimize, and measure the result.
inline CompileReport compile_report(const Circuit& c, int level = 1) {
  const auto t0 = std::chrono::steady_clock::now();
  const Circuit low = optimize(lower(c), level);
  CompileReport report;
  report.compile_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report.lowered = metrics(low);
  return report;
}

}  // namespace qlbw
