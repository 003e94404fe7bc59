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

// Test-only oracles and utilities. Everything here stays independent of the
// implementation paths it is used to check: unitaries are built column by
// column through the simulator's public interface only.

#pragma once

#include <complex>
#include <random>
#include <vector>

#include "qlbw/circuit.hpp"
#include "qlbw/components.hpp"
#include "qlbw/oracle.hpp"
#include "qlbw/statevector.hpp"

namespace qlbw::testing {

using Matrix = std::vector<std::vector<cdouble>>;

/// Dense unitary of a circuit, column j = circuit applied to basis state |j>.
inline Matrix unitary_of(const Circuit& c) {
  const uint64_t dim = uint64_t{1} << c.qubit_count();
  Matrix m(dim, std::vector<cdouble>(dim));
  for (uint64_t j = 0; j < dim; ++j) {
    Statevector psi = Statevector::basis(c.qubit_count(), j);
    apply_in_place(c, psi);
    for (uint64_t i = 0; i < dim; ++i) m[i][j] = psi.amps[i];
  }
  return m;
}

/// Max entry deviation between two matrices after aligning global phase on
/// the largest-magnitude entry of `a`.
inline double max_deviation_up_to_phase(const Matrix& a, const Matrix& b) {
  const uint64_t dim = a.size();
  uint64_t bi = 0, bj = 0;
  double best = -1.0;
  for (uint64_t i = 0; i < dim; ++i)
    for (uint64_t j = 0; j < dim; ++j)
      if (std::abs(a[i][j]) > best) {
        best = std::abs(a[i][j]);
        bi = i;
        bj = j;
      }
  if (std::abs(b[bi][bj]) < 1e-15) return 1.0;
  const cdouble phase = (a[bi][bj] / std::abs(a[bi][bj])) /
                        (b[bi][bj] / std::abs(b[bi][bj]));
  double dev = 0.0;
  for (uint64_t i = 0; i < dim; ++i)
    for (uint64_t j = 0; j < dim; ++j)
      dev = std::max(dev, std::abs(a[i][j] - phase * b[i][j]));
  return dev;
}

inline double max_deviation_from_identity(const Matrix& m) {
  Matrix eye(m.size(), std::vector<cdouble>(m.size(), 0.0));
  for (uint64_t i = 0; i < m.size(); ++i) eye[i][i] = 1.0;
  return max_deviation_up_to_phase(eye, m);
}

/// Random measure-free circuit drawn from the full IR vocabulary, including
/// negative-polarity controls and wide multi-controlled gates.
inline Circuit random_circuit(uint32_t qubits, std::size_t gates,
                              std::mt19937_64& rng) {
  Circuit c(qubits, "random");
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  auto pick_distinct = [&](std::size_t n) {
    std::vector<uint32_t> all(qubits);
    for (uint32_t q = 0; q < qubits; ++q) all[q] = q;
    for (std::size_t i = 0; i < n; ++i)
      std::swap(all[i], all[i + rng() % (qubits - i)]);
    return std::vector<uint32_t>(all.begin(), all.begin() + n);
  };
  for (std::size_t i = 0; i < gates; ++i) {
    const int kind = int(rng() % 6);
    switch (kind) {
      case 0: {
        auto q = pick_distinct(1);
        c.add(Gate::h(q[0]));
        break;
      }
      case 1: {
        auto q = pick_distinct(1);
        c.add(Gate::u(angle(rng), angle(rng), angle(rng), q[0]));
        break;
      }
      case 2: {
        auto q = pick_distinct(2);
        c.add(Gate::swap(q[0], q[1]));
        break;
      }
      case 3: {
        auto q = pick_distinct(2);
        c.add(Gate::cphase(angle(rng), q[0], q[1]));
        break;
      }
      case 4: {
        // leave one qubit free so wide gates can always borrow
        const std::size_t nc = 1 + rng() % std::min<std::size_t>(5, qubits - 2);
        auto q = pick_distinct(nc + 1);
        std::vector<uint32_t> ctrls(q.begin() + 1, q.end());
        std::vector<bool> pols;
        for (std::size_t k = 0; k < nc; ++k) pols.push_back(rng() % 2);
        c.add(Gate::x(q[0]).controlled(ctrls, pols));
        break;
      }
      default: {
        const std::size_t nc = 1 + rng() % std::min<std::size_t>(4, qubits - 2);
        auto q = pick_distinct(nc + 1);
        std::vector<uint32_t> ctrls(q.begin() + 1, q.end());
        std::vector<bool> pols;
        for (std::size_t k = 0; k < nc; ++k) pols.push_back(rng() % 2);
        c.add(Gate::phase(angle(rng), q[0]).controlled(ctrls, pols));
        break;
      }
    }
  }
  return c;
}

/// Normalized Haar-ish random state for norm/invariance checks.
inline Statevector random_state(uint32_t qubits, std::mt19937_64& rng) {
  Statevector psi = Statevector::zero(qubits);
  std::normal_distribution<double> g(0.0, 1.0);
  double norm = 0.0;
  for (auto& a : psi.amps) {
    a = cdouble{g(rng), g(rng)};
    norm += std::norm(a);
  }
  norm = std::sqrt(norm);
  for (auto& a : psi.amps) a /= norm;
  return psi;
}

/// Lattice builder for tests.
inline LatticeSpec make_lattice(std::vector<int> dims, int velocities,
                                std::vector<Block> blocks = {}) {
  LatticeSpec spec;
  spec.dims = std::move(dims);
  spec.velocities.assign(spec.dims.size(), velocities);
  spec.blocks = std::move(blocks);
  validate_lattice(spec);
  return spec;
}

inline Block make_block(std::vector<std::array<int, 2>> bounds, Boundary kind) {
  Block b;
  b.bounds = std::move(bounds);
  b.boundary = kind;
  return b;
}

/// Exact quantum grid marginal for a prepared + stepped state, keyed by
/// grid coordinates.
inline std::map<std::vector<uint32_t>, double> grid_marginal(
    const Statevector& psi, const RegisterMap& rmap, std::size_t num_dims) {
  std::vector<QubitRange> ranges;
  for (std::size_t k = 0; k < num_dims; ++k) {
    const auto& r = rmap.reg(std::string("g_") + detail::dim_key(k));
    ranges.push_back({r.offset, r.width});
  }
  return sample(psi, ranges, CountMode::Exact).table;
}

/// Normalized oracle density, keyed like the quantum marginal.
inline std::map<std::vector<uint32_t>, double> normalized_density(
    const OracleState& state) {
  std::map<std::vector<uint32_t>, double> out;
  const double total = double(state.particles.size());
  for (const auto& [pos, count] : oracle_density(state)) {
    std::vector<uint32_t> key(pos.begin(), pos.end());
    out[key] = double(count) / total;
  }
  return out;
}

/// Max absolute difference between two sparse distributions (union support).
inline double distribution_distance(
    const std::map<std::vector<uint32_t>, double>& a,
    const std::map<std::vector<uint32_t>, double>& b) {
  double dev = 0.0;
  for (const auto& [k, v] : a) {
    const auto it = b.find(k);
    dev = std::max(dev, std::abs(v - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) dev = std::max(dev, std::abs(v));
  return dev;
}

/// Basis-state index of a classical particle under the register layout
/// (position, magnitude - 1, sign bit; all ancillae zero).
inline uint64_t encode_particle(const RegisterMap& rmap,
                                const OracleParticle& p) {
  uint64_t idx = 0;
  for (std::size_t k = 0; k < p.pos.size(); ++k) {
    idx |= uint64_t(p.pos[k]) << rmap.reg("g_" + std::string(detail::dim_key(k))).offset;
    idx |= uint64_t(p.mag[k] - 1)
           << rmap.reg("v_" + std::string(detail::dim_key(k))).offset;
    if (p.sign[k] < 0)
      idx |= uint64_t{1}
             << rmap.reg("v_dir_" + std::string(detail::dim_key(k))).offset;
  }
  return idx;
}

struct EquivalenceReport {
  double max_marginal_deviation = 0.0;  // quantum grid marginal vs oracle
  double min_state_fidelity = 1.0;      // single-particle full-state overlap
  double max_norm_error = 0.0;
  int steps_run = 0;
};

/// Evolve a single-particle initial condition through `steps` applications of
/// the full time-step circuit and compare, after every step, the exact grid
/// marginal against the classical oracle. For one particle the state must
/// remain a computational basis state, so the full (position, velocity)
/// content is checked through its overlap as well.
inline EquivalenceReport run_point_source_equivalence(
    const LatticeSpec& spec, const std::vector<int>& pos,
    const std::vector<int>& vel, int steps) {
  const RegisterMap rmap = register_layout(spec);
  const ReflectionData data = reflection_data(spec);
  const Circuit step = cqlbm_step(spec, rmap, data);

  Statevector psi = Statevector::zero(rmap.total_qubits);
  apply_in_place(initial_point_source(spec, rmap, pos, vel), psi);

  OracleParticle particle;
  particle.pos = pos;
  for (int v : vel) {
    particle.mag.push_back(std::abs(v));
    particle.sign.push_back(v < 0 ? -1 : +1);
  }
  OracleState state{{particle}};

  EquivalenceReport report;
  for (int s = 0; s < steps; ++s) {
    apply_in_place(step, psi);
    state = oracle_step(state, spec);
    report.max_norm_error =
        std::max(report.max_norm_error, std::abs(psi.norm_sq() - 1.0));
    report.max_marginal_deviation = std::max(
        report.max_marginal_deviation,
        distribution_distance(grid_marginal(psi, rmap, spec.num_dims()),
                              normalized_density(state)));
    const uint64_t idx = encode_particle(rmap, state.particles[0]);
    report.min_state_fidelity =
        std::min(report.min_state_fidelity, std::norm(psi.amps[idx]));
    ++report.steps_run;
  }
  return report;
}

}  // namespace qlbw::testing
