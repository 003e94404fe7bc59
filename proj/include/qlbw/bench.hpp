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
#include <cstdint>
#include <string>
#include <vector>

#include "qlbw/components.hpp"
#include "qlbw/engine.hpp"
#include "qlbw/geometry.hpp"
#include "qlbw/io.hpp"
#include "qlbw/lattice.hpp"
#include "qlbw/lowering.hpp"

namespace qlbw {

/// Lattice with `obstacles` bounce-back blocks of size 2 (per dimension),
/// placed on a stride-4 raster so every pair is separated by >= 2 cells.
/// Grids of 16+ cells per dimension fit up to 9 (2D) such blocks.
inline LatticeSpec bench_lattice(std::vector<int> dims, int velocities,
                                 int obstacles,
                                 Boundary kind = Boundary::BounceBack) {
  LatticeSpec spec;
  spec.dims = std::move(dims);
  spec.velocities.assign(spec.dims.size(), velocities);
  const std::size_t d = spec.num_dims();

  std::vector<int> slots_per_dim(d);
  for (std::size_t k = 0; k < d; ++k)
    slots_per_dim[k] = std::max(1, (spec.dims[k] - 2) / 4);
  for (int i = 0; i < obstacles; ++i) {
    Block blk;
    blk.boundary = kind;
    int slot = i;
    for (std::size_t k = 0; k < d; ++k) {
      const int s = slot % slots_per_dim[k];
      slot /= slots_per_dim[k];
      const int lo = 2 + 4 * s;
      blk.bounds.push_back({lo, lo + 1});
    }
    spec.blocks.push_back(std::move(blk));
  }
  validate_lattice(spec);
  return spec;
}

struct BenchRow {
  std::string suite;
  std::string grid;
  int obstacles = 0;
  uint32_t qubits = 0;
  std::size_t gate_count = 0;
  std::size_t depth = 0;
  double seconds = 0.0;
  // simulation-suite columns
  int steps = 0;
  std::string mode;
  uint64_t step_applications = 0;
};

inline std::string bench_csv_header(const std::string& suite) {
  if (suite == "simulation")
    return "suite,grid,obstacles,qubits,steps,mode,step_applications,"
           "wall_seconds\n";
  return "suite,grid,obstacles,qubits,gate_count,depth,seconds\n";
}

inline std::string bench_csv_row(const BenchRow& r) {
  std::string out = r.suite + "," + r.grid + "," + std::to_string(r.obstacles) +
                    "," + std::to_string(r.qubits);
  if (r.suite == "simulation") {
    out += "," + std::to_string(r.steps) + "," + r.mode + "," +
           std::to_string(r.step_applications) + "," +
           io_detail::fmt(r.seconds);
  } else {
    out += "," + std::to_string(r.gate_count) + "," + std::to_string(r.depth) +
           "," + io_detail::fmt(r.seconds);
  }
  return out + "\n";
}

inline std::string grid_label(const std::vector<int>& dims) {
  std::string s;
  for (std::size_t k = 0; k < dims.size(); ++k)
    s += (k ? "x" : "") + std::to_string(dims[k]);
  return s;
}

/// IR assembly sweep: circuit size and construction time per obstacle count
/// and grid size.
inline std::vector<BenchRow> bench_assembly(
    const std::vector<std::vector<int>>& grids, int velocities,
    int max_obstacles) {
  std::vector<BenchRow> rows;
  for (const auto& dims : grids) {
    for (int k = 0; k <= max_obstacles; ++k) {
      const LatticeSpec spec = bench_lattice(dims, velocities, k);
      const RegisterMap rmap = register_layout(spec);
      const auto t0 = std::chrono::steady_clock::now();
      const ReflectionData data = reflection_data(spec);
      const Circuit step = cqlbm_step(spec, rmap, data);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      const CircuitMetrics m = metrics(step);
      rows.push_back({"assembly", grid_label(dims), k, rmap.total_qubits,
                      m.gate_count, m.depth, secs, 0, "", 0});
    }
  }
  return rows;
}

/// Lowering sweep: compiled gate count, depth, and compile time.
inline std::vector<BenchRow> bench_lowering(
    const std::vector<std::vector<int>>& grids, int velocities,
    int max_obstacles, int level = 1) {
  std::vector<BenchRow> rows;
  for (const auto& dims : grids) {
    for (int k = 0; k <= max_obstacles; ++k) {
      const LatticeSpec spec = bench_lattice(dims, velocities, k);
      const RegisterMap rmap = register_layout(spec);
      const Circuit step = cqlbm_step(spec, rmap, reflection_data(spec));
      const CompileReport report = compile_report(step, level);
      rows.push_back({"lowering", grid_label(dims), k, rmap.total_qubits,
                      report.lowered.gate_count, report.lowered.depth,
                      report.compile_seconds, 0, "", 0});
    }
  }
  return rows;
}

/// Simulation sweep: snapshot vs naive execution; one row per configuration
/// and mode carrying the step-application counter and wall time.
inline std::vector<BenchRow> bench_simulation(
    const std::vector<std::vector<int>>& grids, int velocities,
    int max_obstacles, int steps, uint64_t seed = 1) {
  std::vector<BenchRow> rows;
  for (const auto& dims : grids) {
    for (int k = 0; k <= max_obstacles; ++k) {
      const LatticeSpec spec = bench_lattice(dims, velocities, k);
      const RegisterMap rmap = register_layout(spec);
      const ReflectionData data = reflection_data(spec);
      SimulationConfig config;
      config.initial = initial_left_half_uniform(spec, rmap);
      config.step = cqlbm_step(spec, rmap, data);
      config.postprocess = Circuit(rmap, "postprocess");
      config.measurement = grid_measurement(rmap);
      config.count_mode = CountMode::Exact;
      config.seed = seed;
      for (bool snapshots : {true, false}) {
        config.snapshots = snapshots;
        const TimeSeriesResult result = run(config, uint64_t(steps));
        rows.push_back({"simulation", grid_label(dims), k, rmap.total_qubits,
                        0, 0, result.total_wall_seconds(), steps,
                        snapshots ? "snapshot" : "naive",
                        result.total_step_applications});
      }
    }
  }
  return rows;
}

}  // namespace qlbw
