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
#include <set>
#include <vector>

#include "qlbw/circuit.hpp"
#include "qlbw/errors.hpp"
#include "qlbw/statevector.hpp"

namespace qlbw {

/// Everything one simulation run needs: the initial-conditions circuit, the
/// repeated step circuit, optional postprocessing, the measurement circuit
/// (the only one allowed to contain Measure gates), and execution options.
struct SimulationConfig {
  Circuit initial;
  Circuit step;
  Circuit postprocess;  // may be empty
  Circuit measurement;
  bool snapshots = true;
  bool sampling = true;
  CountMode count_mode = CountMode::Sampled;
  uint64_t shots = 4096;
  uint64_t seed = 0;

  void validate() const {
    const uint32_t n = step.qubit_count();
    if (initial.qubit_count() != n || measurement.qubit_count() != n ||
        (!postprocess.gates.empty() && postprocess.qubit_count() != n))
      throw Error(ErrorCode::QubitCountMismatch,
                  "all configured circuits must share one register map");
    for (const Circuit* c : {&initial, &step, &postprocess})
      for (const Gate& g : c->gates)
        if (g.kind == GateKind::Measure)
          throw Error(ErrorCode::MeasureNotTerminal,
                      "only the measurement circuit may contain Measure gates");
    bool any = false;
    for (const Gate& g : measurement.gates) {
      if (g.kind != GateKind::Measure)
        throw Error(ErrorCode::MeasureNotTerminal,
                    "measurement circuit must contain Measure gates only");
      any = true;
    }
    if (!any)
      throw Error(ErrorCode::MeasureNotTerminal,
                  "measurement circuit measures nothing");
  }

  /// Readout ranges: measured qubits grouped into the grid registers they
  /// cover, so counts come out keyed by grid coordinates.
  std::vector<QubitRange> readout_ranges() const {
    std::set<uint32_t> measured;
    for (const Gate& g : measurement.gates) measured.insert(g.targets[0]);
    std::vector<QubitRange> ranges;
    for (const auto& r : step.regs.registers) {
      if (r.width == 0) continue;
      bool covered = true;
      for (uint32_t b = 0; b < r.width; ++b)
        covered = covered && measured.count(r.offset + b);
      if (!covered) continue;
      ranges.push_back({r.offset, r.width});
      for (uint32_t b = 0; b < r.width; ++b) measured.erase(r.offset + b);
    }
    for (uint32_t q : measured) ranges.push_back({q, 1});
    return ranges;
  }
};

/// Converts the end-of-step state (and sampled counts) into the next step's
/// initial state. The transport method's implementation simply hands the
/// statevector through; counts are disregarded.
class Reinitializer {
 public:
  virtual ~Reinitializer() = default;
  virtual Statevector reinitialize(Statevector psi, const Counts& counts) = 0;
};

inline Statevector reinitialize_qtm(Statevector psi, const Counts&) {
  return psi;
}

class QtmReinitializer final : public Reinitializer {
 public:
  Statevector reinitialize(Statevector psi, const Counts& counts) override {
    return reinitialize_qtm(std::move(psi), counts);
  }
};

struct StepRecord {
  Counts counts;
  double wall_seconds = 0.0;
  uint64_t step_applications = 0;  // applications attributed to this step
  double norm_sq = 1.0;
};

struct TimeSeriesResult {
  std::vector<StepRecord> steps;
  uint64_t total_step_applications = 0;
  uint64_t statevector_copies = 0;

  double total_wall_seconds() const {
    double s = 0.0;
    for (const auto& r : steps) s += r.wall_seconds;
    return s;
  }
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

inline void check_norm(const Statevector& psi) {
  const double n = psi.norm_sq();
  if (std::abs(n - 1.0) > 1e-6)
    throw Error(ErrorCode::NormDrift,
                "statevector norm drifted to " + std::to_string(n));
}

}  // namespace detail

/// Run `steps` time steps of the configured algorithm.
///
/// snapshots off: every step k re-evolves from the initial conditions with k
/// step applications (n(n+1)/2 in total). snapshots on: the statevector is
/// evolved once and read out after each of the n step applications; with
/// sampling enabled and no postprocessing the counts are read straight off
/// the evolving state with no copy.
inline TimeSeriesResult run(const SimulationConfig& config, uint64_t steps,
                            Reinitializer* reinitializer = nullptr) {
  config.validate();
  const std::vector<QubitRange> ranges = config.readout_ranges();
  const uint32_t n = config.step.qubit_count();
  TimeSeriesResult result;
  std::mt19937_64 seed_stream(config.seed);

  auto read_counts = [&](const Statevector& psi) {
    const uint64_t step_seed =
        config.count_mode == CountMode::Sampled ? seed_stream() : 0;
    return sample(psi, ranges, config.count_mode, config.shots, step_seed);
  };

  if (!config.snapshots) {
    for (uint64_t k = 1; k <= steps; ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      Statevector psi = Statevector::zero(n);
      apply_in_place(config.initial, psi);
      for (uint64_t i = 0; i < k; ++i) apply_in_place(config.step, psi);
      detail::check_norm(psi);
      if (!config.postprocess.gates.empty())
        apply_in_place(config.postprocess, psi);
      StepRecord rec;
      rec.counts = read_counts(psi);
      rec.step_applications = k;
      rec.norm_sq = psi.norm_sq();
      rec.wall_seconds = detail::seconds_since(t0);
      result.total_step_applications += k;
      result.steps.push_back(std::move(rec));
    }
    return result;
  }

  Statevector psi = Statevector::zero(n);
  apply_in_place(config.initial, psi);
  for (uint64_t k = 1; k <= steps; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    apply_in_place(config.step, psi);
    detail::check_norm(psi);
    ++result.total_step_applications;

    StepRecord rec;
    rec.step_applications = 1;
    rec.norm_sq = psi.norm_sq();
    if (config.postprocess.gates.empty()) {
      if (config.sampling) {
        rec.counts = read_counts(psi);  // no-copy read of the evolving state
      } else {
        Statevector copy = psi;
        ++result.statevector_copies;
        rec.counts = read_counts(copy);
      }
    } else {
      Statevector copy = psi;
      ++result.statevector_copies;
      apply_in_place(config.postprocess, copy);
      rec.counts = read_counts(copy);
    }
    if (reinitializer) psi = reinitializer->reinitialize(std::move(psi), rec.counts);
    rec.wall_seconds = detail::seconds_since(t0);
    result.steps.push_back(std::move(rec));
  }
  return result;
}

}  // namespace qlbw
