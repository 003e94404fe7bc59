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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "qlbw/circuit.hpp"
#include "qlbw/errors.hpp"

namespace qlbw {

using cdouble = std::complex<double>;

/// Dense 2^n amplitude vector, double precision.
struct Statevector {
  uint32_t num_qubits = 0;
  std::vector<cdouble> amps;

  static Statevector zero(uint32_t n) {
    Statevector psi;
    psi.num_qubits = n;
    psi.amps.assign(uint64_t{1} << n, cdouble{0.0, 0.0});
    psi.amps[0] = 1.0;
    return psi;
  }

  static Statevector basis(uint32_t n, uint64_t index) {
    Statevector psi;
    psi.num_qubits = n;
    psi.amps.assign(uint64_t{1} << n, cdouble{0.0, 0.0});
    psi.amps[index] = 1.0;
    return psi;
  }

  uint64_t size() const { return amps.size(); }

  double norm_sq() const {
    double s = 0.0;
    for (const cdouble& a : amps) s += std::norm(a);
    return s;
  }

  /// Number of basis states with non-negligible amplitude.
  uint64_t support_size(double eps = 1e-8) const {
    uint64_t n = 0;
    for (const cdouble& a : amps)
      if (std::norm(a) > eps * eps) ++n;
    return n;
  }
};

namespace detail {

struct ControlSpec {
  uint64_t mask = 0;
  uint64_t value = 0;
};

inline ControlSpec control_spec(const Gate& g) {
  ControlSpec cs;
  for (std::size_t i = 0; i < g.controls.size(); ++i) {
    const uint64_t bit = uint64_t{1} << g.controls[i];
    cs.mask |= bit;
    if (g.polarity[i]) cs.value |= bit;
  }
  return cs;
}

/// Visit every index whose bits under `fixed_mask` equal `fixed_value`.
template <typename Fn>
inline void for_each_fixed(uint64_t size, uint64_t fixed_mask,
                           uint64_t fixed_value, Fn&& fn) {
  const uint64_t free_mask = (size - 1) & ~fixed_mask;
  uint64_t sub = 0;
  do {
    fn(sub | fixed_value);
    sub = (sub - free_mask) & free_mask;
  } while (sub != 0);
}

}  // namespace detail

/// Apply one gate in place. Controlled subspaces are enumerated directly, so
/// a gate with c controls costs O(2^(n-c)) amplitude updates.
inline void apply_gate(const Gate& g, Statevector& psi) {
  const uint64_t size = psi.size();
  cdouble* a = psi.amps.data();
  const auto cs = detail::control_spec(g);

  switch (g.kind) {
    case GateKind::Measure:
      throw Error(ErrorCode::MeasureInUnitaryApply,
                  "measurement gate in unitary application");

    case GateKind::Phase: {
      const cdouble w = std::polar(1.0, g.theta);
      const uint64_t tbit = uint64_t{1} << g.targets[0];
      detail::for_each_fixed(size, cs.mask | tbit, cs.value | tbit,
                             [&](uint64_t i) { a[i] *= w; });
      return;
    }

    case GateKind::X: {
      const uint64_t tbit = uint64_t{1} << g.targets[0];
      detail::for_each_fixed(size, cs.mask | tbit, cs.value, [&](uint64_t i) {
        std::swap(a[i], a[i | tbit]);
      });
      return;
    }

    case GateKind::Swap: {
      const uint64_t b0 = uint64_t{1} << g.targets[0];
      const uint64_t b1 = uint64_t{1} << g.targets[1];
      detail::for_each_fixed(size, cs.mask | b0 | b1, cs.value,
                             [&](uint64_t i) { std::swap(a[i | b0], a[i | b1]); });
      return;
    }

    case GateKind::H:
    case GateKind::U: {
      cdouble u00, u01, u10, u11;
      if (g.kind == GateKind::H) {
        const double r = 1.0 / std::sqrt(2.0);
        u00 = u01 = u10 = r;
        u11 = -r;
      } else {
        const double c = std::cos(g.theta / 2.0), s = std::sin(g.theta / 2.0);
        u00 = c;
        u01 = -std::polar(s, g.lambda);
        u10 = std::polar(s, g.phi);
        u11 = std::polar(c, g.phi + g.lambda);
      }
      const uint64_t tbit = uint64_t{1} << g.targets[0];
      if (cs.mask == 0) {
        for (uint64_t base = 0; base < size; base += 2 * tbit) {
          for (uint64_t low = 0; low < tbit; ++low) {
            const uint64_t i0 = base + low, i1 = i0 + tbit;
            const cdouble a0 = a[i0], a1 = a[i1];
            a[i0] = u00 * a0 + u01 * a1;
            a[i1] = u10 * a0 + u11 * a1;
          }
        }
      } else {
        detail::for_each_fixed(size, cs.mask | tbit, cs.value, [&](uint64_t i0) {
          const uint64_t i1 = i0 | tbit;
          const cdouble a0 = a[i0], a1 = a[i1];
          a[i0] = u00 * a0 + u01 * a1;
          a[i1] = u10 * a0 + u11 * a1;
        });
      }
      return;
    }
  }
}

/// psi' = U_c psi. The circuit must be measure-free.
inline void apply_in_place(const Circuit& c, Statevector& psi) {
  if (c.qubit_count() != psi.num_qubits)
    throw Error(ErrorCode::QubitCountMismatch,
                "circuit acts on " + std::to_string(c.qubit_count()) +
                    " qubits, state has " + std::to_string(psi.num_qubits));
  for (const Gate& g : c.gates) apply_gate(g, psi);
}

inline Statevector apply(const Circuit& c, const Statevector& psi) {
  Statevector out = psi;
  apply_in_place(c, out);
  return out;
}

enum class CountMode { Exact, Sampled };

/// A contiguous run of qubits read out as one little-endian integer.
struct QubitRange {
  uint32_t offset = 0;
  uint32_t width = 0;
};

/// Measured basis-state frequencies keyed by per-range values (for grid
/// measurement, one value per spatial dimension). Exact mode stores
/// probabilities summing to 1; Sampled mode stores counts summing to shots.
struct Counts {
  CountMode mode = CountMode::Exact;
  uint64_t shots = 0;
  uint64_t seed = 0;
  std::map<std::vector<uint32_t>, double> table;

  double total() const {
    double s = 0.0;
    for (const auto& [k, v] : table) s += v;
    return s;
  }
};

namespace detail {

/// Marginal distribution over the concatenated ranges, |a|^2 summed over all
/// other qubits. Returned dense, indexed by the packed range values.
inline std::vector<double> marginal(const Statevector& psi,
                                    const std::vector<QubitRange>& ranges) {
  uint32_t key_bits = 0;
  for (const auto& r : ranges) key_bits += r.width;
  std::vector<double> probs(uint64_t{1} << key_bits, 0.0);
  const uint64_t size = psi.size();
  for (uint64_t i = 0; i < size; ++i) {
    const double p = std::norm(psi.amps[i]);
    if (p == 0.0) continue;
    uint64_t key = 0;
    uint32_t shift = 0;
    for (const auto& r : ranges) {
      const uint64_t v = (i >> r.offset) & ((uint64_t{1} << r.width) - 1);
      key |= v << shift;
      shift += r.width;
    }
    probs[key] += p;
  }
  return probs;
}

inline std::vector<uint32_t> unpack_key(uint64_t key,
                                        const std::vector<QubitRange>& ranges) {
  std::vector<uint32_t> coords;
  coords.reserve(ranges.size());
  for (const auto& r : ranges) {
    coords.push_back(uint32_t(key & ((uint64_t{1} << r.width) - 1)));
    key >>= r.width;
  }
  return coords;
}

/// Deterministic uniform double in [0, 1) from a standard mt19937_64 draw.
inline double canonical(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Read counts out of the state without modifying it. Sampled mode draws
/// `shots` multinomial samples with the given seed; Exact mode reports the
/// marginal probabilities themselves.
inline Counts sample(const Statevector& psi, const std::vector<QubitRange>& ranges,
                     CountMode mode, uint64_t shots = 0, uint64_t seed = 0) {
  const std::vector<double> probs = detail::marginal(psi, ranges);
  Counts counts;
  counts.mode = mode;
  counts.seed = seed;
  if (mode == CountMode::Exact) {
    counts.shots = 0;
    for (uint64_t key = 0; key < probs.size(); ++key)
      if (probs[key] > 0.0)
        counts.table[detail::unpack_key(key, ranges)] = probs[key];
    return counts;
  }

  counts.shots = shots;
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (uint64_t key = 0; key < probs.size(); ++key) {
    acc += probs[key];
    cdf[key] = acc;
  }
  std::mt19937_64 rng(seed);
  std::map<uint64_t, uint64_t> hits;
  for (uint64_t s = 0; s < shots; ++s) {
    const double u = detail::canonical(rng) * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const uint64_t key = uint64_t(it - cdf.begin());
    ++hits[std::min(key, uint64_t(cdf.size() - 1))];
  }
  for (const auto& [key, n] : hits)
    counts.table[detail::unpack_key(key, ranges)] = double(n);
  return counts;
}

/// Sampling convenience for an explicit qubit list (one range per qubit).
inline Counts sample(const Statevector& psi, const std::vector<uint32_t>& qubits,
                     CountMode mode, uint64_t shots = 0, uint64_t seed = 0) {
  std::vector<QubitRange> ranges;
  ranges.reserve(qubits.size());
  for (uint32_t q : qubits) ranges.push_back({q, 1});
  return sample(psi, ranges, mode, shots, seed);
}

}  // namespace qlbw
