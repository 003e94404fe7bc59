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

#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qlbw/circuit.hpp"
#include "qlbw/geometry.hpp"
#include "qlbw/lattice.hpp"

namespace qlbw {

enum class ComponentKind { Primitive, Operator, Algorithm };

/// Taxonomy of the circuit constructors in this header.
inline const std::map<std::string, ComponentKind>& component_taxonomy() {
  static const std::map<std::string, ComponentKind> taxonomy = {
      {"controlled_incrementer", ComponentKind::Primitive},
      {"comparator", ComponentKind::Primitive},
      {"initial_conditions", ComponentKind::Primitive},
      {"grid_measurement", ComponentKind::Primitive},
      {"streaming_ancilla_preparation", ComponentKind::Operator},
      {"streaming_operator", ComponentKind::Operator},
      {"specular_reflection_operator", ComponentKind::Operator},
      {"bounceback_reflection_operator", ComponentKind::Operator},
      {"cqlbm_step", ComponentKind::Algorithm},
  };
  return taxonomy;
}

/// Which velocity magnitudes stream in each of the Q substeps of one time
/// step. Magnitude q activates at substep t iff floor(tq/Q) > floor((t-1)q/Q),
/// which spreads its q moves evenly over the step.
struct SubstepSchedule {
  int max_magnitude = 1;
  std::vector<std::vector<int>> substeps;
};

inline SubstepSchedule substep_schedule(int max_magnitude) {
  if (max_magnitude < 1)
    throw Error(ErrorCode::ConstantOutOfRange, "schedule needs Q >= 1");
  SubstepSchedule s;
  s.max_magnitude = max_magnitude;
  const int Q = max_magnitude;
  for (int t = 1; t <= Q; ++t) {
    std::vector<int> active;
    for (int q = 1; q <= Q; ++q)
      if ((int64_t(t) * q) / Q > (int64_t(t - 1) * q) / Q) active.push_back(q);
    s.substeps.push_back(std::move(active));
  }
  return s;
}

namespace detail {

/// Control value required on a direction qubit at a wall point: bound (upper
/// side) XOR outside. This is the near-corner inversion rule; dir bit 0
/// encodes the positive direction.
inline bool dir_control_bit(bool upper_bound_side, bool outside) {
  return upper_bound_side != outside;
}

/// MCX flipping `target` when the register equals `value` and the extra
/// controls match.
inline void emit_eq_flip(Circuit& c, const std::vector<uint32_t>& reg,
                         uint64_t value, std::vector<uint32_t> extra,
                         std::vector<bool> extra_pol, uint32_t target) {
  std::vector<uint32_t> controls = std::move(extra);
  std::vector<bool> pols = std::move(extra_pol);
  for (std::size_t b = 0; b < reg.size(); ++b) {
    controls.push_back(reg[b]);
    pols.push_back((value >> b) & 1);
  }
  c.add(Gate::x(target).controlled(std::move(controls), std::move(pols)));
}

/// Parity-flip realization of v >= constant: one MCX per zero bit of the
/// constant (prefix-equal, then a 1 where the constant has 0), plus equality.
/// The events are disjoint, so the target flips exactly once iff v >= c.
inline void emit_geq_flips(Circuit& c, const std::vector<uint32_t>& reg,
                           uint64_t constant,
                           const std::vector<uint32_t>& extra,
                           const std::vector<bool>& extra_pol, uint32_t target) {
  const std::size_t n = reg.size();
  if (constant == 0) {
    c.add(Gate::x(target).controlled(extra, extra_pol));
    return;
  }
  for (std::size_t b = 0; b < n; ++b) {
    if ((constant >> b) & 1) continue;
    std::vector<uint32_t> controls = extra;
    std::vector<bool> pols = extra_pol;
    for (std::size_t m = b + 1; m < n; ++m) {
      controls.push_back(reg[m]);
      pols.push_back((constant >> m) & 1);
    }
    controls.push_back(reg[b]);
    pols.push_back(true);
    c.add(Gate::x(target).controlled(std::move(controls), std::move(pols)));
  }
  emit_eq_flip(c, reg, constant, extra, extra_pol, target);
}

inline void emit_leq_flips(Circuit& c, const std::vector<uint32_t>& reg,
                           uint64_t constant,
                           const std::vector<uint32_t>& extra,
                           const std::vector<bool>& extra_pol, uint32_t target) {
  const std::size_t n = reg.size();
  const uint64_t max = (uint64_t{1} << n) - 1;
  if (constant >= max) {
    c.add(Gate::x(target).controlled(extra, extra_pol));
    return;
  }
  for (std::size_t b = 0; b < n; ++b) {
    if (!((constant >> b) & 1)) continue;
    std::vector<uint32_t> controls = extra;
    std::vector<bool> pols = extra_pol;
    for (std::size_t m = b + 1; m < n; ++m) {
      controls.push_back(reg[m]);
      pols.push_back((constant >> m) & 1);
    }
    controls.push_back(reg[b]);
    pols.push_back(false);
    c.add(Gate::x(target).controlled(std::move(controls), std::move(pols)));
  }
  emit_eq_flip(c, reg, constant, extra, extra_pol, target);
}

/// lo <= v <= hi as a parity of two >= comparisons: [v>=lo] xor [v>=hi+1].
inline void emit_range_flips(Circuit& c, const std::vector<uint32_t>& reg,
                             uint64_t lo, uint64_t hi,
                             const std::vector<uint32_t>& extra,
                             const std::vector<bool>& extra_pol,
                             uint32_t target) {
  const uint64_t max = (uint64_t{1} << reg.size()) - 1;
  if (lo == 0 && hi >= max) {
    c.add(Gate::x(target).controlled(extra, extra_pol));
    return;
  }
  if (lo == 0) {
    emit_leq_flips(c, reg, hi, extra, extra_pol, target);
    return;
  }
  emit_geq_flips(c, reg, lo, extra, extra_pol, target);
  if (hi < max) emit_geq_flips(c, reg, hi + 1, extra, extra_pol, target);
}

inline std::vector<uint32_t> grid_register(const RegisterMap& rmap,
                                           std::size_t dim) {
  return rmap.qubits(std::string("g_") + dim_key(dim));
}

inline std::vector<uint32_t> mag_register(const RegisterMap& rmap,
                                          std::size_t dim) {
  return rmap.qubits(std::string("v_") + dim_key(dim));
}

/// QFT-based +-1 incrementer on the grid register of `dim`, with the given
/// gate controls. The direction qubit selects the sign through two phase
/// half-blocks conjugated by X: the first decrements states with dir |1>,
/// the second increments those with dir |0>.
inline void append_incrementer(Circuit& c, const RegisterMap& rmap,
                               std::size_t dim,
                               const std::vector<uint32_t>& ctrls) {
  const std::vector<uint32_t> g = grid_register(rmap, dim);
  const uint32_t n = static_cast<uint32_t>(g.size());
  const uint32_t vd = vel_dir_qubit(rmap, dim);
  const Circuit fourier = qft(n);

  auto half_block = [&](double sign) {
    for (uint32_t j = 0; j < n; ++j) {
      const double theta =
          sign * 2.0 * std::numbers::pi * double(uint64_t{1} << j) /
          double(uint64_t{1} << n);
      std::vector<uint32_t> cs = ctrls;
      cs.push_back(vd);
      c.add(Gate::phase(theta, g[j]).controlled(std::move(cs)));
    }
  };

  Circuit tmp = compose(Circuit(c.regs), fourier, g);
  for (const Gate& gate : tmp.gates) c.add(gate);
  half_block(-1.0);
  c.add(Gate::x(vd));
  half_block(+1.0);
  c.add(Gate::x(vd));
  tmp = compose(Circuit(c.regs), inverse(fourier), g);
  for (const Gate& gate : tmp.gates) c.add(gate);
}

/// Marking/unmarking of populations whose magnitude register matches one of
/// the streaming magnitudes; value m encodes magnitude m+1. Self-inverse.
inline void append_magnitude_marking(Circuit& c, const RegisterMap& rmap,
                                     const std::vector<int>& magnitudes,
                                     std::size_t dim) {
  const std::vector<uint32_t> mag = mag_register(rmap, dim);
  const uint32_t av = anc_vel_qubit(rmap, dim);
  for (int m : magnitudes)
    emit_eq_flip(c, mag, uint64_t(m - 1), {}, {}, av);
}

inline const BlockReflection& lookup_block(const ReflectionData& data,
                                           const Block& blk) {
  for (const auto& br : data.blocks)
    if (br.block.bounds == blk.bounds && br.block.boundary == blk.boundary)
      return br;
  throw Error(ErrorCode::IndexOutOfRange,
              "block missing from precomputed reflection data");
}

}  // namespace detail

enum class Reflection { None, BounceBack };

/// Streaming primitive of the method: QFT on the grid register, controlled
/// phase shifts, inverse QFT. With reflection None the phases are controlled
/// on the velocity ancilla of `dim`; with BounceBack on the obstacle ancilla.
/// Net effect: grid value +-1 (mod extent) on the controlled subspace, the
/// sign chosen by the direction qubit (|0> = +).
inline Circuit controlled_incrementer(const LatticeSpec& spec,
                                      const RegisterMap& rmap, std::size_t dim,
                                      Reflection reflection) {
  if (dim >= spec.num_dims())
    throw Error(ErrorCode::InvalidDimension,
                "dimension " + std::to_string(dim) + " out of range");
  Circuit c(rmap, "controlled_incrementer");
  const uint32_t ctrl = reflection == Reflection::None
                            ? anc_vel_qubit(rmap, dim)
                            : anc_obstacle_qubit(rmap, 0);
  detail::append_incrementer(c, rmap, dim, {ctrl});
  return c;
}

enum class ComparatorMode { Eq, Geq, Leq };

/// Flip `out` exactly on basis states where the grid register of `dim`
/// satisfies the predicate. Realized as a disjoint-event MCX sequence, so no
/// scratch qubits are consumed.
inline Circuit comparator(const RegisterMap& rmap, std::size_t dim,
                          int constant, ComparatorMode mode, uint32_t out) {
  const std::vector<uint32_t> g = detail::grid_register(rmap, dim);
  const int64_t max = (int64_t{1} << g.size()) - 1;
  if (constant < 0 || constant > max)
    throw Error(ErrorCode::ConstantOutOfRange,
                "comparator constant " + std::to_string(constant) +
                    " outside grid range [0, " + std::to_string(max) + "]");
  Circuit c(rmap, "comparator");
  switch (mode) {
    case ComparatorMode::Eq:
      detail::emit_eq_flip(c, g, uint64_t(constant), {}, {}, out);
      break;
    case ComparatorMode::Geq:
      detail::emit_geq_flips(c, g, uint64_t(constant), {}, {}, out);
      break;
    case ComparatorMode::Leq:
      detail::emit_leq_flips(c, g, uint64_t(constant), {}, {}, out);
      break;
  }
  return c;
}

/// InRange comparator: flips `out` iff lo <= grid value <= hi.
inline Circuit comparator_in_range(const RegisterMap& rmap, std::size_t dim,
                                   int lo, int hi, uint32_t out) {
  const std::vector<uint32_t> g = detail::grid_register(rmap, dim);
  const int64_t max = (int64_t{1} << g.size()) - 1;
  if (lo < 0 || hi > max || lo > hi)
    throw Error(ErrorCode::ConstantOutOfRange,
                "comparator range [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "] outside grid range");
  Circuit c(rmap, "comparator");
  detail::emit_range_flips(c, g, uint64_t(lo), uint64_t(hi), {}, {}, out);
  return c;
}

/// Reset the velocity ancilla of `dim` to |0> on every branch by uncomputing
/// the magnitude marking applied at the start of the substep.
inline Circuit streaming_ancilla_preparation(const LatticeSpec& spec,
                                             const RegisterMap& rmap,
                                             const std::vector<int>& magnitudes,
                                             std::size_t dim) {
  if (dim >= spec.num_dims())
    throw Error(ErrorCode::InvalidDimension, "dimension out of range");
  Circuit c(rmap, "streaming_ancilla_preparation");
  detail::append_magnitude_marking(c, rmap, magnitudes, dim);
  return c;
}

/// One substep of streaming: per dimension, mark the populations whose
/// magnitude is scheduled onto the velocity ancilla, then stream them one
/// cell along their direction. The ancilla is deliberately left set so the
/// reflection operators can reuse it.
inline Circuit streaming_operator(const LatticeSpec& spec,
                                  const RegisterMap& rmap,
                                  const std::vector<int>& magnitudes) {
  Circuit c(rmap, "streaming");
  for (std::size_t k = 0; k < spec.num_dims(); ++k) {
    detail::append_magnitude_marking(c, rmap, magnitudes, k);
    detail::append_incrementer(c, rmap, k, {anc_vel_qubit(rmap, k)});
  }
  return c;
}

namespace detail {

/// Compute (or uncompute) per-dimension in-object range flags onto the
/// comparator ancillae: ac[j] ^= [g_j within the block's j-range].
inline void append_membership_flags(Circuit& c, const RegisterMap& rmap,
                                    const Block& blk, std::size_t d) {
  for (std::size_t j = 0; j < d; ++j)
    emit_range_flips(c, grid_register(rmap, j), uint64_t(blk.lo(j)),
                     uint64_t(blk.hi(j)), {}, {},
                     anc_comparator_qubit(rmap, uint32_t(j)));
}

/// Compute (or uncompute) the per-dimension reset conditions onto ac[j]:
/// the dimension is consistent with a reflected particle, meaning either
///   - in range and not on an entry face (tangential dimensions), or
///   - one cell outside a face with the away direction and an active
///     velocity ancilla (reflected dimensions).
/// The five events are control-disjoint, so XOR flips compose them.
inline void append_specular_reset_flags(Circuit& c, const RegisterMap& rmap,
                                        const Block& blk, std::size_t d) {
  for (std::size_t j = 0; j < d; ++j) {
    const std::vector<uint32_t> g = grid_register(rmap, j);
    const uint32_t ac = anc_comparator_qubit(rmap, uint32_t(j));
    const uint32_t vd = vel_dir_qubit(rmap, j);
    const uint32_t av = anc_vel_qubit(rmap, j);
    emit_range_flips(c, g, uint64_t(blk.lo(j)), uint64_t(blk.hi(j)), {}, {}, ac);
    for (bool upper : {false, true}) {
      const uint64_t wall = uint64_t(upper ? blk.hi(j) : blk.lo(j));
      const uint64_t out = uint64_t(upper ? blk.hi(j) + 1 : blk.lo(j) - 1);
      // subtract entry-face states (inner near-corner polarity)
      emit_eq_flip(c, g, wall, {vd, av},
                   {dir_control_bit(upper, false), true}, ac);
      // add just-reflected states (outer near-corner polarity)
      emit_eq_flip(c, g, out, {vd, av},
                   {dir_control_bit(upper, true), true}, ac);
    }
  }
}

}  // namespace detail

/// Specular reflection for the given blocks: flag the dimensions through
/// which a population streamed into each obstacle, invert exactly those
/// direction qubits, stream the population back out, and reset the flags
/// through comparators whose direction polarities come from the near-corner
/// inversion vectors -- no additional qubits.
inline Circuit specular_reflection_operator(const LatticeSpec& spec,
                                            const RegisterMap& rmap,
                                            const std::vector<Block>& blocks,
                                            const ReflectionData& data) {
  const std::size_t d = spec.num_dims();
  Circuit c(rmap, "specular_reflection");
  for (const Block& blk : blocks) {
    if (blk.boundary != Boundary::Specular)
      throw Error(ErrorCode::UnknownBoundaryKind,
                  "specular operator given a non-specular block");
    const BlockReflection& br = detail::lookup_block(data, blk);

    // Detection: per dimension k, a population crossed the lo (hi) face iff
    // it moved this substep, sits on the wall layer with the entering
    // direction, and is inside the block in every other dimension.
    detail::append_membership_flags(c, rmap, blk, d);
    for (const WallSegment& w : br.walls) {
      std::vector<uint32_t> extra = {anc_vel_qubit(rmap, w.dim),
                                     vel_dir_qubit(rmap, w.dim)};
      std::vector<bool> pols = {true, w.dir_in};
      for (std::size_t j = 0; j < d; ++j) {
        if (j == w.dim) continue;
        extra.push_back(anc_comparator_qubit(rmap, uint32_t(j)));
        pols.push_back(true);
      }
      detail::emit_eq_flip(c, detail::grid_register(rmap, w.dim),
                           uint64_t(w.coord), std::move(extra), std::move(pols),
                           anc_obstacle_qubit(rmap, uint32_t(w.dim)));
    }
    detail::append_membership_flags(c, rmap, blk, d);  // uncompute

    // Reverse the velocity component normal to each flagged surface.
    for (std::size_t k = 0; k < d; ++k)
      c.add(Gate::cx(anc_obstacle_qubit(rmap, uint32_t(k)),
                     vel_dir_qubit(rmap, k)));

    // Stream flagged populations back out along the inverted components.
    for (std::size_t k = 0; k < d; ++k)
      detail::append_incrementer(c, rmap, k,
                                 {anc_obstacle_qubit(rmap, uint32_t(k))});

    // Reset the obstacle flags at the post-reflection positions.
    detail::append_specular_reset_flags(c, rmap, blk, d);
    for (const WallSegment& w : br.walls) {
      std::vector<uint32_t> extra = {anc_vel_qubit(rmap, w.dim),
                                     vel_dir_qubit(rmap, w.dim)};
      std::vector<bool> pols = {true, w.dir_out};
      for (std::size_t j = 0; j < d; ++j) {
        if (j == w.dim) continue;
        extra.push_back(anc_comparator_qubit(rmap, uint32_t(j)));
        pols.push_back(true);
      }
      detail::emit_eq_flip(c, detail::grid_register(rmap, w.dim),
                           uint64_t(w.out_coord), std::move(extra),
                           std::move(pols),
                           anc_obstacle_qubit(rmap, uint32_t(w.dim)));
    }
    detail::append_specular_reset_flags(c, rmap, blk, d);  // uncompute
  }
  return c;
}

/// Bounce-back reflection: a single obstacle ancilla flags in-object
/// populations, every direction qubit is inverted irrespective of the
/// contact surface, flagged populations stream back out along the dimensions
/// they moved in, and the flag is reset by the displaced membership
/// comparators.
inline Circuit bounceback_reflection_operator(const LatticeSpec& spec,
                                              const RegisterMap& rmap,
                                              const std::vector<Block>& blocks,
                                              const ReflectionData& data) {
  const std::size_t d = spec.num_dims();
  Circuit c(rmap, "bounceback_reflection");
  const uint32_t ao = anc_obstacle_qubit(rmap, 0);
  for (const Block& blk : blocks) {
    if (blk.boundary != Boundary::BounceBack)
      throw Error(ErrorCode::UnknownBoundaryKind,
                  "bounce-back operator given a non-bounce-back block");
    detail::lookup_block(data, blk);

    // Detect: populations inside the block in every dimension.
    detail::append_membership_flags(c, rmap, blk, d);
    {
      std::vector<uint32_t> ctrls;
      for (std::size_t j = 0; j < d; ++j)
        ctrls.push_back(anc_comparator_qubit(rmap, uint32_t(j)));
      c.add(Gate::x(ao).controlled(std::move(ctrls)));
    }
    detail::append_membership_flags(c, rmap, blk, d);

    // Invert all directions, then stream back out of the block. Only the
    // dimensions that streamed this substep move back, so the velocity
    // ancilla joins the controls.
    for (std::size_t k = 0; k < d; ++k)
      c.add(Gate::cx(ao, vel_dir_qubit(rmap, k)));
    for (std::size_t k = 0; k < d; ++k)
      detail::append_incrementer(c, rmap, k, {ao, anc_vel_qubit(rmap, k)});

    // Reset: a reflected population is one whose pre-reflection position was
    // inside the block -- per dimension, either it did not move (in range)
    // or it moved out along its current direction (displaced range).
    auto reset_flags = [&] {
      for (std::size_t j = 0; j < d; ++j) {
        const std::vector<uint32_t> g = detail::grid_register(rmap, j);
        const uint32_t ac = anc_comparator_qubit(rmap, uint32_t(j));
        const uint32_t vd = vel_dir_qubit(rmap, j);
        const uint32_t av = anc_vel_qubit(rmap, j);
        detail::emit_range_flips(c, g, uint64_t(blk.lo(j)), uint64_t(blk.hi(j)),
                                 {av}, {false}, ac);
        detail::emit_range_flips(c, g, uint64_t(blk.lo(j) + 1),
                                 uint64_t(blk.hi(j) + 1), {av, vd},
                                 {true, false}, ac);
        detail::emit_range_flips(c, g, uint64_t(blk.lo(j) - 1),
                                 uint64_t(blk.hi(j) - 1), {av, vd},
                                 {true, true}, ac);
      }
    };
    reset_flags();
    {
      std::vector<uint32_t> ctrls;
      for (std::size_t j = 0; j < d; ++j)
        ctrls.push_back(anc_comparator_qubit(rmap, uint32_t(j)));
      c.add(Gate::x(ao).controlled(std::move(ctrls)));
    }
    reset_flags();
  }
  return c;
}

/// One full time step: for every CFL substep, stream the scheduled
/// magnitudes, apply specular then bounce-back reflection, and reset the
/// velocity ancillae per dimension.
inline Circuit cqlbm_step(const LatticeSpec& spec, const RegisterMap& rmap,
                          const ReflectionData& data) {
  Circuit c(rmap, "cqlbm_step");
  const std::vector<Block> specular = spec.blocks_with(Boundary::Specular);
  const std::vector<Block> bounceback = spec.blocks_with(Boundary::BounceBack);
  const SubstepSchedule schedule = substep_schedule(spec.max_magnitude());
  for (const std::vector<int>& magnitudes : schedule.substeps) {
    c = compose(c, streaming_operator(spec, rmap, magnitudes));
    c = compose(c, specular_reflection_operator(spec, rmap, specular, data));
    c = compose(c, bounceback_reflection_operator(spec, rmap, bounceback, data));
    for (std::size_t k = 0; k < spec.num_dims(); ++k)
      c = compose(c, streaming_ancilla_preparation(spec, rmap, magnitudes, k));
  }
  return c;
}

/// Particles distributed uniformly over the left half of the domain with all
/// velocity magnitudes superposed and both directions positive.
inline Circuit initial_left_half_uniform(const LatticeSpec& spec,
                                         const RegisterMap& rmap) {
  Circuit c(rmap, "initial_conditions");
  const std::size_t d = spec.num_dims();
  for (std::size_t k = 0; k < d; ++k) {
    const std::vector<uint32_t> g = detail::grid_register(rmap, k);
    for (std::size_t b = 0; b < g.size(); ++b) {
      if (k == 0 && b + 1 == g.size()) continue;  // x < dims[0]/2
      c.add(Gate::h(g[b]));
    }
  }
  for (std::size_t k = 0; k < d; ++k)
    for (uint32_t q : detail::mag_register(rmap, k)) c.add(Gate::h(q));
  return c;
}

/// A single particle at `pos` with per-dimension signed velocities
/// (magnitude 1..Q, sign by the integer's sign).
inline Circuit initial_point_source(const LatticeSpec& spec,
                                    const RegisterMap& rmap,
                                    const std::vector<int>& pos,
                                    const std::vector<int>& vel) {
  const std::size_t d = spec.num_dims();
  if (pos.size() != d || vel.size() != d)
    throw Error(ErrorCode::InvalidDimension,
                "point source needs one position and velocity per dimension");
  for (std::size_t k = 0; k < d; ++k) {
    if (pos[k] < 0 || pos[k] >= spec.dims[k])
      throw Error(ErrorCode::PositionOutOfRange,
                  "point source position outside the grid");
    const int mag = std::abs(vel[k]);
    if (mag < 1 || mag > spec.max_magnitude())
      throw Error(ErrorCode::ConstantOutOfRange,
                  "velocity magnitude must be in [1, " +
                      std::to_string(spec.max_magnitude()) + "]");
  }
  for (const Block& blk : spec.blocks)
    if (blk.contains(pos))
      throw Error(ErrorCode::PositionInsideObstacle,
                  "point source position lies inside an obstacle");

  Circuit c(rmap, "initial_conditions");
  for (std::size_t k = 0; k < d; ++k) {
    const std::vector<uint32_t> g = detail::grid_register(rmap, k);
    for (std::size_t b = 0; b < g.size(); ++b)
      if ((pos[k] >> b) & 1) c.add(Gate::x(g[b]));
    const std::vector<uint32_t> m = detail::mag_register(rmap, k);
    const int mval = std::abs(vel[k]) - 1;
    for (std::size_t b = 0; b < m.size(); ++b)
      if ((mval >> b) & 1) c.add(Gate::x(m[b]));
    if (vel[k] < 0) c.add(Gate::x(vel_dir_qubit(rmap, k)));
  }
  return c;
}

/// Measurement of the grid registers only.
inline Circuit grid_measurement(const RegisterMap& rmap) {
  Circuit c(rmap, "grid_measurement");
  for (const auto& r : rmap.registers) {
    if (r.name.rfind("g_", 0) != 0) continue;
    for (uint32_t b = 0; b < r.width; ++b) c.add(Gate::measure(r.offset + b));
  }
  return c;
}

}  // namespace qlbw
