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
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlbw/errors.hpp"

namespace qlbw {

enum class Boundary { Specular, BounceBack };

inline const char* boundary_name(Boundary b) {
  return b == Boundary::Specular ? "specular" : "bounceback";
}

/// Axis-aligned cuboid obstacle. Bounds are inclusive grid-cell intervals.
struct Block {
  std::vector<std::array<int, 2>> bounds;  // [lo, hi] per dimension
  Boundary boundary = Boundary::BounceBack;

  int lo(std::size_t dim) const { return bounds[dim][0]; }
  int hi(std::size_t dim) const { return bounds[dim][1]; }

  bool contains(const std::vector<int>& pos) const {
    for (std::size_t k = 0; k < bounds.size(); ++k) {
      if (pos[k] < bounds[k][0] || pos[k] > bounds[k][1]) return false;
    }
    return true;
  }
};

/// Parsed problem definition: grid extents, discrete velocity counts, and
/// obstacle geometry. Immutable after parse_lattice/validate.
struct LatticeSpec {
  std::vector<int> dims;        // grid extent per dimension, power of two
  std::vector<int> velocities;  // discrete velocities per dimension, power of two >= 2
  std::vector<Block> blocks;

  std::size_t num_dims() const { return dims.size(); }

  /// Largest velocity magnitude Q = velocities/2 (magnitudes 1..Q each sign).
  int max_magnitude() const { return velocities[0] / 2; }

  bool all_bounceback() const {
    return std::all_of(blocks.begin(), blocks.end(), [](const Block& b) {
      return b.boundary == Boundary::BounceBack;
    });
  }

  std::vector<Block> blocks_with(Boundary kind) const {
    std::vector<Block> out;
    for (const auto& b : blocks)
      if (b.boundary == kind) out.push_back(b);
    return out;
  }
};

namespace detail {

inline bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

inline int log2_exact(long v) {
  int n = 0;
  while ((1L << n) < v) ++n;
  return n;
}

inline const char* dim_key(std::size_t k) {
  static const char* keys[3] = {"x", "y", "z"};
  return keys[k];
}

}  // namespace detail

/// Named contiguous qubit ranges laid out over [0, total_qubits).
/// Order: g_x..g_z, v_x..v_z (magnitude), v_dir_x..v_dir_z, av, ao, ac.
struct RegisterMap {
  struct Register {
    std::string name;
    uint32_t offset = 0;
    uint32_t width = 0;
  };

  std::vector<Register> registers;
  uint32_t total_qubits = 0;

  const Register& reg(const std::string& name) const {
    for (const auto& r : registers)
      if (r.name == name) return r;
    throw Error(ErrorCode::IndexOutOfRange, "no register named " + name);
  }

  bool has(const std::string& name) const {
    return std::any_of(registers.begin(), registers.end(),
                       [&](const Register& r) { return r.name == name; });
  }

  uint32_t qubit(const std::string& name, uint32_t bit) const {
    const Register& r = reg(name);
    if (bit >= r.width)
      throw Error(ErrorCode::IndexOutOfRange,
                  "bit " + std::to_string(bit) + " outside register " + name);
    return r.offset + bit;
  }

  std::vector<uint32_t> qubits(const std::string& name) const {
    const Register& r = reg(name);
    std::vector<uint32_t> out(r.width);
    for (uint32_t i = 0; i < r.width; ++i) out[i] = r.offset + i;
    return out;
  }

  /// Anonymous flat register, used by primitives built outside a lattice.
  static RegisterMap flat(uint32_t n, const std::string& name = "q") {
    RegisterMap m;
    m.registers.push_back({name, 0, n});
    m.total_qubits = n;
    return m;
  }
};

inline void validate_lattice(const LatticeSpec& spec) {
  const std::size_t d = spec.dims.size();
  if (d < 2 || d > 3)
    throw Error(ErrorCode::InvalidDimension,
                "lattice must be 2D or 3D, got " + std::to_string(d) + "D");
  if (spec.velocities.size() != d)
    throw Error(ErrorCode::MalformedJson,
                "velocities must cover the same dimensions as dim");
  for (std::size_t k = 0; k < d; ++k) {
    if (!detail::is_power_of_two(spec.dims[k]))
      throw Error(ErrorCode::NonPowerOfTwoExtent,
                  std::string("lattice.dim.") + detail::dim_key(k) + " = " +
                      std::to_string(spec.dims[k]) + " is not a power of two");
    if (!detail::is_power_of_two(spec.velocities[k]) || spec.velocities[k] < 2)
      throw Error(ErrorCode::NonPowerOfTwoExtent,
                  std::string("lattice.velocities.") + detail::dim_key(k) +
                      " = " + std::to_string(spec.velocities[k]) +
                      " must be a power of two >= 2");
    if (spec.velocities[k] != spec.velocities[0])
      throw Error(ErrorCode::MalformedJson,
                  "discrete velocity counts must be uniform across dimensions");
  }
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    const Block& blk = spec.blocks[b];
    if (blk.bounds.size() != d)
      throw Error(ErrorCode::BoundsOutOfRange,
                  "geometry[" + std::to_string(b) + "] must specify all " +
                      std::to_string(d) + " dimensions");
    for (std::size_t k = 0; k < d; ++k) {
      const int lo = blk.bounds[k][0], hi = blk.bounds[k][1];
      const std::string where = "geometry[" + std::to_string(b) + "]." +
                                detail::dim_key(k);
      if (lo > hi)
        throw Error(ErrorCode::BoundsOutOfRange,
                    where + " = [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "] is inverted");
      // Blocks may not touch the periodic domain edge: wrap-through-obstacle
      // streaming is undefined.
      if (lo < 1 || hi > spec.dims[k] - 2)
        throw Error(ErrorCode::BoundsOutOfRange,
                    where + " = [" + std::to_string(lo) + ", " +
                        std::to_string(hi) +
                        "] must lie strictly inside the grid [1, " +
                        std::to_string(spec.dims[k] - 2) + "]");
    }
  }
  // Any two blocks must be separated by >= 2 grid points in at least one
  // dimension so reflection ancillae can be reused across obstacles.
  for (std::size_t a = 0; a < spec.blocks.size(); ++a) {
    for (std::size_t b = a + 1; b < spec.blocks.size(); ++b) {
      bool ok = false;
      for (std::size_t k = 0; k < d && !ok; ++k) {
        const int gap = std::max(
            spec.blocks[b].bounds[k][0] - spec.blocks[a].bounds[k][1] - 1,
            spec.blocks[a].bounds[k][0] - spec.blocks[b].bounds[k][1] - 1);
        ok = gap >= 2;
      }
      if (!ok)
        throw Error(ErrorCode::SeparationViolation,
                    "geometry[" + std::to_string(a) + "] and geometry[" +
                        std::to_string(b) +
                        "] are closer than 2 grid points in every dimension");
    }
  }
}

/// Parse the JSON lattice configuration. Field names follow the interface
/// exactly: lattice.dim.{x,y,z}, lattice.velocities.{x,y,z},
/// geometry[].{x,y,z,boundary}.
inline LatticeSpec parse_lattice(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }

  auto require = [](const nlohmann::json& node, const char* key,
                    const std::string& where) -> const nlohmann::json& {
    if (!node.is_object() || !node.contains(key))
      throw Error(ErrorCode::MalformedJson, where + " is missing \"" + key + "\"");
    return node.at(key);
  };

  LatticeSpec spec;
  const auto& lattice = require(j, "lattice", "document root");
  const auto& dim = require(lattice, "dim", "lattice");
  const auto& vel = require(lattice, "velocities", "lattice");

  const std::size_t d = dim.contains("z") ? 3 : 2;
  for (std::size_t k = 0; k < d; ++k) {
    const char* key = detail::dim_key(k);
    const auto& dv = require(dim, key, "lattice.dim");
    const auto& vv = require(vel, key, "lattice.velocities");
    if (!dv.is_number_integer() || !vv.is_number_integer())
      throw Error(ErrorCode::MalformedJson,
                  std::string("lattice.dim/velocities .") + key +
                      " must be integers");
    spec.dims.push_back(dv.get<int>());
    spec.velocities.push_back(vv.get<int>());
  }
  if (vel.contains("z") != dim.contains("z"))
    throw Error(ErrorCode::MalformedJson,
                "lattice.dim and lattice.velocities disagree on dimensionality");

  if (j.contains("geometry")) {
    const auto& geometry = j.at("geometry");
    if (!geometry.is_array())
      throw Error(ErrorCode::MalformedJson, "geometry must be an array");
    for (std::size_t b = 0; b < geometry.size(); ++b) {
      const auto& g = geometry[b];
      const std::string where = "geometry[" + std::to_string(b) + "]";
      Block blk;
      for (std::size_t k = 0; k < d; ++k) {
        const auto& iv = require(g, detail::dim_key(k), where);
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number_integer() ||
            !iv[1].is_number_integer())
          throw Error(ErrorCode::MalformedJson,
                      where + "." + detail::dim_key(k) +
                          " must be a [lo, hi] integer pair");
        blk.bounds.push_back({iv[0].get<int>(), iv[1].get<int>()});
      }
      const auto& bnd = require(g, "boundary", where);
      if (!bnd.is_string())
        throw Error(ErrorCode::MalformedJson, where + ".boundary must be a string");
      const std::string kind = bnd.get<std::string>();
      if (kind == "specular") {
        blk.boundary = Boundary::Specular;
      } else if (kind == "bounceback") {
        blk.boundary = Boundary::BounceBack;
      } else {
        throw Error(ErrorCode::UnknownBoundaryKind,
                    where + ".boundary = \"" + kind +
                        "\" (expected \"specular\" or \"bounceback\")");
      }
      spec.blocks.push_back(std::move(blk));
    }
  }

  validate_lattice(spec);
  return spec;
}

/// Inverse of parse_lattice on valid specs (round-trip identity).
inline std::string serialize_lattice(const LatticeSpec& spec) {
  nlohmann::json j;
  for (std::size_t k = 0; k < spec.num_dims(); ++k) {
    j["lattice"]["dim"][detail::dim_key(k)] = spec.dims[k];
    j["lattice"]["velocities"][detail::dim_key(k)] = spec.velocities[k];
  }
  j["geometry"] = nlohmann::json::array();
  for (const auto& blk : spec.blocks) {
    nlohmann::json g;
    for (std::size_t k = 0; k < spec.num_dims(); ++k)
      g[detail::dim_key(k)] = {blk.bounds[k][0], blk.bounds[k][1]};
    g["boundary"] = boundary_name(blk.boundary);
    j["geometry"].push_back(g);
  }
  return j.dump(2);
}

/// Adaptive register layout. With bounce-back-only geometry the obstacle
/// register is shrunk to a single ancilla; mixed or specular geometry widens
/// it to d so per-dimension reflection flags fit.
inline RegisterMap register_layout(const LatticeSpec& spec) {
  const std::size_t d = spec.num_dims();
  const int mag_width = detail::log2_exact(spec.velocities[0]) - 1;
  const uint32_t ao_width =
      spec.all_bounceback() ? 1u : static_cast<uint32_t>(d);
  const uint32_t ac_width = static_cast<uint32_t>(d * (d - 1));

  RegisterMap m;
  uint32_t cursor = 0;
  auto push = [&](const std::string& name, uint32_t width) {
    m.registers.push_back({name, cursor, width});
    cursor += width;
  };
  for (std::size_t k = 0; k < d; ++k)
    push(std::string("g_") + detail::dim_key(k),
         static_cast<uint32_t>(detail::log2_exact(spec.dims[k])));
  for (std::size_t k = 0; k < d; ++k)
    push(std::string("v_") + detail::dim_key(k),
         static_cast<uint32_t>(mag_width));
  for (std::size_t k = 0; k < d; ++k)
    push(std::string("v_dir_") + detail::dim_key(k), 1);
  push("av", static_cast<uint32_t>(d));
  push("ao", ao_width);
  push("ac", ac_width);
  m.total_qubits = cursor;
  return m;
}

/// Qubit holding the grid coordinate bit `bit` in dimension `dim`.
inline uint32_t grid_qubit(const RegisterMap& m, std::size_t dim, uint32_t bit) {
  return m.qubit(std::string("g_") + detail::dim_key(dim), bit);
}

inline uint32_t grid_width(const RegisterMap& m, std::size_t dim) {
  return m.reg(std::string("g_") + detail::dim_key(dim)).width;
}

inline uint32_t vel_mag_width(const RegisterMap& m, std::size_t dim) {
  return m.reg(std::string("v_") + detail::dim_key(dim)).width;
}

inline uint32_t vel_mag_qubit(const RegisterMap& m, std::size_t dim, uint32_t bit) {
  return m.qubit(std::string("v_") + detail::dim_key(dim), bit);
}

/// Direction qubit for dimension `dim`; |0> encodes the positive direction.
inline uint32_t vel_dir_qubit(const RegisterMap& m, std::size_t dim) {
  return m.qubit(std::string("v_dir_") + detail::dim_key(dim), 0);
}

inline uint32_t anc_vel_qubit(const RegisterMap& m, std::size_t dim) {
  return m.qubit("av", static_cast<uint32_t>(dim));
}

inline uint32_t anc_obstacle_qubit(const RegisterMap& m, uint32_t i) {
  return m.qubit("ao", i);
}

inline uint32_t anc_comparator_qubit(const RegisterMap& m, uint32_t i) {
  return m.qubit("ac", i);
}

}  // namespace qlbw
