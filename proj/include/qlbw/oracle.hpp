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
#include <vector>

#include "qlbw/components.hpp"
#include "qlbw/lattice.hpp"

namespace qlbw {

/// One classical particle: position on the periodic grid plus a signed
/// discrete velocity per dimension (|v| in 1..Q).
struct OracleParticle {
  std::vector<int> pos;
  std::vector<int> mag;   // 1..Q
  std::vector<int> sign;  // +1 or -1
};

/// Multiset of particles; ground truth for the quantum transport circuits.
/// No particle sits strictly inside a block at a substep boundary.
struct OracleState {
  std::vector<OracleParticle> particles;
};

namespace detail {

inline const Block* containing_block(const LatticeSpec& spec,
                                     const std::vector<int>& pos) {
  const Block* found = nullptr;
  for (const Block& blk : spec.blocks) {
    if (!blk.contains(pos)) continue;
    if (found)
      throw Error(ErrorCode::UnresolvableReflection,
                  "particle inside two blocks at once; geometry violates the "
                  "separation rule");
    found = &blk;
  }
  return found;
}

inline int wrap(int x, int extent) { return ((x % extent) + extent) % extent; }

}  // namespace detail

/// Advance one full time step, mirroring the quantum substep order: every
/// scheduled magnitude streams one cell, then any particle that landed inside
/// a block is reflected back out within the same substep.
inline OracleState oracle_step(const OracleState& state,
                               const LatticeSpec& spec) {
  const std::size_t d = spec.num_dims();
  const SubstepSchedule schedule = substep_schedule(spec.max_magnitude());
  OracleState out = state;

  for (const std::vector<int>& magnitudes : schedule.substeps) {
    for (OracleParticle& p : out.particles) {
      std::vector<bool> moved(d, false);
      for (std::size_t k = 0; k < d; ++k) {
        for (int m : magnitudes)
          if (p.mag[k] == m) moved[k] = true;
        if (moved[k]) p.pos[k] = detail::wrap(p.pos[k] + p.sign[k], spec.dims[k]);
      }

      const Block* blk = detail::containing_block(spec, p.pos);
      if (!blk) continue;

      if (blk->boundary == Boundary::Specular) {
        // Reverse the components normal to the crossed surfaces, then move
        // back out along exactly those components.
        bool any = false;
        for (std::size_t k = 0; k < d; ++k) {
          const bool crossed =
              moved[k] && ((p.sign[k] > 0 && p.pos[k] == blk->lo(k)) ||
                           (p.sign[k] < 0 && p.pos[k] == blk->hi(k)));
          if (!crossed) continue;
          any = true;
          p.sign[k] = -p.sign[k];
          p.pos[k] = detail::wrap(p.pos[k] + p.sign[k], spec.dims[k]);
        }
        if (!any)
          throw Error(ErrorCode::UnresolvableReflection,
                      "particle inside a block without a crossing surface");
      } else {
        // Bounce-back: all directions invert irrespective of the contact
        // surface; the particle retraces the dimensions it streamed in.
        for (std::size_t k = 0; k < d; ++k) {
          p.sign[k] = -p.sign[k];
          if (moved[k]) p.pos[k] = detail::wrap(p.pos[k] + p.sign[k], spec.dims[k]);
        }
      }

      if (detail::containing_block(spec, p.pos))
        throw Error(ErrorCode::UnresolvableReflection,
                    "particle could not exit the geometry in one substep");
    }
  }
  return out;
}

/// Histogram of particle positions.
inline std::map<std::vector<int>, uint64_t> oracle_density(
    const OracleState& state) {
  std::map<std::vector<int>, uint64_t> hist;
  for (const OracleParticle& p : state.particles) ++hist[p.pos];
  return hist;
}

/// The classical ensemble matching the LeftHalfUniform initial conditions:
/// one particle per (cell with x < dims[0]/2, magnitude combination), all
/// signs positive.
inline OracleState oracle_left_half_uniform(const LatticeSpec& spec) {
  const std::size_t d = spec.num_dims();
  const int q_max = spec.max_magnitude();
  OracleState state;
  std::vector<int> pos(d, 0);
  auto cells = [&](auto&& self, std::size_t k) -> void {
    if (k == d) {
      std::vector<int> mag(d, 1);
      auto mags = [&](auto&& inner, std::size_t j) -> void {
        if (j == d) {
          state.particles.push_back({pos, mag, std::vector<int>(d, +1)});
          return;
        }
        for (int m = 1; m <= q_max; ++m) {
          mag[j] = m;
          inner(inner, j + 1);
        }
      };
      mags(mags, 0);
      return;
    }
    const int limit = (k == 0) ? spec.dims[0] / 2 : spec.dims[k];
    for (int x = 0; x < limit; ++x) {
      pos[k] = x;
      self(self, k + 1);
    }
  };
  cells(cells, 0);
  return state;
}

}  // namespace qlbw
