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
#include <vector>

#include "qlbw/lattice.hpp"

namespace qlbw {

/// A lattice point adjacent to an obstacle corner, encoded per dimension by
/// whether it sits on the upper-bound surface (bound) and whether it lies
/// outside the object interval (outside).
struct NearCornerPoint {
  std::vector<bool> bound;    // true = upper-bound surface, false = lower
  std::vector<bool> outside;  // true = outside the object bounds
  std::vector<int> grid_coords;
};

/// Per-dimension reset/inversion flags for a near-corner point. A set flag
/// means the direction/ancilla qubit for that dimension is conditioned on its
/// inverted (negative-direction) value at this point.
inline std::vector<bool> inversion_vector(const NearCornerPoint& p) {
  std::vector<bool> out(p.bound.size());
  for (std::size_t k = 0; k < p.bound.size(); ++k)
    out[k] = p.bound[k] != p.outside[k];
  return out;
}

/// One face of a cuboid obstacle: the layer of cells at `coord` in dimension
/// `dim`, spanning the block's ranges in every other dimension. `upper` picks
/// the hi face; the incident velocity direction follows from it (particles
/// enter a lower face moving +, an upper face moving -).
struct WallSegment {
  std::size_t dim = 0;
  bool upper = false;
  int coord = 0;       // wall cell coordinate (lo or hi of the block)
  int out_coord = 0;   // first fluid cell beyond the wall (lo-1 or hi+1)
  std::vector<std::array<int, 2>> tangential;  // full block ranges, [dim] unused
  bool dir_in = false;   // direction bit of particles entering this face
  bool dir_out = false;  // direction bit of particles leaving after reflection
};

/// Cuboid feature of codimension >= 2 (a corner in 2D; an edge or corner in
/// 3D), with the inner and outer near-corner points it contributes.
struct CornerFeature {
  std::vector<bool> bound;         // per normal dimension: upper-bound side
  std::vector<std::size_t> dims;   // normal dimensions of the feature
  NearCornerPoint inner;           // all normal coords on the wall cells
  NearCornerPoint outer;           // all normal coords one cell outside
};

/// Classically precomputed reflection bookkeeping for one block.
struct BlockReflection {
  Block block;
  std::vector<WallSegment> walls;
  std::vector<CornerFeature> corners;  // |dims| == d features
  std::vector<CornerFeature> edges;    // |dims| == 2 features, 3D only
};

struct ReflectionData {
  std::vector<BlockReflection> blocks;
};

namespace detail {

inline NearCornerPoint make_corner_point(const Block& blk,
                                         const std::vector<std::size_t>& dims,
                                         const std::vector<bool>& bound,
                                         bool outside_all,
                                         std::size_t total_dims) {
  NearCornerPoint p;
  p.bound.assign(total_dims, false);
  p.outside.assign(total_dims, false);
  p.grid_coords.assign(total_dims, 0);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::size_t k = dims[i];
    p.bound[k] = bound[i];
    p.outside[k] = outside_all;
    const int wall = bound[i] ? blk.hi(k) : blk.lo(k);
    p.grid_coords[k] = outside_all ? (bound[i] ? wall + 1 : wall - 1) : wall;
  }
  return p;
}

}  // namespace detail

/// Enumerate the wall segments and near-corner features of every block.
/// The same cartesian-product construction covers 2D corners and 3D edges
/// and corners.
inline ReflectionData reflection_data(const LatticeSpec& spec) {
  ReflectionData data;
  const std::size_t d = spec.num_dims();
  for (const Block& blk : spec.blocks) {
    BlockReflection br;
    br.block = blk;
    for (std::size_t k = 0; k < d; ++k) {
      for (bool upper : {false, true}) {
        WallSegment w;
        w.dim = k;
        w.upper = upper;
        w.coord = upper ? blk.hi(k) : blk.lo(k);
        w.out_coord = upper ? blk.hi(k) + 1 : blk.lo(k) - 1;
        w.tangential = blk.bounds;
        // dir bit 0 = positive. Entering a lower face means moving +;
        // leaving it after reflection means moving -.
        w.dir_in = upper;
        w.dir_out = !upper;
        br.walls.push_back(std::move(w));
      }
    }

    // Features of normal-dimension count m >= 2: choose m dimensions and a
    // lo/hi side per chosen dimension; keep the inner and outer point of each.
    auto emit_features = [&](std::size_t m, std::vector<CornerFeature>& out) {
      std::vector<std::size_t> dims_choice;
      auto choose = [&](auto&& self, std::size_t start) -> void {
        if (dims_choice.size() == m) {
          const std::size_t combos = std::size_t{1} << m;
          for (std::size_t mask = 0; mask < combos; ++mask) {
            CornerFeature f;
            f.dims = dims_choice;
            f.bound.resize(m);
            for (std::size_t i = 0; i < m; ++i) f.bound[i] = (mask >> i) & 1;
            f.inner = detail::make_corner_point(blk, f.dims, f.bound, false, d);
            f.outer = detail::make_corner_point(blk, f.dims, f.bound, true, d);
            out.push_back(std::move(f));
          }
          return;
        }
        for (std::size_t k = start; k < d; ++k) {
          dims_choice.push_back(k);
          self(self, k + 1);
          dims_choice.pop_back();
        }
      };
      choose(choose, 0);
    };

    if (d == 3) emit_features(2, br.edges);
    emit_features(d, br.corners);
    data.blocks.push_back(std::move(br));
  }
  return data;
}

}  // namespace qlbw
