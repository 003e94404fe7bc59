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
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "qlbw/errors.hpp"
#include "qlbw/lattice.hpp"
#include "qlbw/statevector.hpp"

namespace qlbw {

namespace io_detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace io_detail

/// Legacy-ASCII VTK structured points over the lattice, one density value per
/// grid cell in row-major order (x fastest). 2D fields are emitted with a
/// single z layer so the same visualization pipeline serves both. Output is
/// bit-stable for golden-file comparison.
inline std::string export_vtk(
    const std::map<std::vector<uint32_t>, double>& density,
    const std::vector<int>& dims, const std::string& title = "qlbw density") {
  const std::size_t d = dims.size();
  const int nx = dims[0];
  const int ny = d > 1 ? dims[1] : 1;
  const int nz = d > 2 ? dims[2] : 1;

  std::vector<double> field(std::size_t(nx) * ny * nz, 0.0);
  for (const auto& [coords, value] : density) {
    if (coords.size() != d)
      throw Error(ErrorCode::PositionOutOfRange,
                  "density key dimensionality mismatch");
    for (std::size_t k = 0; k < d; ++k)
      if (int(coords[k]) >= dims[k])
        throw Error(ErrorCode::PositionOutOfRange,
                    "density position outside the grid");
    const std::size_t x = coords[0];
    const std::size_t y = d > 1 ? coords[1] : 0;
    const std::size_t z = d > 2 ? coords[2] : 0;
    field[(z * std::size_t(ny) + y) * std::size_t(nx) + x] = value;
  }

  std::string out;
  out += "# vtk DataFile Version 3.0\n";
  out += title + "\n";
  out += "ASCII\n";
  out += "DATASET STRUCTURED_POINTS\n";
  out += "DIMENSIONS " + std::to_string(nx) + " " + std::to_string(ny) + " " +
         std::to_string(nz) + "\n";
  out += "POINT_DATA " + std::to_string(nx * ny * nz) + "\n";
  out += "SCALARS density float 1\n";
  out += "LOOKUP_TABLE default\n";
  for (int z = 0; z < nz; ++z) {
    for (int y = 0; y < ny; ++y) {
      std::string row;
      for (int x = 0; x < nx; ++x) {
        if (x) row += ' ';
        row += io_detail::fmt(field[(std::size_t(z) * ny + y) * nx + x]);
      }
      out += row + "\n";
    }
  }
  return out;
}

/// ASCII STL triangulation of the obstacle cuboids: 12 facets per block with
/// outward unit normals. A block covering cells [lo, hi] spans the physical
/// box [lo, hi+1]; 2D blocks extrude to one unit in z.
inline std::string export_stl(const std::vector<Block>& blocks,
                              const std::string& name = "qlbw_geometry") {
  std::string out = "solid " + name + "\n";
  for (const Block& blk : blocks) {
    double lo[3] = {0.0, 0.0, 0.0}, hi[3] = {1.0, 1.0, 1.0};
    for (std::size_t k = 0; k < blk.bounds.size() && k < 3; ++k) {
      lo[k] = double(blk.bounds[k][0]);
      hi[k] = double(blk.bounds[k][1] + 1);
    }
    for (int axis = 0; axis < 3; ++axis) {
      for (int side = 0; side < 2; ++side) {
        const double plane = side ? hi[axis] : lo[axis];
        double normal[3] = {0.0, 0.0, 0.0};
        normal[axis] = side ? 1.0 : -1.0;
        const int u = (axis + 1) % 3, v = (axis + 2) % 3;
        // four face corners, counterclockwise seen from outside
        double quad[4][3];
        const double uu[4] = {lo[u], hi[u], hi[u], lo[u]};
        const double vv[4] = {lo[v], lo[v], hi[v], hi[v]};
        for (int i = 0; i < 4; ++i) {
          quad[i][axis] = plane;
          quad[i][u] = uu[i];
          quad[i][v] = vv[i];
        }
        if (!side) std::swap(quad[1], quad[3]);  // flip winding on lower faces
        const int tris[2][3] = {{0, 1, 2}, {0, 2, 3}};
        for (const auto& tri : tris) {
          out += "  facet normal " + io_detail::fmt(normal[0]) + " " +
                 io_detail::fmt(normal[1]) + " " + io_detail::fmt(normal[2]) +
                 "\n";
          out += "    outer loop\n";
          for (int i : tri)
            out += "      vertex " + io_detail::fmt(quad[i][0]) + " " +
                   io_detail::fmt(quad[i][1]) + " " +
                   io_detail::fmt(quad[i][2]) + "\n";
          out += "    endloop\n";
          out += "  endfacet\n";
        }
      }
    }
  }
  out += "endsolid " + name + "\n";
  return out;
}

/// Per-step counts in join-friendly CSV: step,x,y[,z],count.
inline std::string export_counts_csv(const std::vector<Counts>& per_step,
                                     std::size_t num_dims) {
  std::string out = "step,x,y";
  if (num_dims > 2) out += ",z";
  out += ",count\n";
  for (std::size_t step = 0; step < per_step.size(); ++step) {
    for (const auto& [coords, value] : per_step[step].table) {
      std::string row = std::to_string(step + 1);
      for (std::size_t k = 0; k < num_dims; ++k)
        row += "," + std::to_string(k < coords.size() ? coords[k] : 0);
      row += "," + io_detail::fmt(value);
      out += row + "\n";
    }
  }
  return out;
}

}  // namespace qlbw
