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

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "qlbw/geometry.hpp"
#include "qlbw/oracle.hpp"

using namespace qlbw;
using qlbw::testing::make_block;
using qlbw::testing::make_lattice;

namespace {

OracleParticle particle(std::vector<int> pos, std::vector<int> vel) {
  OracleParticle p;
  p.pos = std::move(pos);
  for (int v : vel) {
    p.mag.push_back(std::abs(v));
    p.sign.push_back(v < 0 ? -1 : +1);
  }
  return p;
}

}  // namespace

TEST_CASE("free streaming advances magnitude-scaled displacements") {
  const LatticeSpec spec = make_lattice({8, 8}, 4, {});
  SECTION("(2,3) with unit velocities reaches (3,4)") {
    OracleState s{{particle({2, 3}, {1, 1})}};
    s = oracle_step(s, spec);
    CHECK(s.particles[0].pos == std::vector<int>{3, 4});
  }
  SECTION("periodic wrap from the far corner") {
    OracleState s{{particle({7, 7}, {1, 1})}};
    s = oracle_step(s, spec);
    CHECK(s.particles[0].pos == std::vector<int>{0, 0});
  }
  SECTION("magnitude 2 moves two cells per step") {
    OracleState s{{particle({1, 1}, {2, -2})}};
    s = oracle_step(s, spec);
    CHECK(s.particles[0].pos == std::vector<int>{3, 7});
  }
}

TEST_CASE("specular flips the normal component, bounce-back flips all") {
  SECTION("face-on impact in x") {
    const LatticeSpec specular = make_lattice(
        {8, 8}, 4, {make_block({{4, 5}, {2, 5}}, Boundary::Specular)});
    OracleState s{{particle({3, 3}, {1, 1})}};
    s = oracle_step(s, specular);
    CHECK(s.particles[0].pos == std::vector<int>{3, 4});
    CHECK(s.particles[0].sign == std::vector<int>{-1, +1});

    const LatticeSpec bounce = make_lattice(
        {8, 8}, 4, {make_block({{4, 5}, {2, 5}}, Boundary::BounceBack)});
    OracleState b{{particle({3, 3}, {1, 1})}};
    b = oracle_step(b, bounce);
    CHECK(b.particles[0].pos == std::vector<int>{3, 3});
    CHECK(b.particles[0].sign == std::vector<int>{-1, -1});
  }
}

TEST_CASE("oracle_density histograms positions") {
  SECTION("two particles in one cell") {
    OracleState s{{particle({2, 2}, {1, 1}), particle({2, 2}, {-1, 1})}};
    const auto hist = oracle_density(s);
    REQUIRE(hist.size() == 1);
    CHECK(hist.at({2, 2}) == 2);
  }
  SECTION("empty state gives an empty map") {
    CHECK(oracle_density(OracleState{}).empty());
  }
}

TEST_CASE("particle count is conserved and streaming is injective") {
  const LatticeSpec spec = make_lattice({8, 8}, 4, {});
  OracleState s = oracle_left_half_uniform(spec);
  const std::size_t count = s.particles.size();
  for (int i = 0; i < 5; ++i) {
    s = oracle_step(s, spec);
    CHECK(s.particles.size() == count);
  }
  // distinct (position, velocity) states stay distinct: a permutation
  std::set<std::vector<int>> keys;
  for (const auto& p : s.particles) {
    std::vector<int> key = p.pos;
    key.insert(key.end(), p.mag.begin(), p.mag.end());
    key.insert(key.end(), p.sign.begin(), p.sign.end());
    keys.insert(key);
  }
  CHECK(keys.size() == count);
}

TEST_CASE("negate-step-negate undoes an obstacle-free step") {
  const LatticeSpec spec = make_lattice({16, 8}, 4, {});
  std::mt19937_64 rng(31);
  for (int round = 0; round < 10; ++round) {
    OracleParticle p = particle(
        {int(rng() % 16), int(rng() % 8)},
        {int(rng() % 2 + 1) * (rng() % 2 ? 1 : -1),
         int(rng() % 2 + 1) * (rng() % 2 ? 1 : -1)});
    OracleState forward{{p}};
    forward = oracle_step(forward, spec);
    for (auto& q : forward.particles)
      for (auto& s : q.sign) s = -s;
    forward = oracle_step(forward, spec);
    for (auto& q : forward.particles)
      for (auto& s : q.sign) s = -s;
    CHECK(forward.particles[0].pos == p.pos);
    CHECK(forward.particles[0].sign == p.sign);
  }
}

TEST_CASE("unresolvable reflection reports separation violations") {
  // Built by hand to bypass validation: the blocks are adjacent, so a
  // specular deflection off the first lands inside the second.
  LatticeSpec spec;
  spec.dims = {8, 8};
  spec.velocities = {2, 2};
  spec.blocks = {make_block({{3, 4}, {2, 5}}, Boundary::Specular),
                 make_block({{1, 2}, {5, 6}}, Boundary::BounceBack)};
  OracleState s{{particle({2, 4}, {1, 1})}};
  CHECK_THROWS_AS(oracle_step(s, spec), Error);
}

TEST_CASE("inversion vectors match the geometric reflection oracle") {
  // For each corner of a concrete block, aim a particle diagonally at the
  // corner and record its direction bits before impact (at the wall cells)
  // and after reflection (at the outer cells). Those bits are exactly what
  // inversion_vector must report for the inner/outer near-corner points.
  for (std::size_t d : {std::size_t{2}, std::size_t{3}}) {
    const LatticeSpec spec =
        d == 2 ? make_lattice({16, 16}, 2,
                              {make_block({{4, 6}, {4, 6}}, Boundary::Specular)})
               : make_lattice({16, 16, 16}, 2,
                              {make_block({{4, 6}, {4, 6}, {4, 6}},
                                          Boundary::Specular)});
    const Block& blk = spec.blocks[0];

    for (uint32_t corner = 0; corner < (1u << d); ++corner) {
      std::vector<bool> bound(d);
      for (std::size_t k = 0; k < d; ++k) bound[k] = (corner >> k) & 1;

      // start one cell diagonally outside the corner, moving toward it
      OracleParticle p;
      for (std::size_t k = 0; k < d; ++k) {
        p.pos.push_back(bound[k] ? blk.hi(k) + 1 : blk.lo(k) - 1);
        p.mag.push_back(1);
        p.sign.push_back(bound[k] ? -1 : +1);
      }
      const OracleParticle before = p;
      OracleState s{{p}};
      s = oracle_step(s, spec);
      const OracleParticle after = s.particles[0];
      REQUIRE(after.pos == before.pos);  // corner impact reflects straight back

      for (uint32_t outside_bits = 0; outside_bits < (1u << d); ++outside_bits) {
        NearCornerPoint point;
        point.bound = bound;
        for (std::size_t k = 0; k < d; ++k) {
          const bool out = (outside_bits >> k) & 1;
          point.outside.push_back(out);
          const int wall = bound[k] ? blk.hi(k) : blk.lo(k);
          point.grid_coords.push_back(out ? (bound[k] ? wall + 1 : wall - 1)
                                          : wall);
        }
        const std::vector<bool> expect = [&] {
          std::vector<bool> bits(d);
          for (std::size_t k = 0; k < d; ++k) {
            // direction bit (1 = negative) of the impacting particle when it
            // is at this point: entering direction inside, exiting outside
            bits[k] = point.outside[k] ? after.sign[k] < 0 : before.sign[k] < 0;
          }
          return bits;
        }();
        INFO("d=" << d << " corner=" << corner << " outside=" << outside_bits);
        CHECK(inversion_vector(point) == expect);
      }
    }
  }
}
