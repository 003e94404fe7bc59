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
#include "qlbw/components.hpp"
#include "qlbw/engine.hpp"
#include "qlbw/oracle.hpp"

using namespace qlbw;
using namespace qlbw::testing;

TEST_CASE("substep schedule activates each magnitude evenly") {
  SECTION("Q = 1") {
    const SubstepSchedule s = substep_schedule(1);
    REQUIRE(s.substeps.size() == 1);
    CHECK(s.substeps[0] == std::vector<int>{1});
  }
  SECTION("Q = 2") {
    const SubstepSchedule s = substep_schedule(2);
    REQUIRE(s.substeps.size() == 2);
    CHECK(s.substeps[0] == std::vector<int>{2});
    CHECK(s.substeps[1] == std::vector<int>{1, 2});
  }
  SECTION("Q = 4, magnitude 3 streams at substeps 2, 3, 4") {
    const SubstepSchedule s = substep_schedule(4);
    std::vector<int> active;
    for (std::size_t t = 0; t < 4; ++t)
      for (int q : s.substeps[t])
        if (q == 3) active.push_back(int(t) + 1);
    CHECK(active == std::vector<int>{2, 3, 4});
  }
  SECTION("displacement invariant: magnitude q streams exactly q times") {
    for (int Q : {1, 2, 4, 8}) {
      const SubstepSchedule s = substep_schedule(Q);
      std::vector<int> totals(Q + 1, 0);
      for (const auto& sub : s.substeps)
        for (int q : sub) ++totals[q];
      for (int q = 1; q <= Q; ++q) CHECK(totals[q] == q);
      for (const auto& sub : s.substeps) {
        bool has_max = false;
        for (int q : sub) has_max = has_max || q == Q;
        CHECK(has_max);  // the largest magnitude streams in every substep
      }
    }
  }
}

namespace {

// Exhaustive comparator check: prepare each grid value of dimension `dim` as a
// basis state and verify the output qubit flips exactly on the predicate.
template <typename Predicate>
void check_comparator(const LatticeSpec& spec, const Circuit& c,
                      std::size_t dim, Predicate pred) {
  const RegisterMap rmap = register_layout(spec);
  const auto& g = rmap.reg(dim == 0 ? "g_x" : "g_y");
  const uint32_t out = anc_comparator_qubit(rmap, 0);
  for (uint64_t v = 0; v < (uint64_t{1} << g.width); ++v) {
    Statevector psi = Statevector::basis(rmap.total_qubits, v << g.offset);
    apply_in_place(c, psi);
    const uint64_t expect =
        (v << g.offset) | (pred(v) ? (uint64_t{1} << out) : 0);
    INFO("grid value " << v);
    CHECK(std::norm(psi.amps[expect]) == Catch::Approx(1.0).margin(1e-12));
  }
}

}  // namespace

TEST_CASE("comparators flip the output exactly on their predicate") {
  const LatticeSpec spec = make_lattice({8, 8}, 4, {});
  const RegisterMap rmap = register_layout(spec);
  const uint32_t out = anc_comparator_qubit(rmap, 0);

  SECTION("Eq 5 over all 8 basis states") {
    check_comparator(spec, comparator(rmap, 0, 5, ComparatorMode::Eq, out), 0,
                     [](uint64_t v) { return v == 5; });
  }
  SECTION("Geq / Leq against every constant") {
    for (int c = 0; c < 8; ++c) {
      check_comparator(spec, comparator(rmap, 0, c, ComparatorMode::Geq, out),
                       0, [&](uint64_t v) { return int(v) >= c; });
      check_comparator(spec, comparator(rmap, 0, c, ComparatorMode::Leq, out),
                       0, [&](uint64_t v) { return int(v) <= c; });
    }
  }
  SECTION("InRange over every interval") {
    for (int lo = 0; lo < 8; ++lo)
      for (int hi = lo; hi < 8; ++hi)
        check_comparator(spec, comparator_in_range(rmap, 0, lo, hi, out), 0,
                         [&](uint64_t v) { return int(v) >= lo && int(v) <= hi; });
  }
  SECTION("full range and Geq 0 always flip") {
    check_comparator(spec, comparator_in_range(rmap, 0, 0, 7, out), 0,
                     [](uint64_t) { return true; });
    check_comparator(spec, comparator(rmap, 0, 0, ComparatorMode::Geq, out), 0,
                     [](uint64_t) { return true; });
  }
  SECTION("constants outside the register are rejected") {
    CHECK_THROWS_AS(comparator(rmap, 0, 8, ComparatorMode::Eq, out), Error);
    CHECK_THROWS_AS(comparator_in_range(rmap, 0, 3, 9, out), Error);
  }
}

TEST_CASE("controlled incrementer is the expected grid permutation") {
  const LatticeSpec spec = make_lattice({8, 8}, 4, {});
  const RegisterMap rmap = register_layout(spec);
  const auto& gx = rmap.reg("g_x");
  const uint32_t av = anc_vel_qubit(rmap, 0);
  const uint32_t vd = vel_dir_qubit(rmap, 0);
  const Circuit inc = controlled_incrementer(spec, rmap, 0, Reflection::None);

  auto run_case = [&](uint64_t grid, bool active, bool negative) {
    uint64_t in = grid << gx.offset;
    if (active) in |= uint64_t{1} << av;
    if (negative) in |= uint64_t{1} << vd;
    Statevector psi = Statevector::basis(rmap.total_qubits, in);
    apply_in_place(inc, psi);
    uint64_t out_grid = grid;
    if (active) out_grid = negative ? (grid + 7) % 8 : (grid + 1) % 8;
    uint64_t expect = (in & ~uint64_t(7 << gx.offset)) | (out_grid << gx.offset);
    return std::norm(psi.amps[expect]);
  };

  SECTION("active control increments, permutation over all basis states") {
    for (uint64_t v = 0; v < 8; ++v) {
      CHECK(run_case(v, true, false) == Catch::Approx(1.0).margin(1e-10));
      CHECK(run_case(v, true, true) == Catch::Approx(1.0).margin(1e-10));
    }
  }
  SECTION("|5> goes to |6>") {
    CHECK(run_case(5, true, false) == Catch::Approx(1.0).margin(1e-10));
  }
  SECTION("wraparound realizes the periodic boundary") {
    CHECK(run_case(7, true, false) == Catch::Approx(1.0).margin(1e-10));
  }
  SECTION("inactive control leaves the grid register alone") {
    for (uint64_t v = 0; v < 8; ++v)
      CHECK(run_case(v, false, false) == Catch::Approx(1.0).margin(1e-10));
  }
  SECTION("invalid dimension is rejected") {
    CHECK_THROWS_AS(controlled_incrementer(spec, rmap, 5, Reflection::None),
                    Error);
  }
  SECTION("bounce-back variant keys on the obstacle ancilla") {
    const Circuit bb =
        controlled_incrementer(spec, rmap, 0, Reflection::BounceBack);
    const uint32_t ao = anc_obstacle_qubit(rmap, 0);
    uint64_t in = (uint64_t{3} << gx.offset) | (uint64_t{1} << ao);
    Statevector psi = Statevector::basis(rmap.total_qubits, in);
    apply_in_place(bb, psi);
    const uint64_t expect = (uint64_t{4} << gx.offset) | (uint64_t{1} << ao);
    CHECK(std::norm(psi.amps[expect]) == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("streaming ancilla preparation marks and unmarks populations") {
  const LatticeSpec spec = make_lattice({8, 8}, 4, {});
  const RegisterMap rmap = register_layout(spec);
  std::mt19937_64 rng(17);

  SECTION("mark followed by reset returns the velocity ancilla to |0>") {
    const Circuit mark = streaming_ancilla_preparation(spec, rmap, {2}, 0);
    Statevector psi = Statevector::zero(rmap.total_qubits);
    // random state over grid and velocity registers, ancillae |0>
    Circuit prep(rmap);
    for (uint32_t q = 0; q < rmap.reg("av").offset; ++q) prep.add(Gate::h(q));
    apply_in_place(prep, psi);
    Statevector marked = apply(mark, psi);
    apply_in_place(mark, marked);  // self-inverse reset
    double dev = 0;
    for (uint64_t i = 0; i < psi.size(); ++i)
      dev = std::max(dev, std::abs(psi.amps[i] - marked.amps[i]));
    CHECK(dev < 1e-10);
  }
  SECTION("vacuum state is unchanged") {
    const Circuit mark = streaming_ancilla_preparation(spec, rmap, {}, 0);
    Statevector psi = Statevector::zero(rmap.total_qubits);
    apply_in_place(mark, psi);
    CHECK(std::norm(psi.amps[0]) == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("marking is self-inverse on random states") {
    const Circuit mark = streaming_ancilla_preparation(spec, rmap, {1, 2}, 1);
    Statevector psi = random_state(rmap.total_qubits, rng);
    Statevector twice = apply(mark, apply(mark, psi));
    double dev = 0;
    for (uint64_t i = 0; i < psi.size(); ++i)
      dev = std::max(dev, std::abs(psi.amps[i] - twice.amps[i]));
    CHECK(dev < 1e-10);
  }
}

TEST_CASE("streaming moves point sources like the oracle") {
  const LatticeSpec spec = make_lattice({8, 8}, 4, {});

  SECTION("unit velocities advance one cell per step") {
    const auto report = run_point_source_equivalence(spec, {2, 3}, {1, 1}, 1);
    CHECK(report.max_marginal_deviation < 1e-10);
    CHECK(report.min_state_fidelity > 1.0 - 1e-10);
  }
  SECTION("magnitude-2 populations advance two cells per step") {
    const auto report = run_point_source_equivalence(spec, {2, 3}, {2, 2}, 3);
    CHECK(report.max_marginal_deviation < 1e-10);
    CHECK(report.min_state_fidelity > 1.0 - 1e-10);
  }
  SECTION("empty magnitude set acts as the identity on reachable states") {
    const RegisterMap rmap = register_layout(spec);
    const Circuit op = streaming_operator(spec, rmap, {});
    Statevector psi = Statevector::zero(rmap.total_qubits);
    Circuit prep(rmap);
    for (uint32_t q = 0; q < rmap.reg("av").offset; ++q) prep.add(Gate::h(q));
    apply_in_place(prep, psi);
    const Statevector after = apply(op, psi);
    double dev = 0;
    for (uint64_t i = 0; i < psi.size(); ++i)
      dev = std::max(dev, std::abs(psi.amps[i] - after.amps[i]));
    CHECK(dev < 1e-10);
  }
}

TEST_CASE("specular reflection flips only the normal components") {
  const LatticeSpec spec = make_lattice(
      {8, 8}, 4, {make_block({{4, 5}, {2, 5}}, Boundary::Specular)});

  SECTION("face impact: x reversed, y preserved, position back in fluid") {
    // one cell left of the wall, moving (+1, +1)
    const auto report = run_point_source_equivalence(spec, {3, 3}, {1, 1}, 2);
    CHECK(report.max_marginal_deviation < 1e-10);
    CHECK(report.min_state_fidelity > 1.0 - 1e-10);
  }
  SECTION("corner impact reverses both components") {
    const LatticeSpec corner_spec = make_lattice(
        {8, 8}, 4, {make_block({{4, 5}, {4, 5}}, Boundary::Specular)});
    const auto report =
        run_point_source_equivalence(corner_spec, {3, 3}, {1, 1}, 3);
    CHECK(report.max_marginal_deviation < 1e-10);
    CHECK(report.min_state_fidelity > 1.0 - 1e-10);
  }
  SECTION("no specular blocks produce an identity circuit") {
    const RegisterMap rmap = register_layout(spec);
    const Circuit op = specular_reflection_operator(
        spec, rmap, {}, reflection_data(spec));
    CHECK(op.gates.empty());
  }
}

TEST_CASE("bounce-back reflection inverts every component") {
  const LatticeSpec spec = make_lattice(
      {8, 8}, 4, {make_block({{4, 5}, {2, 5}}, Boundary::BounceBack)});

  SECTION("entering with (+1, +1) exits with (-1, -1)") {
    const auto report = run_point_source_equivalence(spec, {3, 3}, {1, 1}, 2);
    CHECK(report.max_marginal_deviation < 1e-10);
    CHECK(report.min_state_fidelity > 1.0 - 1e-10);
  }
  SECTION("grazing particles adjacent to the obstacle are unaffected") {
    // slides along the wall layer at x = 3 without entering
    const auto report = run_point_source_equivalence(spec, {3, 1}, {-1, 1}, 2);
    CHECK(report.max_marginal_deviation < 1e-10);
    CHECK(report.min_state_fidelity > 1.0 - 1e-10);
  }
  SECTION("mixed magnitudes retrace only the streamed dimensions") {
    const auto report = run_point_source_equivalence(spec, {2, 3}, {2, 1}, 4);
    CHECK(report.max_marginal_deviation < 1e-10);
    CHECK(report.min_state_fidelity > 1.0 - 1e-10);
  }
  SECTION("no bounce-back blocks produce an identity circuit") {
    const RegisterMap rmap = register_layout(spec);
    const Circuit op = bounceback_reflection_operator(
        spec, rmap, {}, reflection_data(spec));
    CHECK(op.gates.empty());
  }
}

TEST_CASE("cqlbm_step trajectories match the oracle") {
  SECTION("five steps across an empty 8x8 grid") {
    const LatticeSpec spec = make_lattice({8, 8}, 4, {});
    const auto report = run_point_source_equivalence(spec, {2, 3}, {1, -2}, 5);
    CHECK(report.max_marginal_deviation < 1e-10);
    CHECK(report.min_state_fidelity > 1.0 - 1e-10);
    CHECK(report.max_norm_error < 1e-9);
  }
  SECTION("mixed geometry over ten steps") {
    const LatticeSpec spec = make_lattice(
        {8, 8}, 4,
        {make_block({{2, 3}, {2, 3}}, Boundary::Specular),
         make_block({{6, 6}, {2, 3}}, Boundary::BounceBack)});
    for (const auto& vel :
         {std::vector<int>{1, 1}, {2, 1}, {-1, 2}, {-2, -2}}) {
      const auto report = run_point_source_equivalence(spec, {0, 5}, vel, 10);
      INFO("velocity " << vel[0] << "," << vel[1]);
      CHECK(report.max_marginal_deviation < 1e-10);
      CHECK(report.min_state_fidelity > 1.0 - 1e-10);
    }
  }
  SECTION("smallest legal lattice builds and simulates") {
    const LatticeSpec spec = make_lattice({2, 2}, 2, {});
    const RegisterMap rmap = register_layout(spec);
    const Circuit step = cqlbm_step(spec, rmap, reflection_data(spec));
    CHECK(rmap.reg("v_x").width == 0);
    const auto report = run_point_source_equivalence(spec, {0, 1}, {1, -1}, 3);
    CHECK(report.max_marginal_deviation < 1e-10);
    CHECK(report.min_state_fidelity > 1.0 - 1e-10);
  }
}

TEST_CASE("left-half uniform initial conditions") {
  const LatticeSpec spec = make_lattice({16, 16}, 4, {});
  const RegisterMap rmap = register_layout(spec);
  Statevector psi = Statevector::zero(rmap.total_qubits);
  apply_in_place(initial_left_half_uniform(spec, rmap), psi);

  CHECK(psi.support_size() == 512);  // 2^(3+4) cells x 2^2 magnitudes
  const auto& gx = rmap.reg("g_x");
  const double amp = 1.0 / std::sqrt(512.0);
  for (uint64_t i = 0; i < psi.size(); ++i) {
    if (std::norm(psi.amps[i]) < 1e-20) continue;
    const uint64_t x = (i >> gx.offset) & 0xF;
    CHECK(x < 8);  // left half only
    CHECK(std::abs(std::abs(psi.amps[i]) - amp) < 1e-12);
  }
}

TEST_CASE("left-half ensemble matches the oracle at step zero") {
  const LatticeSpec spec = make_lattice({8, 8}, 4, {});
  const RegisterMap rmap = register_layout(spec);
  Statevector psi = Statevector::zero(rmap.total_qubits);
  apply_in_place(initial_left_half_uniform(spec, rmap), psi);
  const auto quantum = grid_marginal(psi, rmap, 2);
  const auto classical = normalized_density(oracle_left_half_uniform(spec));
  CHECK(distribution_distance(quantum, classical) < 1e-12);
}

TEST_CASE("point sources encode a single basis state") {
  const LatticeSpec spec = make_lattice(
      {8, 8}, 4, {make_block({{4, 5}, {4, 5}}, Boundary::BounceBack)});
  const RegisterMap rmap = register_layout(spec);

  SECTION("single occupied amplitude") {
    Statevector psi = Statevector::zero(rmap.total_qubits);
    apply_in_place(initial_point_source(spec, rmap, {0, 0}, {1, 1}), psi);
    CHECK(psi.support_size() == 1);
  }
  SECTION("positions inside obstacles are rejected") {
    CHECK_THROWS_AS(initial_point_source(spec, rmap, {4, 5}, {1, 1}), Error);
  }
  SECTION("positions outside the grid are rejected") {
    CHECK_THROWS_AS(initial_point_source(spec, rmap, {8, 0}, {1, 1}), Error);
  }
  SECTION("magnitudes beyond Q are rejected") {
    CHECK_THROWS_AS(initial_point_source(spec, rmap, {0, 0}, {3, 1}), Error);
  }
}

TEST_CASE("grid measurement covers exactly the grid registers") {
  SECTION("17-qubit 2D layout measures 8 qubits") {
    const LatticeSpec spec = make_lattice(
        {16, 16}, 4, {make_block({{9, 12}, {9, 12}}, Boundary::BounceBack)});
    const RegisterMap rmap = register_layout(spec);
    REQUIRE(rmap.total_qubits == 17);
    CHECK(grid_measurement(rmap).gates.size() == 8);
  }
  SECTION("28-qubit 3D layout measures 12 qubits") {
    const LatticeSpec spec = make_lattice(
        {16, 16, 16}, 4,
        {make_block({{9, 12}, {9, 12}, {9, 12}}, Boundary::BounceBack)});
    const RegisterMap rmap = register_layout(spec);
    REQUIRE(rmap.total_qubits == 28);
    CHECK(grid_measurement(rmap).gates.size() == 12);
  }
  SECTION("composing past a measurement fails") {
    const LatticeSpec spec = make_lattice({8, 8}, 4, {});
    const RegisterMap rmap = register_layout(spec);
    const Circuit m = grid_measurement(rmap);
    CHECK_THROWS_AS(compose(m, m), Error);
  }
}

TEST_CASE("components preserve statevector norm on random states") {
  const LatticeSpec spec = make_lattice(
      {8, 8}, 4, {make_block({{4, 5}, {2, 5}}, Boundary::Specular)});
  const RegisterMap rmap = register_layout(spec);
  const ReflectionData data = reflection_data(spec);
  std::mt19937_64 rng(23);
  Statevector psi = random_state(rmap.total_qubits, rng);

  for (const Circuit& c :
       {streaming_operator(spec, rmap, {1, 2}),
        specular_reflection_operator(spec, rmap, spec.blocks, data),
        cqlbm_step(spec, rmap, data)}) {
    Statevector out = apply(c, psi);
    CHECK(std::abs(out.norm_sq() - 1.0) < 1e-10);
  }
}

TEST_CASE("ancilla registers return to zero after a full step") {
  // obstacles in the right half so the uniform initial mass starts in fluid
  const LatticeSpec spec = make_lattice(
      {8, 8}, 4,
      {make_block({{4, 5}, {1, 2}}, Boundary::Specular),
       make_block({{5, 6}, {5, 6}}, Boundary::BounceBack)});
  const RegisterMap rmap = register_layout(spec);
  const Circuit step = cqlbm_step(spec, rmap, reflection_data(spec));

  Statevector psi = Statevector::zero(rmap.total_qubits);
  apply_in_place(initial_left_half_uniform(spec, rmap), psi);
  const uint64_t ancilla_mask = ((uint64_t{1} << rmap.total_qubits) - 1) &
                                ~((uint64_t{1} << rmap.reg("av").offset) - 1);
  for (int s = 0; s < 3; ++s) {
    apply_in_place(step, psi);
    double leaked = 0.0;
    for (uint64_t i = 0; i < psi.size(); ++i)
      if (i & ancilla_mask) leaked += std::norm(psi.amps[i]);
    INFO("step " << s + 1);
    CHECK(leaked < 1e-10);
  }
}

TEST_CASE("obstacle-free streaming permutes occupied basis states") {
  const LatticeSpec spec = make_lattice({8, 8}, 4, {});
  const RegisterMap rmap = register_layout(spec);
  const Circuit step = cqlbm_step(spec, rmap, reflection_data(spec));
  Statevector psi = Statevector::zero(rmap.total_qubits);
  apply_in_place(initial_left_half_uniform(spec, rmap), psi);
  const uint64_t occupied = psi.support_size();
  for (int s = 0; s < 4; ++s) {
    apply_in_place(step, psi);
    CHECK(psi.support_size() == occupied);
  }
}

TEST_CASE("component taxonomy tags every constructor exactly once") {
  const auto& taxonomy = component_taxonomy();
  CHECK(taxonomy.at("controlled_incrementer") == ComponentKind::Primitive);
  CHECK(taxonomy.at("comparator") == ComponentKind::Primitive);
  CHECK(taxonomy.at("streaming_operator") == ComponentKind::Operator);
  CHECK(taxonomy.at("specular_reflection_operator") == ComponentKind::Operator);
  CHECK(taxonomy.at("bounceback_reflection_operator") ==
        ComponentKind::Operator);
  CHECK(taxonomy.at("streaming_ancilla_preparation") ==
        ComponentKind::Operator);
  CHECK(taxonomy.at("cqlbm_step") == ComponentKind::Algorithm);
  CHECK(taxonomy.size() == 9);
}
