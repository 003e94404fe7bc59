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

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qlbw/bench.hpp"
#include "qlbw/circuit.hpp"
#include "qlbw/components.hpp"
#include "qlbw/engine.hpp"
#include "qlbw/errors.hpp"
#include "qlbw/geometry.hpp"
#include "qlbw/io.hpp"
#include "qlbw/lattice.hpp"
#include "qlbw/lowering.hpp"
#include "qlbw/oracle.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << data;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::vector<std::vector<int>> parse_grids(const std::string& text) {
  std::vector<std::vector<int>> out;
  std::stringstream ss(text);
  std::string grid;
  while (std::getline(ss, grid, ',')) {
    std::vector<int> dims;
    std::stringstream gs(grid);
    std::string part;
    while (std::getline(gs, part, 'x')) dims.push_back(std::stoi(part));
    out.push_back(std::move(dims));
  }
  return out;
}

struct SimulateOptions {
  std::string lattice_file;
  std::string out_dir;
  uint64_t steps = 0;
  uint64_t shots = 4096;
  uint64_t seed = 42;
  bool exact = false;
  bool no_snapshots = false;
  bool no_sampling = false;
  std::string initial = "lefthalf";
  std::string pos;
  std::string vel;
};

int run_simulate(const SimulateOptions& opt) {
  const qlbw::LatticeSpec spec = qlbw::parse_lattice(read_file(opt.lattice_file));
  const qlbw::RegisterMap rmap = qlbw::register_layout(spec);
  const qlbw::ReflectionData data = qlbw::reflection_data(spec);

  uint64_t seed = opt.seed;
  if (const char* env = std::getenv("QLBW_SEED")) seed = std::stoull(env);

  qlbw::SimulationConfig config;
  if (opt.initial == "lefthalf") {
    config.initial = qlbw::initial_left_half_uniform(spec, rmap);
  } else if (opt.initial == "point") {
    config.initial = qlbw::initial_point_source(spec, rmap,
                                                parse_int_list(opt.pos),
                                                parse_int_list(opt.vel));
  } else {
    throw std::runtime_error("unknown initial condition: " + opt.initial);
  }
  config.step = qlbw::cqlbm_step(spec, rmap, data);
  config.postprocess = qlbw::Circuit(rmap, "postprocess");
  config.measurement = qlbw::grid_measurement(rmap);
  config.snapshots = !opt.no_snapshots;
  config.sampling = !opt.no_sampling;
  config.count_mode = opt.exact ? qlbw::CountMode::Exact : qlbw::CountMode::Sampled;
  config.shots = opt.shots;
  config.seed = seed;

  const qlbw::TimeSeriesResult result = qlbw::run(config, opt.steps);

  fs::create_directories(opt.out_dir);
  const fs::path out(opt.out_dir);
  std::vector<std::string> outputs;

  std::vector<qlbw::Counts> per_step;
  per_step.reserve(result.steps.size());
  for (const auto& rec : result.steps) per_step.push_back(rec.counts);
  write_file(out / "counts.csv",
             qlbw::export_counts_csv(per_step, spec.num_dims()));
  outputs.push_back("counts.csv");

  write_file(out / "geometry.stl", qlbw::export_stl(spec.blocks));
  outputs.push_back("geometry.stl");

  for (std::size_t k = 0; k < result.steps.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "step_%03zu.vtk", k + 1);
    write_file(out / name,
               qlbw::export_vtk(result.steps[k].counts.table, spec.dims));
    outputs.push_back(name);
  }

  nlohmann::json manifest;
  manifest["lattice"] = nlohmann::json::parse(qlbw::serialize_lattice(spec));
  manifest["lattice_file"] = opt.lattice_file;
  manifest["steps"] = opt.steps;
  manifest["shots"] = opt.shots;
  manifest["seed"] = seed;
  manifest["exact"] = opt.exact;
  manifest["snapshots"] = config.snapshots;
  manifest["sampling"] = config.sampling;
  manifest["initial"] = opt.initial;
  if (opt.initial == "point") {
    manifest["position"] = parse_int_list(opt.pos);
    manifest["velocity"] = parse_int_list(opt.vel);
  }
  manifest["qubits"] = rmap.total_qubits;
  manifest["counters"]["step_applications"] = result.total_step_applications;
  manifest["counters"]["statevector_copies"] = result.statevector_copies;
  nlohmann::json timings = nlohmann::json::array();
  for (const auto& rec : result.steps) timings.push_back(rec.wall_seconds);
  manifest["timings"] = timings;
  manifest["outputs"] = outputs;
  write_file(out / "manifest.json", manifest.dump(2) + "\n");

  std::cout << "wrote " << outputs.size() + 1 << " files to " << opt.out_dir
            << " (" << result.total_step_applications
            << " step applications)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlbw: quantum lattice-Boltzmann workbench"};
  app.require_subcommand(1);

  std::string lattice_file, out_path, dump_path;
  int level = 1;

  auto* validate = app.add_subcommand("validate", "check a lattice file");
  validate->add_option("--lattice", lattice_file, "lattice JSON file")
      ->required();

  auto* build = app.add_subcommand("build", "assemble the time-step circuit");
  build->add_option("--lattice", lattice_file)->required();
  build->add_option("--dump", dump_path, "write the gate-level debug dump");

  auto* lower_cmd = app.add_subcommand("lower", "compile to the {U, CX} basis");
  lower_cmd->add_option("--lattice", lattice_file)->required();
  lower_cmd->add_option("--level", level, "optimization level (0 or 1)");
  lower_cmd->add_option("--dump", dump_path, "write the lowered debug dump");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "run and export a flow field");
  simulate->add_option("--lattice", sim.lattice_file)->required();
  simulate->add_option("--steps", sim.steps)->required();
  simulate->add_option("--shots", sim.shots);
  simulate->add_option("--seed", sim.seed);
  simulate->add_flag("--exact", sim.exact, "exact probabilities, no sampling noise");
  simulate->add_flag("--no-snapshots", sim.no_snapshots,
                     "re-execute from scratch for every step");
  simulate->add_flag("--no-sampling", sim.no_sampling,
                     "copy the state before reading counts");
  simulate->add_option("--initial", sim.initial, "lefthalf or point");
  simulate->add_option("--pos", sim.pos, "point source position x,y[,z]");
  simulate->add_option("--vel", sim.vel, "point source velocity vx,vy[,vz]");
  simulate->add_option("--out", sim.out_dir)->required();

  std::string suite = "assembly", grids_text = "16x16";
  int velocities = 4, max_obstacles = 6, bench_steps = 20;
  auto* bench = app.add_subcommand("bench", "scaling sweeps to CSV");
  bench->add_option("--suite", suite, "assembly, lowering, or simulation")
      ->required();
  bench->add_option("--grids", grids_text, "comma list, e.g. 16x16,32x32");
  bench->add_option("--velocities", velocities);
  bench->add_option("--max-obstacles", max_obstacles);
  bench->add_option("--steps", bench_steps, "time steps (simulation suite)");
  bench->add_option("--out", out_path)->required();

  std::string counts_file;
  auto* export_cmd = app.add_subcommand("export", "convert results to VTK/STL");
  export_cmd->add_option("--lattice", lattice_file)->required();
  export_cmd->add_option("--counts", counts_file, "counts.csv to convert");
  export_cmd->add_option("--out", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) {
      qlbw::parse_lattice(read_file(lattice_file));
      std::cout << "ok\n";
      return 0;
    }

    if (app.got_subcommand(build)) {
      const qlbw::LatticeSpec spec = qlbw::parse_lattice(read_file(lattice_file));
      const qlbw::RegisterMap rmap = qlbw::register_layout(spec);
      const qlbw::Circuit step =
          qlbw::cqlbm_step(spec, rmap, qlbw::reflection_data(spec));
      const qlbw::CircuitMetrics m = qlbw::metrics(step);
      std::cout << "qubits: " << rmap.total_qubits << "\n"
                << "gates: " << m.gate_count << "\n"
                << "depth: " << m.depth << "\n";
      for (const auto& [kind, count] : m.per_kind)
        std::cout << "  " << kind << ": " << count << "\n";
      if (!dump_path.empty()) write_file(dump_path, qlbw::dump(step));
      return 0;
    }

    if (app.got_subcommand(lower_cmd)) {
      const qlbw::LatticeSpec spec = qlbw::parse_lattice(read_file(lattice_file));
      const qlbw::RegisterMap rmap = qlbw::register_layout(spec);
      const qlbw::Circuit step =
          qlbw::cqlbm_step(spec, rmap, qlbw::reflection_data(spec));
      const auto t0 = std::chrono::steady_clock::now();
      const qlbw::Circuit low = qlbw::optimize(qlbw::lower(step), level);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      const qlbw::CircuitMetrics m = qlbw::metrics(low);
      std::cout << "lowered gates: " << m.gate_count << "\n"
                << "lowered depth: " << m.depth << "\n"
                << "compile seconds: " << secs << "\n";
      if (!dump_path.empty()) write_file(dump_path, qlbw::dump(low));
      return 0;
    }

    if (app.got_subcommand(simulate)) return run_simulate(sim);

    if (app.got_subcommand(bench)) {
      const auto grids = parse_grids(grids_text);
      std::vector<qlbw::BenchRow> rows;
      if (suite == "assembly") {
        rows = qlbw::bench_assembly(grids, velocities, max_obstacles);
      } else if (suite == "lowering") {
        rows = qlbw::bench_lowering(grids, velocities, max_obstacles);
      } else if (suite == "simulation") {
        rows = qlbw::bench_simulation(grids, velocities, max_obstacles,
                                      bench_steps);
      } else {
        throw std::runtime_error("unknown suite: " + suite);
      }
      std::string csv = qlbw::bench_csv_header(suite);
      for (const auto& r : rows) csv += qlbw::bench_csv_row(r);
      write_file(out_path, csv);
      std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
      return 0;
    }

    if (app.got_subcommand(export_cmd)) {
      const qlbw::LatticeSpec spec = qlbw::parse_lattice(read_file(lattice_file));
      fs::create_directories(out_path);
      const fs::path out(out_path);
      write_file(out / "geometry.stl", qlbw::export_stl(spec.blocks));
      int written = 1;
      if (!counts_file.empty()) {
        // counts.csv rows: step,x,y[,z],count
        std::ifstream in(counts_file);
        if (!in) throw std::runtime_error("cannot open " + counts_file);
        std::string line;
        std::getline(in, line);  // header
        std::map<int, std::map<std::vector<uint32_t>, double>> steps;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          std::stringstream ss(line);
          std::string field;
          std::vector<std::string> fields;
          while (std::getline(ss, field, ',')) fields.push_back(field);
          if (fields.size() != spec.num_dims() + 2)
            throw std::runtime_error("malformed counts row: " + line);
          const int step = std::stoi(fields[0]);
          std::vector<uint32_t> coords;
          for (std::size_t k = 0; k < spec.num_dims(); ++k)
            coords.push_back(uint32_t(std::stoul(fields[1 + k])));
          steps[step][coords] = std::stod(fields.back());
        }
        for (const auto& [step, table] : steps) {
          char name[32];
          std::snprintf(name, sizeof name, "step_%03d.vtk", step);
          write_file(out / name, qlbw::export_vtk(table, spec.dims));
          ++written;
        }
      }
      std::cout << "wrote " << written << " files to " << out_path << "\n";
      return 0;
    }
  } catch (const qlbw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
