#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rcnet/analysis.hpp"
#include "rcnet/harness.hpp"
#include "rcnet/network.hpp"
#include "rcnet/readout.hpp"
#include "rcnet/rng.hpp"
#include "rcnet/symmetry.hpp"

namespace fs = std::filesystem;
using namespace rcnet;

namespace {

struct CommonOpts {
  std::string spec_file;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
  std::string out_dir = "out";
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--spec", o.spec_file, "spec file (key = value lines)");
  cmd->add_option("--seed", o.seed, "override the spec base seed")
      ->each([&](const std::string&) { o.seed_set = true; });
  cmd->add_option("--workers", o.workers, "worker thread count");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

ExperimentSpec load_spec(const CommonOpts& o) {
  ExperimentSpec spec;
  if (o.spec_file.empty())
    spec.apply_task_presets();
  else
    spec = ExperimentSpec::from_file(o.spec_file);
  if (o.seed_set) spec.base_seed = o.seed;
  if (o.workers > 0) spec.workers = o.workers;
  spec.validate();
  return spec;
}

void write_records_json(const std::vector<ResultRecord>& records, const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["seed"] = r.seed;
    j["case"] = r.case_tag;
    j["epsilon_f"] = r.epsilon_f;
    j["phi"] = r.phi;
    j["symmetry_count"] = r.symmetry_count ? nlohmann::json(*r.symmetry_count)
                                           : nlohmann::json(nullptr);
    j["gamma_ulp"] = r.gamma_ulp ? nlohmann::json(*r.gamma_ulp) : nlohmann::json(nullptr);
    j["gamma_1e6"] = r.gamma_1e6 ? nlohmann::json(*r.gamma_1e6) : nlohmann::json(nullptr);
    j["delta_rc"] = r.delta_rc ? nlohmann::json(*r.delta_rc) : nlohmann::json(nullptr);
    j["delta_tx"] = r.delta_tx ? nlohmann::json(*r.delta_tx) : nlohmann::json(nullptr);
    j["mc_total"] = r.mc_total ? nlohmann::json(*r.mc_total) : nlohmann::json(nullptr);
    j["status"] = r.status;
    arr.push_back(std::move(j));
  }
  std::ofstream(path) << arr.dump(2) << '\n';
}

void emit(const ExperimentSpec& spec, const std::vector<ResultRecord>& records,
          const CommonOpts& o) {
  run_to_directory(spec, records, o.out_dir);
  if (o.format == "json")
    write_records_json(records, (fs::path(o.out_dir) / "records.json").string());
  std::cout << "wrote " << records.size() << " records to " << o.out_dir << '\n';
}

// records.csv reader for the plot subcommand; empty fields become NaN
std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw HarnessError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"signed-network reservoir experiments"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* gen = app.add_subcommand("gen-network", "sample a signed base network");
  int gen_m = 100, gen_edges = 9800;
  bool gen_symmetric = false;
  std::string gen_out = "network.txt";
  gen->add_option("--m", gen_m, "node count");
  gen->add_option("--edges", gen_edges, "off-diagonal +1 entries");
  gen->add_flag("--symmetric", gen_symmetric, "search for a high-symmetry instance");
  gen->add_option("--out", gen_out, "output network file");
  gen->add_option("--seed", o.seed)->each([&](const std::string&) { o.seed_set = true; });

  auto* sym = app.add_subcommand("symmetries", "count automorphisms of a network file");
  std::string sym_file;
  sym->add_option("network", sym_file, "network file")->required();

  auto* run = app.add_subcommand("run", "single realization with full artifacts");
  int run_flips = 0;
  run->add_option("--flips", run_flips, "edges flipped to -1");
  add_common(run, o);

  auto* sf = app.add_subcommand("sweep-flips", "flip-fraction sweep");
  add_common(sf, o);
  auto* ss = app.add_subcommand("sweep-symmetry", "symmetry-count sweep");
  add_common(ss, o);
  auto* sc = app.add_subcommand("sweep-contour", "sparsity x flip-fraction grid");
  add_common(sc, o);
  auto* ci = app.add_subcommand("compare-inputs", "input vector comparison");
  add_common(ci, o);
  auto* mem = app.add_subcommand("memory", "memory capacity sweep");
  add_common(mem, o);

  auto* plot = app.add_subcommand("plot", "scatter plot from a records.csv");
  std::string plot_in, plot_out = "plot.svg", plot_x = "epsilon_f", plot_y = "delta_tx";
  bool plot_linear = false;
  plot->add_option("records", plot_in, "records.csv path")->required();
  plot->add_option("--x", plot_x, "x column");
  plot->add_option("--y", plot_y, "y column");
  plot->add_flag("--linear-y", plot_linear, "disable log10 on y");
  plot->add_option("--out", plot_out, "output svg file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const std::uint64_t seed = o.seed_set ? o.seed : 1;
      SignedNetwork net;
      if (gen_symmetric) {
        ExperimentSpec spec;
        spec.m = gen_m;
        spec.n_edges = gen_edges;
        spec.base_seed = seed;
        double lg = 0;
        net = find_symmetric_base(spec, &lg);
        std::cout << "group order ~ 10^" << lg << '\n';
      } else {
        net = make_base_network(gen_m, gen_edges, seed);
      }
      save_network(net, gen_out);
      std::cout << "wrote " << gen_out << " (m=" << net.size()
                << " nonzero=" << net.n_nonzero() << ")\n";
    } else if (sym->parsed()) {
      const SignedNetwork net = load_network(sym_file);
      const AutomorphismReport rep = count_automorphisms(net);
      nlohmann::json j;
      j["group_order"] = rep.order_decimal();
      j["orbits"] = rep.orbit_partition;
      std::cout << j.dump(2) << '\n';
    } else if (run->parsed()) {
      const ExperimentSpec spec = load_spec(o);
      const SignedNetwork base =
          make_base_network(spec.m, spec.n_edges, seed_chain(spec.base_seed, {6}));
      const TaskSignals sig = make_task_signals(spec);
      const InputVector w =
          make_input_vector(spec.m, InputKind::alternating, seed_chain(spec.base_seed, {5}));
      fs::create_directories(o.out_dir);
      const ResultRecord rec = run_realization(spec, base, sig, w, run_flips,
                                               seed_chain(spec.base_seed, {1, 0, 0}), "run");
      if (rec.status != "ok") throw AnalysisError("reservoir unstable");
      // persist the fitted artifacts alongside the record
      const SignedNetwork net =
          flip_edges(base, run_flips, seed_chain(spec.base_seed, {1, 0, 0}));
      save_network(net, (fs::path(o.out_dir) / "network.txt").string());
      const NormalizedAdjacency adj =
          normalize_spectral(net, spec.normalization_target, spec.spectral_mode);
      ReservoirConfig cfg = spec.reservoir_config();
      cfg.standardize_input = false;  // task signals are already train-scaled
      const StateMatrix omega = run_reservoir(adj, w, sig.s_train, cfg);
      save_model_json(fit(omega, sig.g_train, spec.ridge_k),
                      (fs::path(o.out_dir) / "model.json").string());
      const StateMatrix nodes{omega.values.leftCols(omega.values.cols() - 1)};
      save_rank_json(covariance_rank(nodes, RankPolicy::ulp_scaled),
                     (fs::path(o.out_dir) / "rank.json").string());
      emit(spec, {rec}, o);
    } else if (sf->parsed()) {
      const ExperimentSpec spec = load_spec(o);
      emit(spec, run_flip_sweep(spec), o);
    } else if (ss->parsed()) {
      ExperimentSpec spec = load_spec(o);
      if (o.spec_file.empty()) {
        // default grid for symmetry sweeps: absolute flip counts
        spec.flip_values = {0, 1, 2, 5, 10, 20, 50, 100};
        spec.flip_is_fraction.assign(spec.flip_values.size(), false);
      }
      emit(spec, run_symmetry_sweep(spec), o);
    } else if (sc->parsed()) {
      ExperimentSpec spec = load_spec(o);
      if (spec.sparsity_grid.empty())
        spec.sparsity_grid = {0.2, 0.4, 0.6, 0.8, 0.98};
      const ContourResult grid = run_contour(spec);
      run_to_directory(spec, grid.records, o.out_dir);
      write_contour_csv(grid, (fs::path(o.out_dir) / "contour.csv").string());
      emit_contour_svg(grid, (fs::path(o.out_dir) / "plots" / "contour.svg").string());
      if (o.format == "json")
        write_records_json(grid.records, (fs::path(o.out_dir) / "records.json").string());
      std::cout << "wrote " << grid.records.size() << " records to " << o.out_dir << '\n';
    } else if (ci->parsed()) {
      ExperimentSpec spec = load_spec(o);
      spec.task = Task::input_vector_comparison;
      emit(spec, run_input_vector_comparison(spec), o);
    } else if (mem->parsed()) {
      ExperimentSpec spec = load_spec(o);
      spec.task = Task::memory;
      emit(spec, run_memory_sweep(spec), o);
    } else if (plot->parsed()) {
      const auto rows = read_csv(plot_in);
      if (rows.size() < 2) throw HarnessError("no data rows in " + plot_in);
      const auto& header = rows.front();
      auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
          if (header[i] == name) return i;
        throw HarnessError("column '" + name + "' not in " + plot_in);
      };
      const std::size_t cx = col(plot_x), cy = col(plot_y);
      std::vector<double> xs, ys;
      for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() <= std::max(cx, cy)) continue;
        if (rows[r][cx].empty() || rows[r][cy].empty()) continue;
        const double x = std::stod(rows[r][cx]);
        double y = std::stod(rows[r][cy]);
        if (!plot_linear) {
          if (y <= 0) continue;
          y = std::log10(y);
        }
        xs.push_back(x);
        ys.push_back(y);
      }
      if (xs.empty()) throw HarnessError("no plottable rows in " + plot_in);
      emit_scatter_svg(xs, ys, plot_x, plot_linear ? plot_y : "log10 " + plot_y, plot_out);
      std::cout << "wrote " << plot_out << '\n';
    }
  } catch (const HarnessError& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
