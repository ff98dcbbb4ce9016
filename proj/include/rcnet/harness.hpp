#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcnet/analysis.hpp"
#include "rcnet/network.hpp"
#include "rcnet/readout.hpp"
#include "rcnet/reservoir.hpp"
#include "rcnet/signals.hpp"

namespace rcnet {

struct HarnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Task { lorenz_xz, map_xy, memory, input_vector_comparison };

struct ExperimentSpec {
  Task task = Task::lorenz_xz;
  NodeKind node_kind = NodeKind::polynomial;
  int m = 100;
  int n_edges = 9800;
  // entries with a decimal point are fractions of the nonzero edge count;
  // bare integers are absolute flip counts
  std::vector<double> flip_values = {0, 0.05, 0.1, 0.15, 0.2, 0.25,
                                     0.3, 0.35, 0.4, 0.45, 0.5};
  std::vector<bool> flip_is_fraction = std::vector<bool>(11, true);
  std::vector<double> sparsity_grid;  // contour runs only
  int realizations = 20;
  std::uint64_t base_seed = 1;
  double normalization_target = 0.5;
  SpectralMode spectral_mode = SpectralMode::max_abs_real;
  double ridge_k = 1e-5;
  double lambda = 1.4;
  double alpha = 0.35;
  double dt = 0.1;
  int transient = 2000;
  int n_record = 10000;
  int input_stride = 1;  // input samples consumed per reservoir step
  int mc_k_max = 100;
  int workers = 1;
  // symmetry sweeps: base networks are resampled until the automorphism
  // group order exceeds 10^order_threshold_log10
  double order_threshold_log10 = 40.0;
  int base_search_budget = 50;

  void validate() const;

  // overwrite the per-(task, node kind) parameters with their presets; call
  // after setting task and node_kind when building a spec programmatically
  void apply_task_presets();

  // parameter presets per task and node kind
  ReservoirConfig reservoir_config() const;

  static ExperimentSpec from_file(const std::string& path);
  void apply_key(const std::string& key, const std::string& value);
  std::string to_json() const;
};

struct ResultRecord {
  std::uint64_t seed = 0;
  std::string case_tag;  // task/case identifier
  double epsilon_f = 0.0;
  double phi = 0.0;
  std::optional<std::string> symmetry_count;  // decimal group order
  std::optional<int> gamma_ulp;
  std::optional<int> gamma_1e6;
  std::optional<double> delta_rc;
  std::optional<double> delta_tx;
  std::optional<double> mc_total;
  std::string status = "ok";  // ok | unstable
};

// columns: seed,case,epsilon_f,phi,symmetry_count,gamma_ulp,gamma_1e6,
//          delta_rc,delta_tx,mc_total,status
std::string records_csv_header();
std::string record_to_csv(const ResultRecord& r);
void write_records_csv(const std::vector<ResultRecord>& records, const std::string& path);

// Train/test signal pair for one task, already cut to transient + n_record.
// Input signals are standardized with the training signal's mean and
// standard deviation (the scaling is part of the trained model); targets are
// raw. Drive the reservoir with standardize_input off.
struct TaskSignals {
  TimeSeries s_train, g_train;
  TimeSeries s_test, g_test;
};
// test_salt varies only the test-side stream, so every realization in a sweep
// is scored on its own test trajectory while sharing the training signal (and
// hence the standardization constants).
TaskSignals make_task_signals(const ExperimentSpec& spec, std::uint64_t test_salt = 0);

// One full pipeline realization: flip -> normalize -> run -> fit -> test ->
// rank. Instability is reported via status, never thrown.
ResultRecord run_realization(const ExperimentSpec& spec, const SignedNetwork& base,
                             const TaskSignals& sig, const InputVector& w, int n_flip,
                             std::uint64_t flip_seed, const std::string& case_tag);

std::vector<ResultRecord> run_flip_sweep(const ExperimentSpec& spec);
std::vector<ResultRecord> run_symmetry_sweep(const ExperimentSpec& spec);
std::vector<ResultRecord> run_input_vector_comparison(const ExperimentSpec& spec);
std::vector<ResultRecord> run_memory_sweep(const ExperimentSpec& spec);

struct ContourCell {
  double phi = 0.0;
  double epsilon_f = 0.0;
  double median_log10_delta_tx = 0.0;
  double mean_gamma = 0.0;
  int n_ok = 0;
};
struct ContourResult {
  std::vector<ContourCell> cells;  // row-major: sparsity outer, flips inner
  std::vector<ResultRecord> records;
  std::size_t n_phi = 0, n_eps = 0;
};
ContourResult run_contour(const ExperimentSpec& spec);
void write_contour_csv(const ContourResult& grid, const std::string& path);

// Search for a dense base network whose automorphism group order exceeds the
// spec threshold; returns the best candidate found within the budget.
SignedNetwork find_symmetric_base(const ExperimentSpec& spec, double* achieved_log10 = nullptr);

// Minimal SVG emission; plotting failure never corrupts CSV outputs.
void emit_scatter_svg(const std::vector<double>& x, const std::vector<double>& y,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& path);
void emit_contour_svg(const ContourResult& grid, const std::string& path);

// Run directory layout: spec.json, records.csv, plots/, log.txt.
void run_to_directory(const ExperimentSpec& spec, const std::vector<ResultRecord>& records,
                      const std::string& out_dir);

}  // namespace rcnet
