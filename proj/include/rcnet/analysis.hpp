#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rcnet/network.hpp"
#include "rcnet/reservoir.hpp"

namespace rcnet {

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RankPolicy { ulp_scaled, fixed_relative_1e6 };

struct RankReport {
  int gamma = 0;
  double tolerance_used = 0.0;
  RankPolicy policy = RankPolicy::ulp_scaled;
  std::vector<double> theta_singular_values;  // of Theta = Omega^T Omega, descending
  std::vector<double> omega_singular_values;  // of Omega itself, descending
};

// Rank of Theta = Omega^T Omega.
//  ulp_scaled:          sigma > D_max * ulp(sigma_max) with D_max the largest
//                       dimension of Omega and sigma_max the largest singular
//                       value of Theta.
//  fixed_relative_1e6:  sigma > 1e-6 * sigma_max(Theta).
// Both spectra are recorded so either policy can be audited offline.
RankReport covariance_rank(const StateMatrix& omega, RankPolicy policy);

struct MemoryReport {
  std::vector<double> mc_k;  // per-delay capacities, k = 1..
  double mc_total = 0.0;
  int k_max = 0;
  enum class Truncation { k_max_reached, below_floor } truncation_reason =
      Truncation::k_max_reached;
};

// Squared Pearson correlation between x and y.
double squared_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Drive the reservoir with uniform [-1,1] noise, fit each delayed input
// s(n-k) through the ridge readout, and sum the squared correlations.
// Stops early once mc_k < 1e-4 for 5 consecutive delays.
MemoryReport memory_capacity(const NormalizedAdjacency& adj, const InputVector& w,
                             const ReservoirConfig& cfg, int k_max, std::uint64_t seed,
                             double ridge_k = 1e-5);

// Per-delay capacities for a precomputed state matrix and drive signal;
// drive[transient + n] is the sample fed at recorded row n.
MemoryReport memory_capacity_from_states(const StateMatrix& omega,
                                         const std::vector<double>& drive,
                                         int transient, int k_max, double ridge_k);

void save_rank_json(const RankReport& r, const std::string& path);
void save_memory_json(const MemoryReport& r, const std::string& path);

}  // namespace rcnet
