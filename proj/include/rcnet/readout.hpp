#pragma once

#include <Eigen/Dense>
#include <string>

#include "rcnet/reservoir.hpp"
#include "rcnet/timeseries.hpp"

namespace rcnet {

struct ReadoutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ReadoutModel {
  Eigen::VectorXd coeffs;           // length M+1
  double ridge_k = 1e-5;
  Eigen::VectorXd singular_values;  // of Omega, diagnostic
};

// Ridge regression through the thin SVD Omega = U S V^T:
//   C = V S' U^T g,  S'_ii = S_ii / (S_ii^2 + k^2).
// Algebraically identical to the Tikhonov normal equations
// (Omega^T Omega + k^2 I)^-1 Omega^T g.
ReadoutModel fit(const StateMatrix& omega, const TimeSeries& g, double ridge_k = 1e-5);

// std(Omega C - g) / std(g), population convention.
double training_error(const StateMatrix& omega, const ReadoutModel& model,
                      const TimeSeries& g);

// Same residual norm on a fresh trajectory with frozen coefficients.
double testing_error(const StateMatrix& omega_test, const ReadoutModel& model,
                     const TimeSeries& g_test);

// JSON round trip: {"ridge_k": ..., "coeffs": [...]}, shortest-round-trip
// double formatting.
void save_model_json(const ReadoutModel& model, const std::string& path);
ReadoutModel load_model_json(const std::string& path);

}  // namespace rcnet
