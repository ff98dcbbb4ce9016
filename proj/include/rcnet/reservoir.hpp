#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "rcnet/network.hpp"
#include "rcnet/timeseries.hpp"

namespace rcnet {

struct ReservoirError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class NodeKind { polynomial, linear, leaky_tanh };

struct ReservoirConfig {
  NodeKind node_kind = NodeKind::polynomial;
  int m = 100;
  double lambda = 1.0;   // ODE time constant
  double p1 = -3.0;
  double p2 = 1.0;
  double p3 = -1.0;
  double alpha = 0.35;   // leak rate, tanh kind
  double dt = 0.1;       // RK4 step, ODE kinds
  int transient = 2000;
  int n_record = 10000;
  // Inputs are standardized (mean 0, std 1) before driving the reservoir.
  // Turned off where the raw scale of s matters (stability probe with s == 0,
  // linear-superposition checks).
  bool standardize_input = true;

  static ReservoirConfig polynomial(double lambda_) {
    ReservoirConfig c;
    c.node_kind = NodeKind::polynomial;
    c.lambda = lambda_;
    return c;
  }
  static ReservoirConfig linear(double lambda_) {
    ReservoirConfig c = polynomial(lambda_);
    c.node_kind = NodeKind::linear;
    c.p2 = 0.0;
    c.p3 = 0.0;
    return c;
  }
  static ReservoirConfig leaky_tanh(double alpha_) {
    ReservoirConfig c;
    c.node_kind = NodeKind::leaky_tanh;
    c.alpha = alpha_;
    return c;
  }
};

// N x (M+1) matrix of recorded node signals; last column is the constant
// bias, exactly 1.
struct StateMatrix {
  Eigen::MatrixXd values;

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
};

// Integrate the reservoir driven by s and record n_record rows after the
// transient. ODE kinds use RK4 with zero-order hold on the input, one input
// sample per step; the tanh kind is an exact map. Initial state is zero.
// The input is re-standardized internally. Throws ReservoirError on
// non-finite state (instability) or input shorter than transient + n_record.
StateMatrix run_reservoir(const NormalizedAdjacency& adj, const InputVector& w,
                          const TimeSeries& s, const ReservoirConfig& cfg);

// Drives the reservoir with s == 0 from a small random initial state and
// reports whether the state norm decays below 1e-6 within the transient.
bool stability_probe(const NormalizedAdjacency& adj, const InputVector& w,
                     const ReservoirConfig& cfg, std::uint64_t seed = 1);

// CSV export with a header row of column indices.
void save_state_csv(const StateMatrix& omega, const std::string& path);

}  // namespace rcnet
