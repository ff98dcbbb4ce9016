#pragma once

#include <array>
#include <cstdint>

#include "rcnet/timeseries.hpp"

namespace rcnet {

struct LorenzParams {
  double c1 = 10.0;
  double c2 = 28.0;
  double c3 = 8.0 / 3.0;
  double ts = 0.02;
  std::array<double, 3> init = {1.0, 1.0, 1.0};
  std::size_t n_steps = 12000;
  std::size_t pre_transient = 5000;  // integration steps dropped before recording
};

struct MapParams {
  std::size_t n_steps = 12000;
  double y0 = 0.0;
  std::uint64_t rng_seed = 0;
};

struct LorenzTrajectory {
  TimeSeries x, y, z;
};

// Fixed-step RK4 integration of the three-variable chaotic flow
//   dx/dt = c1(y-x),  dy/dt = x(c2-z)-y,  dz/dt = xy-c3 z.
// Emits one sample per integration step after the pre-transient.
// Throws SignalError naming the step index if the state leaves the finite
// range (divergence).
LorenzTrajectory lorenz_generate(const LorenzParams& p);

struct MapPair {
  TimeSeries x, y;
};

// x(k) ~ uniform[0,0.5];  y(k+1) = 0.3 y(k) + 0.05 y(k)^2 + 1.5 x(k)^2 + 0.1
MapPair map_generate(const MapParams& p);

// i.i.d. uniform on [-1,1], deterministic per seed.
TimeSeries uniform_drive(std::size_t n, std::uint64_t seed);

}  // namespace rcnet
