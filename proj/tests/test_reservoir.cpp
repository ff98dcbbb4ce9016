#include <doctest.h>

#include <cmath>

#include "rcnet/kernels.hpp"
#include "rcnet/network.hpp"
#include "rcnet/reservoir.hpp"
#include "rcnet/signals.hpp"

using namespace rcnet;

namespace {

NormalizedAdjacency decoupled(int m) {
  NormalizedAdjacency adj;
  adj.size = m;
  adj.entries.assign(static_cast<std::size_t>(m) * m, 0.0);
  adj.scale = 0.0;
  adj.target = 0.0;
  return adj;
}

InputVector unit_w(int m, double v = 1.0) {
  InputVector w;
  w.size = m;
  w.kind = InputKind::all_ones;
  w.entries.assign(m, v);
  return w;
}

TimeSeries constant(std::size_t n, double v) {
  TimeSeries s;
  s.samples.assign(n, v);
  return s;
}

// closed form of dr/dt = lambda(-3 r + c) from r(0)=0
double linear_closed_form(double lambda, double c, double t) {
  return c / 3.0 * (1.0 - std::exp(-3.0 * lambda * t));
}

double final_state_linear(double dt, int steps, double lambda, double c) {
  ReservoirConfig cfg = ReservoirConfig::linear(lambda);
  cfg.m = 1;
  cfg.dt = dt;
  cfg.transient = steps - 1;
  cfg.n_record = 1;
  cfg.standardize_input = false;
  const StateMatrix out =
      run_reservoir(decoupled(1), unit_w(1, c), constant(steps, 1.0), cfg);
  return out.values(0, 0);
}

}  // namespace

TEST_SUITE("reservoir") {

TEST_CASE("linear node matches its closed form") {
  const double lambda = 1.4, c = 0.8;
  const double T = 200 * 0.01;
  const double got = final_state_linear(0.01, 200, lambda, c);
  CHECK(got == doctest::Approx(linear_closed_form(lambda, c, T)).epsilon(1e-9));
}

TEST_CASE("RK4 converges at fourth order") {
  const double lambda = 1.4, c = 0.8, T = 1.0;
  const double exact = linear_closed_form(lambda, c, T);
  const double e1 = std::abs(final_state_linear(0.1, 10, lambda, c) - exact);
  const double e2 = std::abs(final_state_linear(0.05, 20, lambda, c) - exact);
  CHECK(e2 > 0.0);
  CHECK(e1 / e2 >= 12.0);  // 2^4 = 16 up to higher-order terms
}

TEST_CASE("tanh node relaxes to tanh(1) without coupling or drive") {
  ReservoirConfig cfg = ReservoirConfig::leaky_tanh(0.35);
  cfg.m = 2;
  cfg.transient = 400;
  cfg.n_record = 1;
  cfg.standardize_input = false;
  const StateMatrix out =
      run_reservoir(decoupled(2), unit_w(2, 0.0), constant(401, 0.0), cfg);
  CHECK(out.values(0, 0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-9));
  CHECK(out.values(0, 1) == doctest::Approx(std::tanh(1.0)).epsilon(1e-9));
}

TEST_CASE("bias column is exactly one and shapes are as configured") {
  const SignedNetwork net = make_base_network(12, 80, 3);
  const NormalizedAdjacency adj = normalize_spectral(net, 0.5);
  ReservoirConfig cfg = ReservoirConfig::polynomial(1.4);
  cfg.m = 12;
  cfg.transient = 100;
  cfg.n_record = 250;
  const TimeSeries s = uniform_drive(350, 7);
  const StateMatrix out = run_reservoir(adj, make_input_vector(12, InputKind::alternating, 1), s, cfg);
  CHECK(out.rows() == 250);
  CHECK(out.cols() == 13);
  for (int n = 0; n < 250; ++n) CHECK(out.values(n, 12) == 1.0);
}

TEST_CASE("linear reservoir output is superposable in the input") {
  const SignedNetwork net = make_base_network(10, 60, 9);
  const NormalizedAdjacency adj = normalize_spectral(net, 0.4);
  const InputVector w = make_input_vector(10, InputKind::alternating, 1);
  ReservoirConfig cfg = ReservoirConfig::linear(1.0);
  cfg.m = 10;
  cfg.transient = 50;
  cfg.n_record = 100;
  cfg.standardize_input = false;
  TimeSeries s = uniform_drive(150, 2);
  TimeSeries s2 = s;
  for (double& v : s2.samples) v *= 2.0;
  const StateMatrix a = run_reservoir(adj, w, s, cfg);
  const StateMatrix b = run_reservoir(adj, w, s2, cfg);
  for (int n = 0; n < 100; ++n)
    for (int i = 0; i < 10; ++i)
      CHECK(b.values(n, i) == doctest::Approx(2.0 * a.values(n, i)).epsilon(1e-9));
}

TEST_CASE("identical runs are bit-identical") {
  const SignedNetwork net = make_base_network(15, 100, 4);
  const NormalizedAdjacency adj = normalize_spectral(net, 0.5);
  const InputVector w = make_input_vector(15, InputKind::alternating, 1);
  ReservoirConfig cfg = ReservoirConfig::polynomial(1.4);
  cfg.m = 15;
  cfg.transient = 100;
  cfg.n_record = 200;
  const TimeSeries s = uniform_drive(300, 5);
  const StateMatrix a = run_reservoir(adj, w, s, cfg);
  const StateMatrix b = run_reservoir(adj, w, s, cfg);
  CHECK(a.values == b.values);
}

TEST_CASE("scalar and avx2 reservoir trajectories agree") {
  if (!kernels::cpu_has_avx2()) return;
  const SignedNetwork net = make_base_network(20, 150, 6);
  const NormalizedAdjacency adj = normalize_spectral(net, 0.5);
  const InputVector w = make_input_vector(20, InputKind::alternating, 1);
  ReservoirConfig cfg = ReservoirConfig::polynomial(1.4);
  cfg.m = 20;
  cfg.transient = 200;
  cfg.n_record = 300;
  const TimeSeries s = uniform_drive(500, 8);
  const kernels::Isa saved = kernels::active_isa();
  kernels::set_isa(kernels::Isa::scalar);
  const StateMatrix a = run_reservoir(adj, w, s, cfg);
  kernels::set_isa(kernels::Isa::avx2);
  const StateMatrix b = run_reservoir(adj, w, s, cfg);
  kernels::set_isa(saved);
  for (int n = 0; n < 300; ++n)
    for (int i = 0; i < 20; ++i)
      CHECK(a.values(n, i) == doctest::Approx(b.values(n, i)).epsilon(1e-7));
}

TEST_CASE("instability raises a reservoir error") {
  ReservoirConfig cfg = ReservoirConfig::polynomial(5.0);
  cfg.m = 1;
  cfg.p1 = 3.0;   // positive linear feedback
  cfg.p3 = 1.0;   // and a destabilizing cubic
  cfg.transient = 10;
  cfg.n_record = 500;
  cfg.standardize_input = false;
  CHECK_THROWS_AS(
      run_reservoir(decoupled(1), unit_w(1, 1.0), constant(510, 1.0), cfg),
      ReservoirError);
}

TEST_CASE("input shorter than transient + n_record is rejected") {
  ReservoirConfig cfg = ReservoirConfig::polynomial(1.4);
  cfg.m = 1;
  cfg.transient = 100;
  cfg.n_record = 100;
  cfg.standardize_input = false;
  CHECK_THROWS_AS(run_reservoir(decoupled(1), unit_w(1), constant(150, 1.0), cfg),
                  ReservoirError);
}

TEST_CASE("stability probe separates stable from unstable dynamics") {
  const SignedNetwork net = make_base_network(10, 60, 9);
  const NormalizedAdjacency stable = normalize_spectral(net, 0.5);
  ReservoirConfig cfg = ReservoirConfig::polynomial(1.4);
  cfg.m = 10;
  cfg.transient = 2000;
  CHECK(stability_probe(stable, make_input_vector(10, InputKind::alternating, 1), cfg));
  ReservoirConfig bad = cfg;
  bad.m = 1;
  bad.p1 = 3.0;
  bad.p3 = 1.0;
  bad.lambda = 5.0;
  CHECK_FALSE(stability_probe(decoupled(1), unit_w(1), bad));
}

}  // TEST_SUITE
