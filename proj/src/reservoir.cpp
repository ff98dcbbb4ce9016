#include "rcnet/reservoir.hpp"

#include <cmath>
#include <fstream>
#include <vector>

#include "rcnet/kernels.hpp"
#include "rcnet/rng.hpp"

namespace rcnet {

namespace {

struct OdeParams {
  double lambda, p1, p2, p3;
};

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// one RK4 step of dr/dt = lambda(p1 r + p2 r^2 + p3 r^3 + A r + w s),
// input held constant over the step (zero-order hold)
void ode_step(const double* a, const double* w, double sv, const OdeParams& p,
              double dt, std::vector<double>& r, std::vector<double>& tmp,
              std::vector<double>& c, std::vector<double>& k1, std::vector<double>& k2,
              std::vector<double>& k3, std::vector<double>& k4) {
  const std::size_t m = r.size();
  auto rhs = [&](const std::vector<double>& state, std::vector<double>& out) {
    kernels::matvec(a, state.data(), c.data(), m, m);
    kernels::axpy(c.data(), w, sv, c.data(), m);  // c += s * w
    kernels::poly_rhs(state.data(), c.data(), p.lambda, p.p1, p.p2, p.p3, out.data(), m);
  };
  rhs(r, k1);
  kernels::axpy(r.data(), k1.data(), 0.5 * dt, tmp.data(), m);
  rhs(tmp, k2);
  kernels::axpy(r.data(), k2.data(), 0.5 * dt, tmp.data(), m);
  rhs(tmp, k3);
  kernels::axpy(r.data(), k3.data(), dt, tmp.data(), m);
  rhs(tmp, k4);
  kernels::rk4_combine(r.data(), k1.data(), k2.data(), k3.data(), k4.data(), dt, m);
}

void tanh_step(const double* a, const double* w, double sv, double alpha,
               std::vector<double>& r, std::vector<double>& c) {
  const std::size_t m = r.size();
  kernels::matvec(a, r.data(), c.data(), m, m);
  for (std::size_t i = 0; i < m; ++i)
    r[i] = alpha * r[i] + (1.0 - alpha) * std::tanh(c[i] + w[i] * sv + 1.0);
}

StateMatrix run_raw(const NormalizedAdjacency& adj, const InputVector& w,
                    const std::vector<double>& s, const ReservoirConfig& cfg,
                    std::vector<double> r0) {
  const int m = adj.size;
  if (w.size != m) throw ReservoirError("run_reservoir: input vector size mismatch");
  const std::size_t needed = static_cast<std::size_t>(cfg.transient) + cfg.n_record;
  if (s.size() < needed)
    throw ReservoirError("run_reservoir: input length " + std::to_string(s.size()) +
                         " below transient + n_record = " + std::to_string(needed));

  OdeParams p{cfg.lambda, cfg.p1, cfg.p2, cfg.p3};
  if (cfg.node_kind == NodeKind::linear) p.p2 = p.p3 = 0.0;

  std::vector<double> r = std::move(r0);
  r.resize(m, 0.0);
  std::vector<double> tmp(m), c(m), k1(m), k2(m), k3(m), k4(m);

  StateMatrix out;
  out.values.resize(cfg.n_record, m + 1);
  for (std::size_t n = 0; n < needed; ++n) {
    if (cfg.node_kind == NodeKind::leaky_tanh)
      tanh_step(adj.entries.data(), w.entries.data(), s[n], cfg.alpha, r, c);
    else
      ode_step(adj.entries.data(), w.entries.data(), s[n], p, cfg.dt, r, tmp, c, k1,
               k2, k3, k4);
    if (!all_finite(r))
      throw ReservoirError("run_reservoir: non-finite state at step " + std::to_string(n));
    if (n >= static_cast<std::size_t>(cfg.transient)) {
      const std::size_t row = n - cfg.transient;
      for (int i = 0; i < m; ++i) out.values(row, i) = r[i];
      out.values(row, m) = 1.0;
    }
  }
  return out;
}

}  // namespace

StateMatrix run_reservoir(const NormalizedAdjacency& adj, const InputVector& w,
                          const TimeSeries& s, const ReservoirConfig& cfg) {
  const std::vector<double>* samples = &s.samples;
  TimeSeries std_s;
  if (cfg.standardize_input) {
    std_s = standardize(s);
    samples = &std_s.samples;
  }
  return run_raw(adj, w, *samples, cfg, {});
}

bool stability_probe(const NormalizedAdjacency& adj, const InputVector& w,
                     const ReservoirConfig& cfg, std::uint64_t seed) {
  ReservoirConfig probe = cfg;
  probe.transient = 0;
  probe.n_record = cfg.transient > 0 ? cfg.transient : 2000;
  Rng rng(seed);
  std::vector<double> r0(adj.size);
  for (double& x : r0) x = rng.uniform(-0.01, 0.01);
  std::vector<double> zeros(probe.n_record, 0.0);
  StateMatrix traj;
  try {
    traj = run_raw(adj, w, zeros, probe, std::move(r0));
  } catch (const ReservoirError&) {
    return false;
  }
  const double final_norm =
      traj.values.row(traj.rows() - 1).head(adj.size).norm();
  return final_norm < 1e-6;
}

void save_state_csv(const StateMatrix& omega, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ReservoirError("save_state_csv: cannot open " + path);
  for (int j = 0; j < omega.cols(); ++j) {
    if (j) f << ',';
    f << j;
  }
  f << '\n';
  f.precision(17);
  for (int i = 0; i < omega.rows(); ++i) {
    for (int j = 0; j < omega.cols(); ++j) {
      if (j) f << ',';
      f << omega.values(i, j);
    }
    f << '\n';
  }
}

}  // namespace rcnet
