#include "rcnet/signals.hpp"

#include <cmath>
#include <fstream>

#include "rcnet/rng.hpp"

namespace rcnet {

double mean(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double stddev_pop(const std::vector<double>& v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

TimeSeries standardize(const TimeSeries& s) {
  if (s.samples.size() < 2) throw SignalError("standardize: need at least 2 samples");
  const double m = mean(s.samples);
  const double sd = stddev_pop(s.samples);
  if (sd == 0.0) throw SignalError("standardize: zero-variance series");
  TimeSeries out;
  out.step = s.step;
  out.samples.reserve(s.samples.size());
  for (double x : s.samples) out.samples.push_back((x - m) / sd);
  return out;
}

void write_csv(const TimeSeries& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw SignalError("write_csv: cannot open " + path);
  f << "index,value\n";
  f.precision(17);
  for (std::size_t i = 0; i < s.samples.size(); ++i)
    f << i << ',' << s.samples[i] << '\n';
}

namespace {

using Vec3 = std::array<double, 3>;

Vec3 lorenz_rhs(const Vec3& v, const LorenzParams& p) {
  return {p.c1 * v[1] - p.c1 * v[0],
          v[0] * (p.c2 - v[2]) - v[1],
          v[0] * v[1] - p.c3 * v[2]};
}

Vec3 rk4_step(const Vec3& v, double h, const LorenzParams& p) {
  const Vec3 k1 = lorenz_rhs(v, p);
  Vec3 t;
  for (int i = 0; i < 3; ++i) t[i] = v[i] + 0.5 * h * k1[i];
  const Vec3 k2 = lorenz_rhs(t, p);
  for (int i = 0; i < 3; ++i) t[i] = v[i] + 0.5 * h * k2[i];
  const Vec3 k3 = lorenz_rhs(t, p);
  for (int i = 0; i < 3; ++i) t[i] = v[i] + h * k3[i];
  const Vec3 k4 = lorenz_rhs(t, p);
  Vec3 out;
  for (int i = 0; i < 3; ++i)
    out[i] = v[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

}  // namespace

LorenzTrajectory lorenz_generate(const LorenzParams& p) {
  if (p.ts <= 0.0) throw SignalError("lorenz_generate: ts must be positive");
  if (p.n_steps == 0) throw SignalError("lorenz_generate: n_steps must be positive");
  LorenzTrajectory out;
  out.x.step = out.y.step = out.z.step = p.ts;
  out.x.samples.reserve(p.n_steps);
  out.y.samples.reserve(p.n_steps);
  out.z.samples.reserve(p.n_steps);
  Vec3 v = p.init;
  const std::size_t total = p.pre_transient + p.n_steps;
  for (std::size_t k = 0; k < total; ++k) {
    if (!(std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2])))
      throw SignalError("lorenz_generate: divergence at step " + std::to_string(k));
    if (k >= p.pre_transient) {
      out.x.samples.push_back(v[0]);
      out.y.samples.push_back(v[1]);
      out.z.samples.push_back(v[2]);
    }
    v = rk4_step(v, p.ts, p);
  }
  return out;
}

MapPair map_generate(const MapParams& p) {
  if (p.n_steps == 0) throw SignalError("map_generate: n_steps must be positive");
  MapPair out;
  out.x.samples.reserve(p.n_steps);
  out.y.samples.reserve(p.n_steps);
  Rng rng(p.rng_seed);
  double y = p.y0;
  for (std::size_t k = 0; k < p.n_steps; ++k) {
    const double x = rng.uniform(0.0, 0.5);
    out.x.samples.push_back(x);
    out.y.samples.push_back(y);
    y = 0.3 * y + 0.05 * y * y + 1.5 * x * x + 0.1;
  }
  return out;
}

TimeSeries uniform_drive(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw SignalError("uniform_drive: n must be positive");
  TimeSeries out;
  out.samples.reserve(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) out.samples.push_back(rng.uniform(-1.0, 1.0));
  return out;
}

}  // namespace rcnet
