#include "rcnet/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "rcnet/signals.hpp"

namespace rcnet {

namespace {

double ulp(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()) - x; }

}  // namespace

RankReport covariance_rank(const StateMatrix& omega, RankPolicy policy) {
  const Eigen::MatrixXd theta = omega.values.transpose() * omega.values;
  // Theta is symmetric PSD, so its singular values are its eigenvalues.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(theta, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw AnalysisError("covariance_rank: eigensolver failed");
  RankReport rep;
  rep.policy = policy;
  const Eigen::VectorXd ev = es.eigenvalues();
  for (int i = ev.size() - 1; i >= 0; --i) {
    const double sv = std::max(ev(i), 0.0);
    rep.theta_singular_values.push_back(sv);
    rep.omega_singular_values.push_back(std::sqrt(sv));
  }
  const double sigma_max_theta = rep.theta_singular_values.front();
  const double d_max = static_cast<double>(std::max(omega.rows(), omega.cols()));
  rep.tolerance_used = policy == RankPolicy::ulp_scaled
                           ? d_max * ulp(sigma_max_theta)
                           : 1e-6 * sigma_max_theta;
  for (double sv : rep.theta_singular_values)
    if (sv > rep.tolerance_used) ++rep.gamma;
  return rep;
}

double squared_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() == 0)
    throw AnalysisError("squared_correlation: size mismatch");
  const Eigen::ArrayXd xc = x.array() - x.mean();
  const Eigen::ArrayXd yc = y.array() - y.mean();
  const double sxy = (xc * yc).sum();
  const double sxx = xc.square().sum();
  const double syy = yc.square().sum();
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return (sxy * sxy) / (sxx * syy);
}

MemoryReport memory_capacity_from_states(const StateMatrix& omega,
                                         const std::vector<double>& drive,
                                         int transient, int k_max, double ridge_k) {
  const int n = omega.rows();
  if (k_max < 1) throw AnalysisError("memory_capacity: k_max must be >= 1");
  if (k_max > transient)
    throw AnalysisError("memory_capacity: k_max exceeds usable sample count");
  if (static_cast<int>(drive.size()) < transient + n)
    throw AnalysisError("memory_capacity: drive shorter than recorded run");

  // one SVD, reused for every delay: h_k = U diag(s*s') U^T g_k
  Eigen::BDCSVD<Eigen::MatrixXd> svd(omega.values, Eigen::ComputeThinU);
  const Eigen::VectorXd s = svd.singularValues();
  Eigen::VectorXd gain(s.size());
  for (int i = 0; i < s.size(); ++i)
    gain(i) = s(i) * s(i) / (s(i) * s(i) + ridge_k * ridge_k);

  MemoryReport rep;
  rep.k_max = k_max;
  int below = 0;
  for (int k = 1; k <= k_max; ++k) {
    Eigen::VectorXd target(n);
    for (int row = 0; row < n; ++row) target(row) = drive[transient + row - k];
    const Eigen::VectorXd fitted =
        svd.matrixU() * (gain.asDiagonal() * (svd.matrixU().transpose() * target));
    const double mc = squared_correlation(fitted, target);
    rep.mc_k.push_back(mc);
    rep.mc_total += mc;
    below = mc < 1e-4 ? below + 1 : 0;
    if (below >= 5) {
      rep.truncation_reason = MemoryReport::Truncation::below_floor;
      return rep;
    }
  }
  rep.truncation_reason = MemoryReport::Truncation::k_max_reached;
  return rep;
}

MemoryReport memory_capacity(const NormalizedAdjacency& adj, const InputVector& w,
                             const ReservoirConfig& cfg, int k_max, std::uint64_t seed,
                             double ridge_k) {
  const std::size_t len = static_cast<std::size_t>(cfg.transient) + cfg.n_record;
  const TimeSeries drive = standardize(uniform_drive(len, seed));
  ReservoirConfig run_cfg = cfg;
  run_cfg.standardize_input = false;  // already standardized, keep targets aligned
  const StateMatrix omega = run_reservoir(adj, w, drive, run_cfg);
  return memory_capacity_from_states(omega, drive.samples, cfg.transient, k_max, ridge_k);
}

void save_rank_json(const RankReport& r, const std::string& path) {
  nlohmann::json j;
  j["gamma"] = r.gamma;
  j["tolerance_used"] = r.tolerance_used;
  j["policy"] = r.policy == RankPolicy::ulp_scaled ? "ulp_scaled" : "fixed_relative_1e-6";
  j["theta_singular_values"] = r.theta_singular_values;
  j["omega_singular_values"] = r.omega_singular_values;
  std::ofstream f(path);
  if (!f) throw AnalysisError("save_rank_json: cannot open " + path);
  f << j.dump(2) << '\n';
}

void save_memory_json(const MemoryReport& r, const std::string& path) {
  nlohmann::json j;
  j["mc_k"] = r.mc_k;
  j["mc_total"] = r.mc_total;
  j["k_max"] = r.k_max;
  j["truncation_reason"] = r.truncation_reason == MemoryReport::Truncation::below_floor
                               ? "below_floor"
                               : "k_max_reached";
  std::ofstream f(path);
  if (!f) throw AnalysisError("save_memory_json: cannot open " + path);
  f << j.dump(2) << '\n';
}

}  // namespace rcnet
