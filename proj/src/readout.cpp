#include "rcnet/readout.hpp"

#include <Eigen/SVD>
#include <fstream>

#include <nlohmann/json.hpp>

namespace rcnet {

namespace {

double residual_error(const StateMatrix& omega, const Eigen::VectorXd& coeffs,
                      const TimeSeries& g) {
  if (omega.rows() != static_cast<int>(g.size()))
    throw ReadoutError("error norm: row count does not match target length");
  if (omega.cols() != coeffs.size())
    throw ReadoutError("error norm: coefficient length mismatch");
  Eigen::Map<const Eigen::VectorXd> gv(g.samples.data(), g.samples.size());
  const Eigen::VectorXd resid = omega.values * coeffs - gv;
  const auto pop_std = [](const Eigen::VectorXd& v) {
    const double m = v.mean();
    return std::sqrt((v.array() - m).square().sum() / v.size());
  };
  const double denom = pop_std(gv);
  if (denom == 0.0) throw ReadoutError("error norm: target has zero variance");
  return pop_std(resid) / denom;
}

}  // namespace

ReadoutModel fit(const StateMatrix& omega, const TimeSeries& g, double ridge_k) {
  if (omega.rows() != static_cast<int>(g.size()))
    throw ReadoutError("fit: row count does not match target length");
  if (ridge_k <= 0.0) throw ReadoutError("fit: ridge_k must be positive");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(omega.values,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::Map<const Eigen::VectorXd> gv(g.samples.data(), g.samples.size());
  const Eigen::VectorXd s = svd.singularValues();
  Eigen::VectorXd s_ridge(s.size());
  for (int i = 0; i < s.size(); ++i)
    s_ridge(i) = s(i) / (s(i) * s(i) + ridge_k * ridge_k);
  ReadoutModel model;
  model.ridge_k = ridge_k;
  model.singular_values = s;
  model.coeffs =
      svd.matrixV() * (s_ridge.asDiagonal() * (svd.matrixU().transpose() * gv));
  if (!model.coeffs.allFinite()) throw ReadoutError("fit: non-finite coefficients");
  return model;
}

double training_error(const StateMatrix& omega, const ReadoutModel& model,
                      const TimeSeries& g) {
  return residual_error(omega, model.coeffs, g);
}

double testing_error(const StateMatrix& omega_test, const ReadoutModel& model,
                     const TimeSeries& g_test) {
  return residual_error(omega_test, model.coeffs, g_test);
}

void save_model_json(const ReadoutModel& model, const std::string& path) {
  nlohmann::json j;
  j["ridge_k"] = model.ridge_k;
  j["coeffs"] = std::vector<double>(model.coeffs.data(),
                                    model.coeffs.data() + model.coeffs.size());
  std::ofstream f(path);
  if (!f) throw ReadoutError("save_model_json: cannot open " + path);
  f << j.dump(2) << '\n';
}

ReadoutModel load_model_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ReadoutError("load_model_json: cannot open " + path);
  nlohmann::json j;
  f >> j;
  ReadoutModel model;
  model.ridge_k = j.at("ridge_k").get<double>();
  const auto coeffs = j.at("coeffs").get<std::vector<double>>();
  model.coeffs = Eigen::Map<const Eigen::VectorXd>(coeffs.data(), coeffs.size());
  return model;
}

}  // namespace rcnet
