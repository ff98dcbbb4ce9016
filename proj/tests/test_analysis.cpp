#include <doctest.h>

#include <Eigen/Dense>
#include <vector>

#include "rcnet/analysis.hpp"
#include "rcnet/rng.hpp"
#include "rcnet/signals.hpp"

using namespace rcnet;

namespace {

// exact integer-matrix rank via fraction-free (Bareiss) elimination
int bareiss_rank(std::vector<std::vector<long long>> a) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  int rank = 0;
  long long prev = 1;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[rank], a[pivot]);
    for (int r = rank + 1; r < rows; ++r) {
      for (int c = col + 1; c < cols; ++c)
        a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) / prev;
      a[r][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

StateMatrix from_int_rows(const std::vector<std::vector<long long>>& rows) {
  StateMatrix om;
  om.values.resize(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      om.values(static_cast<int>(i), static_cast<int>(j)) = static_cast<double>(rows[i][j]);
  return om;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("covariance rank equals the exact integer rank on small matrices") {
  Rng rng(41);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 8 + static_cast<int>(rng.next_below(8));
    const int m = 3 + static_cast<int>(rng.next_below(4));
    // random small-integer node block, bias column of ones, plus one
    // duplicated column to force rank deficiency in half the cases
    std::vector<std::vector<long long>> rows(n, std::vector<long long>(m + 1, 1));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        rows[i][j] = static_cast<long long>(rng.next_below(7)) - 3;
    if (rep % 2 == 0)
      for (int i = 0; i < n; ++i) rows[i][m - 1] = rows[i][0];
    const int exact = bareiss_rank(rows);
    const StateMatrix om = from_int_rows(rows);
    CHECK(covariance_rank(om, RankPolicy::ulp_scaled).gamma == exact);
    CHECK(covariance_rank(om, RankPolicy::fixed_relative_1e6).gamma == exact);
  }
}

TEST_CASE("duplicate node column collapses the rank") {
  Rng rng(43);
  const int n = 40, m = 6;
  StateMatrix om;
  om.values.resize(n, m + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) om.values(i, j) = rng.uniform(-1.0, 1.0);
    om.values(i, 2) = om.values(i, 1);
    om.values(i, m) = 1.0;
  }
  const RankReport rep = covariance_rank(om, RankPolicy::ulp_scaled);
  CHECK(rep.gamma == m);  // one short of full m+1
  CHECK(rep.gamma < om.cols());
}

TEST_CASE("rank is invariant to column permutation") {
  Rng rng(47);
  StateMatrix om;
  om.values.resize(60, 8);
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 8; ++j) om.values(i, j) = rng.uniform(-1.0, 1.0);
  StateMatrix perm = om;
  perm.values.col(0).swap(perm.values.col(5));
  perm.values.col(2).swap(perm.values.col(7));
  for (auto policy : {RankPolicy::ulp_scaled, RankPolicy::fixed_relative_1e6})
    CHECK(covariance_rank(om, policy).gamma == covariance_rank(perm, policy).gamma);
}

TEST_CASE("reported tolerance follows the policy formulas") {
  Rng rng(53);
  StateMatrix om;
  om.values.resize(100, 9);
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 9; ++j) om.values(i, j) = rng.uniform(-1.0, 1.0);
  const RankReport u = covariance_rank(om, RankPolicy::ulp_scaled);
  const double smax = u.theta_singular_values.front();
  const double ulp = std::nextafter(smax, 1e300) - smax;
  CHECK(u.tolerance_used == doctest::Approx(100.0 * ulp).epsilon(1e-12));
  const RankReport f = covariance_rank(om, RankPolicy::fixed_relative_1e6);
  CHECK(f.tolerance_used == doctest::Approx(1e-6 * f.theta_singular_values.front()));
  // spectra are descending and non-negative
  for (std::size_t i = 1; i < u.theta_singular_values.size(); ++i) {
    CHECK(u.theta_singular_values[i] <= u.theta_singular_values[i - 1]);
    CHECK(u.theta_singular_values[i] >= 0.0);
  }
}

TEST_CASE("fixed-threshold rank is monotone in the threshold") {
  Rng rng(59);
  StateMatrix om;
  om.values.resize(200, 12);
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 12; ++j) om.values(i, j) = rng.uniform(-1.0, 1.0);
  const RankReport rep = covariance_rank(om, RankPolicy::fixed_relative_1e6);
  const double smax = rep.theta_singular_values.front();
  int prev = 13;
  for (double thresh : {1e-8, 1e-6, 1e-4}) {
    int count = 0;
    for (double sv : rep.theta_singular_values)
      if (sv > thresh * smax) ++count;
    CHECK(count <= prev);
    prev = count;
  }
}

TEST_CASE("squared correlation properties") {
  Rng rng(61);
  Eigen::VectorXd x(500), noise(500);
  for (int i = 0; i < 500; ++i) {
    x(i) = rng.uniform(-1.0, 1.0);
    noise(i) = rng.uniform(-1.0, 1.0);
  }
  CHECK(squared_correlation(x, x) == doctest::Approx(1.0).epsilon(1e-12));
  const Eigen::VectorXd affine = 3.0 * x + Eigen::VectorXd::Ones(500);
  CHECK(squared_correlation(x, affine) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(squared_correlation(x, noise) < 0.05);
  // invariance under rescaling of the fitted output
  const double a = squared_correlation(x, affine);
  const Eigen::VectorXd rescaled = 3.0 * affine + Eigen::VectorXd::Constant(500, 1.0);
  CHECK(std::abs(squared_correlation(x, rescaled) - a) < 1e-12);
}

TEST_CASE("delay-line surrogate recalls exactly its depth") {
  const int transient = 100, n = 1000, depth = 10;
  const TimeSeries drive = uniform_drive(transient + n, 71);
  StateMatrix om;
  om.values.resize(n, depth + 1);
  for (int row = 0; row < n; ++row) {
    for (int j = 1; j <= depth; ++j)
      om.values(row, j - 1) = drive[transient + row - j];
    om.values(row, depth) = 1.0;
  }
  const MemoryReport rep =
      memory_capacity_from_states(om, drive.samples, transient, 30, 1e-8);
  REQUIRE(static_cast<int>(rep.mc_k.size()) >= depth);
  for (int k = 1; k <= depth; ++k) CHECK(rep.mc_k[k - 1] > 0.999);
  // past the depth only the chance-level R^2 of ~(depth+1)/n remains
  for (std::size_t k = depth; k < rep.mc_k.size(); ++k) CHECK(rep.mc_k[k] < 0.05);
  CHECK(rep.mc_total > 9.99);
  CHECK(rep.mc_total < 10.6);
}

TEST_CASE("capacity-free states truncate below the floor") {
  const int transient = 60, n = 500;
  const TimeSeries drive = uniform_drive(transient + n, 91);
  StateMatrix om;
  om.values = Eigen::MatrixXd::Ones(n, 1);  // bias only: recall is impossible
  const MemoryReport rep =
      memory_capacity_from_states(om, drive.samples, transient, 50, 1e-5);
  CHECK(rep.truncation_reason == MemoryReport::Truncation::below_floor);
  CHECK(rep.mc_k.size() == 5);
  CHECK(rep.mc_total < 1e-4);
}

TEST_CASE("noise states have near-zero memory") {
  Rng rng(73);
  const int transient = 50, n = 5000;
  const TimeSeries drive = uniform_drive(transient + n, 79);
  StateMatrix om;
  om.values.resize(n, 9);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 8; ++j) om.values(i, j) = rng.uniform(-1.0, 1.0);
    om.values(i, 8) = 1.0;
  }
  const MemoryReport rep =
      memory_capacity_from_states(om, drive.samples, transient, 10, 1e-5);
  for (double mc : rep.mc_k) {
    CHECK(mc >= 0.0);
    CHECK(mc < 0.02);
  }
}

TEST_CASE("memory capacity of a real reservoir is deterministic and bounded") {
  const SignedNetwork net = make_base_network(20, 150, 83);
  const NormalizedAdjacency adj = normalize_spectral(net, 0.5);
  const InputVector w = make_input_vector(20, InputKind::alternating, 1);
  ReservoirConfig cfg = ReservoirConfig::polynomial(6.0);
  cfg.m = 20;
  cfg.transient = 300;
  cfg.n_record = 2000;
  const MemoryReport a = memory_capacity(adj, w, cfg, 40, 17);
  const MemoryReport b = memory_capacity(adj, w, cfg, 40, 17);
  CHECK(a.mc_total == b.mc_total);
  CHECK(a.mc_total >= 0.0);
  CHECK(a.mc_total <= 40.0);
  for (double mc : a.mc_k) {
    CHECK(mc >= 0.0);
    CHECK(mc <= 1.0 + 1e-12);
  }
  CHECK(a.mc_k.front() > 0.5);  // delay 1 must be easy
}

TEST_CASE("excessive delay is a parameter error") {
  StateMatrix om;
  om.values.resize(100, 3);
  om.values.setRandom();
  std::vector<double> drive(150, 0.1);
  CHECK_THROWS_AS(memory_capacity_from_states(om, drive, 50, 60, 1e-5), AnalysisError);
}

}  // TEST_SUITE
