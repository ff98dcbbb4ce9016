#include "rcnet/network.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rcnet/rng.hpp"

namespace rcnet {

SignedNetwork::SignedNetwork(int m, std::vector<std::int8_t> entries)
    : m_(m), a_(std::move(entries)) {
  if (m_ <= 0 || a_.size() != static_cast<std::size_t>(m_) * m_)
    throw NetworkError("SignedNetwork: bad dimensions");
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < m_; ++j) {
      const std::int8_t v = a_[static_cast<std::size_t>(i) * m_ + j];
      if (i == j && v != 0) throw NetworkError("SignedNetwork: nonzero diagonal");
      if (v < -1 || v > 1) throw NetworkError("SignedNetwork: entry outside {-1,0,+1}");
      if (i != j) {
        if (v > 0) ++n_pos_;
        if (v < 0) ++n_neg_;
      }
    }
  }
}

bool is_connected(const SignedNetwork& net) {
  const int m = net.size();
  std::vector<char> seen(m, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < m; ++v) {
      if (!seen[v] && (net.entry(u, v) != 0 || net.entry(v, u) != 0)) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == m;
}

namespace {

// Fisher-Yates selection of n_pick indices out of [0,n_total)
std::vector<int> sample_without_replacement(int n_total, int n_pick, Rng& rng) {
  std::vector<int> idx(n_total);
  for (int i = 0; i < n_total; ++i) idx[i] = i;
  for (int i = 0; i < n_pick; ++i) {
    const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_total - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n_pick);
  return idx;
}

SignedNetwork build_from_edge_slots(int m, const std::vector<int>& slots) {
  std::vector<std::int8_t> a(static_cast<std::size_t>(m) * m, 0);
  for (int s : slots) {
    const int i = s / (m - 1);
    int j = s % (m - 1);
    if (j >= i) ++j;  // slot index skips the diagonal
    a[static_cast<std::size_t>(i) * m + j] = 1;
  }
  return SignedNetwork(m, std::move(a));
}

}  // namespace

SignedNetwork make_base_network(int m, int n_edges, std::uint64_t seed, int retries) {
  if (m <= 0) throw NetworkError("make_base_network: m must be positive");
  const int slots = m * (m - 1);
  if (n_edges <= 0 || n_edges > slots)
    throw NetworkError("make_base_network: n_edges out of range");
  Rng rng(seed);
  for (int attempt = 0; attempt < retries; ++attempt) {
    SignedNetwork net = build_from_edge_slots(m, sample_without_replacement(slots, n_edges, rng));
    if (is_connected(net)) return net;
  }
  throw NetworkError("make_base_network: no connected network within retry budget");
}

SignedNetwork make_symmetric_base_network(int m, int n_edges, std::uint64_t seed,
                                          int retries) {
  if (m <= 0) throw NetworkError("make_symmetric_base_network: m must be positive");
  const int slots = m * (m - 1);
  if (n_edges <= 0 || n_edges > slots)
    throw NetworkError("make_symmetric_base_network: n_edges out of range");
  const int n_zero = slots - n_edges;
  // smallest vertex subset whose internal slots can hold all zeros
  int v = 2;
  while (v * (v - 1) < n_zero) ++v;
  if (v > m) throw NetworkError("make_symmetric_base_network: too many zeros");
  Rng rng(seed);
  for (int attempt = 0; attempt < retries; ++attempt) {
    std::vector<int> verts = sample_without_replacement(m, v, rng);
    std::vector<int> inner = sample_without_replacement(v * (v - 1), n_zero, rng);
    std::vector<std::int8_t> a(static_cast<std::size_t>(m) * m, 0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) a[static_cast<std::size_t>(i) * m + j] = 1;
    for (int s : inner) {
      const int pi = s / (v - 1);
      int pj = s % (v - 1);
      if (pj >= pi) ++pj;
      a[static_cast<std::size_t>(verts[pi]) * m + verts[pj]] = 0;
    }
    SignedNetwork net(m, std::move(a));
    if (is_connected(net)) return net;
  }
  throw NetworkError("make_symmetric_base_network: no connected network within retry budget");
}

SignedNetwork flip_edges(const SignedNetwork& net, int n_flip, std::uint64_t seed) {
  if (n_flip < 0) throw NetworkError("flip_edges: negative flip count");
  const int m = net.size();
  std::vector<int> positives;
  positives.reserve(net.n_positive());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (net.entry(i, j) > 0) positives.push_back(i * m + j);
  if (n_flip > static_cast<int>(positives.size()))
    throw NetworkError("flip_edges: n_flip exceeds available +1 edges");
  Rng rng(seed);
  std::vector<int> pick = sample_without_replacement(static_cast<int>(positives.size()), n_flip, rng);
  std::vector<std::int8_t> a = net.entries();
  for (int p : pick) a[positives[p]] = -1;
  return SignedNetwork(m, std::move(a));
}

NormalizedAdjacency normalize_spectral(int m, const std::vector<double>& entries,
                                       double target, SpectralMode mode) {
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = entries[static_cast<std::size_t>(i) * m + j];
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NetworkError("normalize_spectral: eigensolver failed");
  double extent = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto ev = es.eigenvalues()(i);
    const double v = mode == SpectralMode::max_abs_real ? std::abs(ev.real()) : std::abs(ev);
    extent = std::max(extent, v);
  }
  if (extent < 1e-12)
    throw NetworkError("normalize_spectral: spectrum too small, normalization undefined");
  NormalizedAdjacency out;
  out.size = m;
  out.target = target;
  out.scale = target / extent;
  out.entries.resize(static_cast<std::size_t>(m) * m);
  for (std::size_t k = 0; k < out.entries.size(); ++k) out.entries[k] = out.scale * entries[k];
  return out;
}

NormalizedAdjacency normalize_spectral(const SignedNetwork& net, double target,
                                       SpectralMode mode) {
  const int m = net.size();
  std::vector<double> entries(static_cast<std::size_t>(m) * m);
  for (std::size_t k = 0; k < entries.size(); ++k)
    entries[k] = static_cast<double>(net.entries()[k]);
  return normalize_spectral(m, entries, target, mode);
}

InputVector make_input_vector(int m, InputKind kind, std::uint64_t seed) {
  if (m <= 0) throw NetworkError("make_input_vector: m must be positive");
  InputVector w;
  w.size = m;
  w.kind = kind;
  w.entries.resize(m);
  Rng rng(seed);
  for (int i = 0; i < m; ++i) {
    switch (kind) {
      case InputKind::alternating:
        // 1-based convention: odd node indices +1, even -1
        w.entries[i] = (i % 2 == 0) ? 1.0 : -1.0;
        break;
      case InputKind::all_ones:
        w.entries[i] = 1.0;
        break;
      case InputKind::uniform_random:
        w.entries[i] = rng.uniform(-1.0, 1.0);
        break;
    }
  }
  return w;
}

std::vector<double> make_random_network(int m, double density, std::uint64_t seed) {
  if (m <= 0) throw NetworkError("make_random_network: m must be positive");
  if (!(density > 0.0 && density <= 1.0))
    throw NetworkError("make_random_network: density must be in (0,1]");
  std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
  Rng rng(seed);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && rng.next_double() < density)
        a[static_cast<std::size_t>(i) * m + j] = rng.uniform(-1.0, 1.0);
  return a;
}

double sparsity(const SignedNetwork& net) {
  return static_cast<double>(net.n_nonzero()) / (static_cast<double>(net.size()) * (net.size() - 1));
}

void save_network(const SignedNetwork& net, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw NetworkError("save_network: cannot open " + path);
  f << net.size() << ' ' << net.n_positive() << ' ' << net.n_negative() << '\n';
  for (int i = 0; i < net.size(); ++i) {
    for (int j = 0; j < net.size(); ++j) {
      if (j) f << ' ';
      f << static_cast<int>(net.entry(i, j));
    }
    f << '\n';
  }
}

SignedNetwork load_network(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw NetworkError("load_network: cannot open " + path);
  int m = 0, npos = 0, nneg = 0;
  if (!(f >> m >> npos >> nneg)) throw NetworkError("load_network: bad header");
  std::vector<std::int8_t> a(static_cast<std::size_t>(m) * m);
  for (std::size_t k = 0; k < a.size(); ++k) {
    int v;
    if (!(f >> v)) throw NetworkError("load_network: truncated matrix");
    a[k] = static_cast<std::int8_t>(v);
  }
  SignedNetwork net(m, std::move(a));
  if (net.n_positive() != npos || net.n_negative() != nneg)
    throw NetworkError("load_network: header counts do not match matrix");
  return net;
}

void save_normalized_csv(const NormalizedAdjacency& adj, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw NetworkError("save_normalized_csv: cannot open " + path);
  f.precision(17);
  for (int i = 0; i < adj.size; ++i) {
    for (int j = 0; j < adj.size; ++j) {
      if (j) f << ',';
      f << adj.entry(i, j);
    }
    f << '\n';
  }
}

}  // namespace rcnet
