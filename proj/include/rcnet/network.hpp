#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcnet {

struct NetworkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Directed signed adjacency matrix with entries in {-1,0,+1} and a zero
// diagonal. Row-major: entry(i,j) is the weight of edge j -> i as used by
// the reservoir coupling sum.
class SignedNetwork {
 public:
  SignedNetwork() = default;
  SignedNetwork(int m, std::vector<std::int8_t> entries);

  int size() const { return m_; }
  std::int8_t entry(int i, int j) const { return a_[static_cast<std::size_t>(i) * m_ + j]; }
  const std::vector<std::int8_t>& entries() const { return a_; }

  int n_positive() const { return n_pos_; }
  int n_negative() const { return n_neg_; }
  int n_zero() const { return m_ * (m_ - 1) - n_pos_ - n_neg_; }
  int n_nonzero() const { return n_pos_ + n_neg_; }

  bool operator==(const SignedNetwork& o) const { return m_ == o.m_ && a_ == o.a_; }

 private:
  int m_ = 0;
  std::vector<std::int8_t> a_;
  int n_pos_ = 0;
  int n_neg_ = 0;
};

// Real-valued adjacency after spectral normalization.
struct NormalizedAdjacency {
  int size = 0;
  std::vector<double> entries;  // row-major size*size
  double scale = 0.0;           // factor applied to the integer matrix
  double target = 0.0;

  double entry(int i, int j) const { return entries[static_cast<std::size_t>(i) * size + j]; }
};

enum class InputKind { alternating, all_ones, uniform_random };

struct InputVector {
  int size = 0;
  std::vector<double> entries;
  InputKind kind = InputKind::alternating;
};

// n_edges off-diagonal +1 entries placed uniformly at random; resamples
// until the undirected support graph is connected (up to `retries`
// attempts). Deterministic per seed.
SignedNetwork make_base_network(int m, int n_edges, std::uint64_t seed,
                                int retries = 1000);

// As make_base_network but the zero (missing) off-diagonal slots are
// confined to a small random vertex subset, which leaves the remaining
// vertices mutually interchangeable and so yields a highly symmetric
// network. Used by the symmetry-sweep base search.
SignedNetwork make_symmetric_base_network(int m, int n_edges, std::uint64_t seed,
                                          int retries = 1000);

// Flip n_flip entries chosen uniformly without replacement among the +1
// entries to -1. Value semantics: the input is unchanged.
SignedNetwork flip_edges(const SignedNetwork& net, int n_flip, std::uint64_t seed);

inline double flip_fraction(const SignedNetwork& base, int n_flip) {
  return static_cast<double>(n_flip) / base.n_nonzero();
}

enum class SpectralMode { max_abs_real, max_modulus };

// Rescale so that max_i |Re(lambda_i)| (or max |lambda_i|) equals `target`.
NormalizedAdjacency normalize_spectral(const SignedNetwork& net, double target,
                                       SpectralMode mode = SpectralMode::max_abs_real);
NormalizedAdjacency normalize_spectral(int m, const std::vector<double>& entries,
                                       double target,
                                       SpectralMode mode = SpectralMode::max_abs_real);

InputVector make_input_vector(int m, InputKind kind, std::uint64_t seed);

// Continuous-valued random network: each off-diagonal entry nonzero with
// probability `density`, value uniform on [-1,1]; zero diagonal. Returned
// as a raw real matrix since it bypasses the {-1,0,+1} constraint.
std::vector<double> make_random_network(int m, double density, std::uint64_t seed);

double sparsity(const SignedNetwork& net);

// Weak connectivity of the support graph.
bool is_connected(const SignedNetwork& net);

// Text format: header "M n_pos n_neg", then M rows of M space-separated
// integers. Round trip is exact.
void save_network(const SignedNetwork& net, const std::string& path);
SignedNetwork load_network(const std::string& path);
void save_normalized_csv(const NormalizedAdjacency& adj, const std::string& path);

}  // namespace rcnet
