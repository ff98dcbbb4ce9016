#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "rcnet/network.hpp"

namespace rcnet {

struct SymmetryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bijection on {0..M-1}; map[i] is the image of node i.
struct Permutation {
  std::vector<int> map;

  int size() const { return static_cast<int>(map.size()); }
  bool is_identity() const;
  bool operator==(const Permutation& o) const { return map == o.map; }

  static Permutation identity(int n);
};

// Result entry (i,j) = input entry (p(i), p(j)).
SignedNetwork apply_permutation(const Permutation& p, const SignedNetwork& net);

// True iff the permuted network equals the original elementwise, signs included.
bool is_automorphism(const Permutation& p, const SignedNetwork& net);

struct AutomorphismReport {
  mpz_class group_order;                       // exact, arbitrary precision
  std::vector<Permutation> generators;         // each passes is_automorphism
  std::vector<std::vector<int>> orbit_partition;  // node orbits under the group
  std::vector<int> base;                       // individualization sequence used

  std::string order_decimal() const { return group_order.get_str(); }
  double order_log10() const;
};

// Exhaustive enumeration of all M! permutations. Guarded to M <= 9.
AutomorphismReport count_automorphisms_bruteforce(const SignedNetwork& net);

// Exact group order via iterated color refinement on signed in/out
// neighborhood multisets plus backtracking individualization-refinement.
// The order is the product of base-point orbit sizes along the leftmost
// search path (orbit-stabilizer chain over the discovered generators).
AutomorphismReport count_automorphisms(const SignedNetwork& net);

}  // namespace rcnet
