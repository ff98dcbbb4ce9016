#include <doctest.h>

#include <gmpxx.h>

#include "rcnet/network.hpp"
#include "rcnet/rng.hpp"
#include "rcnet/symmetry.hpp"

using namespace rcnet;

namespace {

SignedNetwork directed_cycle(int m) {
  std::vector<std::int8_t> a(static_cast<std::size_t>(m) * m, 0);
  for (int i = 0; i < m; ++i) a[static_cast<std::size_t>(i) * m + (i + 1) % m] = 1;
  return SignedNetwork(m, std::move(a));
}

SignedNetwork empty_net(int m) {
  return SignedNetwork(m, std::vector<std::int8_t>(static_cast<std::size_t>(m) * m, 0));
}

SignedNetwork complete_plus(int m) {
  std::vector<std::int8_t> a(static_cast<std::size_t>(m) * m, 1);
  for (int i = 0; i < m; ++i) a[static_cast<std::size_t>(i) * m + i] = 0;
  return SignedNetwork(m, std::move(a));
}

// hub node 0 bidirectionally +1-coupled to three leaves
SignedNetwork star4() {
  std::vector<std::int8_t> a(16, 0);
  for (int leaf = 1; leaf < 4; ++leaf) {
    a[leaf] = 1;
    a[static_cast<std::size_t>(leaf) * 4] = 1;
  }
  return SignedNetwork(4, std::move(a));
}

SignedNetwork random_signed(int m, double density, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::int8_t> a(static_cast<std::size_t>(m) * m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && rng.next_double() < density)
        a[static_cast<std::size_t>(i) * m + j] = rng.next_double() < 0.5 ? -1 : 1;
  return SignedNetwork(m, std::move(a));
}

mpz_class factorial(int n) {
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST_SUITE("symmetry") {

TEST_CASE("permutation application and automorphism predicate") {
  const SignedNetwork cyc = directed_cycle(5);
  Permutation rot{{1, 2, 3, 4, 0}};
  CHECK(is_automorphism(rot, cyc));
  CHECK(apply_permutation(rot, cyc) == cyc);
  Permutation swap{{1, 0, 2, 3, 4}};
  CHECK_FALSE(is_automorphism(swap, cyc));
  CHECK(Permutation::identity(5).is_identity());
}

TEST_CASE("hub-and-three-leaves network has 6 symmetries") {
  CHECK(count_automorphisms(star4()).order_decimal() == "6");
  CHECK(count_automorphisms_bruteforce(star4()).order_decimal() == "6");
}

TEST_CASE("directed 5-cycle has exactly its 5 rotations") {
  // reflections reverse edge direction, so they are not automorphisms
  CHECK(count_automorphisms(directed_cycle(5)).order_decimal() == "5");
}

TEST_CASE("known group orders at full scale") {
  CHECK(count_automorphisms(empty_net(100)).group_order == factorial(100));
  CHECK(count_automorphisms(complete_plus(50)).group_order == factorial(50));
  CHECK(count_automorphisms(directed_cycle(12)).group_order == 12);
  CHECK(count_automorphisms(empty_net(100)).order_log10() == doctest::Approx(157.97).epsilon(1e-3));
}

TEST_CASE("search matches brute force on 200 random signed digraphs") {
  int checked = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const int m = 3 + static_cast<int>(s % 6);  // 3..8
    const double density = 0.15 + 0.1 * static_cast<double>(s % 7);
    const SignedNetwork net = random_signed(m, density, 1000 + s);
    const AutomorphismReport fast = count_automorphisms(net);
    const AutomorphismReport brute = count_automorphisms_bruteforce(net);
    CHECK(fast.group_order == brute.group_order);
    for (const Permutation& g : fast.generators) CHECK(is_automorphism(g, net));
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("rigid network reports the trivial group and discrete orbits") {
  const SignedNetwork net = make_base_network(20, 150, 17);
  const AutomorphismReport rep = count_automorphisms(net);
  if (rep.group_order == 1) {
    CHECK(rep.orbit_partition.size() == 20);
    CHECK(rep.generators.empty());
  }
  // a path with distinct in-degrees is rigid for sure
  std::vector<std::int8_t> a(25, 0);
  a[0 * 5 + 1] = 1; a[1 * 5 + 2] = 1; a[2 * 5 + 3] = 1; a[3 * 5 + 4] = 1;
  const AutomorphismReport path = count_automorphisms(SignedNetwork(5, a));
  CHECK(path.order_decimal() == "1");
  CHECK(path.orbit_partition.size() == 5);
}

TEST_CASE("orbit partition covers all nodes exactly once") {
  const AutomorphismReport rep = count_automorphisms(star4());
  std::vector<int> seen(4, 0);
  for (const auto& orbit : rep.orbit_partition)
    for (int v : orbit) ++seen[v];
  for (int c : seen) CHECK(c == 1);
}

TEST_CASE("sign changes break symmetry") {
  SignedNetwork net = star4();
  std::vector<std::int8_t> a(net.entries());
  a[1] = -1;  // hub -> leaf 1 becomes inhibitory
  const SignedNetwork signed_net(4, a);
  // leaves 2 and 3 stay interchangeable; leaf 1 is now distinguished
  CHECK(count_automorphisms(signed_net).order_decimal() == "2");
  CHECK(count_automorphisms_bruteforce(signed_net).order_decimal() == "2");
}

TEST_CASE("symmetric base construction reaches large orders") {
  const SignedNetwork net = make_symmetric_base_network(40, 1400, 21);
  const AutomorphismReport rep = count_automorphisms(net);
  CHECK(rep.order_log10() > 10.0);
  for (const Permutation& g : rep.generators) CHECK(is_automorphism(g, net));
}

TEST_CASE("brute force is guarded against large m") {
  CHECK_THROWS_AS(count_automorphisms_bruteforce(empty_net(10)), SymmetryError);
}

}  // TEST_SUITE
