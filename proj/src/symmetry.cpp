#include "rcnet/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rcnet {

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if (map[i] != i) return false;
  return true;
}

Permutation Permutation::identity(int n) {
  Permutation p;
  p.map.resize(n);
  std::iota(p.map.begin(), p.map.end(), 0);
  return p;
}

SignedNetwork apply_permutation(const Permutation& p, const SignedNetwork& net) {
  const int m = net.size();
  if (p.size() != m) throw SymmetryError("apply_permutation: size mismatch");
  std::vector<std::int8_t> a(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      a[static_cast<std::size_t>(i) * m + j] = net.entry(p.map[i], p.map[j]);
  return SignedNetwork(m, std::move(a));
}

bool is_automorphism(const Permutation& p, const SignedNetwork& net) {
  const int m = net.size();
  if (p.size() != m) return false;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (net.entry(p.map[i], p.map[j]) != net.entry(i, j)) return false;
  return true;
}

double AutomorphismReport::order_log10() const {
  // exact for small orders, mantissa/exponent split for huge ones
  signed long exp2;
  const double mant = mpz_get_d_2exp(&exp2, group_order.get_mpz_t());
  return std::log10(mant) + static_cast<double>(exp2) * std::log10(2.0);
}

namespace {

std::vector<std::vector<int>> orbits_from_generators(int m, const std::vector<Permutation>& gens) {
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : gens)
    for (int i = 0; i < m; ++i) {
      const int a = find(i), b = find(g.map[i]);
      if (a != b) parent[a] = b;
    }
  std::vector<std::vector<int>> buckets(m);
  for (int i = 0; i < m; ++i) buckets[find(i)].push_back(i);
  std::vector<std::vector<int>> orbits;
  for (auto& b : buckets)
    if (!b.empty()) orbits.push_back(std::move(b));
  return orbits;
}

// ---------------------------------------------------------------------------
// Individualization-refinement search.
//
// Node colors are refined by the multiset of (neighbor color, relation)
// pairs, where the relation of ordered pair (i,j) encodes both entries
// (A_ij, A_ji) in {-1,0,+1}^2. Color ids are assigned canonically (sorted
// by old color then signature), so automorphic branches produce identical
// partition traces and leaves are comparable position-by-position against
// the first discovered leaf.
// ---------------------------------------------------------------------------
class AutSearch {
 public:
  explicit AutSearch(const SignedNetwork& net) : net_(net), m_(net.size()) {
    rel_.resize(static_cast<std::size_t>(m_) * m_);
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j)
        rel_[static_cast<std::size_t>(i) * m_ + j] =
            static_cast<std::uint8_t>(3 * (net.entry(i, j) + 1) + (net.entry(j, i) + 1));
  }

  AutomorphismReport run() {
    std::vector<int> colors(m_, 0);
    dfs(colors, 0, true);

    AutomorphismReport rep;
    rep.base = base_;
    rep.generators = gens_;
    rep.orbit_partition = orbits_from_generators(m_, gens_);
    rep.group_order = 1;
    // orbit-stabilizer product along the leftmost individualization path
    for (std::size_t l = 0; l < base_.size(); ++l) {
      std::vector<int> prefix(base_.begin(), base_.begin() + l);
      rep.group_order *= orbit_of(base_[l], prefix).size();
    }
    return rep;
  }

 private:
  using Shape = std::vector<std::pair<int, int>>;  // (color id, cell size)

  // canonical equitable refinement; returns number of color classes
  int refine(std::vector<int>& colors) const {
    int nc = 1 + *std::max_element(colors.begin(), colors.end());
    for (;;) {
      // signature of vertex i: counts over (color of j, rel(i,j)) buckets
      const int sig_len = nc * 9;
      std::vector<std::uint16_t> sig(static_cast<std::size_t>(m_) * sig_len, 0);
      for (int i = 0; i < m_; ++i) {
        std::uint16_t* s = sig.data() + static_cast<std::size_t>(i) * sig_len;
        const std::uint8_t* r = rel_.data() + static_cast<std::size_t>(i) * m_;
        for (int j = 0; j < m_; ++j)
          if (j != i) ++s[colors[j] * 9 + r[j]];
      }
      std::vector<int> order(m_);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (colors[a] != colors[b]) return colors[a] < colors[b];
        const std::uint16_t* sa = sig.data() + static_cast<std::size_t>(a) * sig_len;
        const std::uint16_t* sb = sig.data() + static_cast<std::size_t>(b) * sig_len;
        return std::lexicographical_compare(sa, sa + sig_len, sb, sb + sig_len);
      });
      std::vector<int> next(m_);
      int id = 0;
      for (int k = 0; k < m_; ++k) {
        if (k > 0) {
          const int a = order[k - 1], b = order[k];
          const bool same =
              colors[a] == colors[b] &&
              std::equal(sig.begin() + static_cast<std::size_t>(a) * sig_len,
                         sig.begin() + static_cast<std::size_t>(a + 1) * sig_len,
                         sig.begin() + static_cast<std::size_t>(b) * sig_len);
          if (!same) ++id;
        }
        next[order[k]] = id;
      }
      const int new_nc = id + 1;
      colors.swap(next);
      if (new_nc == nc) return nc;
      nc = new_nc;
    }
  }

  static Shape shape_of(const std::vector<int>& colors, int nc) {
    std::vector<int> count(nc, 0);
    for (int c : colors) ++count[c];
    Shape s;
    s.reserve(nc);
    for (int c = 0; c < nc; ++c) s.emplace_back(c, count[c]);
    return s;
  }

  // true iff swapping u and v (fixing everything else) is an automorphism
  bool swap_is_automorphism(int u, int v) const {
    const std::uint8_t* ru = rel_.data() + static_cast<std::size_t>(u) * m_;
    const std::uint8_t* rv = rel_.data() + static_cast<std::size_t>(v) * m_;
    for (int j = 0; j < m_; ++j)
      if (j != u && j != v && ru[j] != rv[j]) return false;
    return net_.entry(u, v) == net_.entry(v, u);
  }

  // Returns true once the subtree has produced an automorphism. Non-leftmost
  // subtrees are abandoned at that point (McKay's automorphism pruning): any
  // further leaf below them is equivalent to one reachable from the first
  // path, so nothing new can be learned there.
  bool dfs(std::vector<int> colors, int depth, bool leftmost) {
    const int nc = refine(colors);
    const Shape shape = shape_of(colors, nc);
    if (leftmost) {
      first_trace_.push_back(shape);
    } else {
      // a branch whose partition trace differs from the first path cannot
      // contain a leaf automorphic to the first leaf
      if (depth >= static_cast<int>(first_trace_.size())) return false;
      if (shape != first_trace_[depth]) return false;
    }
    if (nc == m_) return handle_leaf(colors);

    // target cell: smallest non-singleton, ties by lowest color id
    int cell = -1, cell_size = m_ + 1;
    for (const auto& [c, sz] : shape)
      if (sz > 1 && sz < cell_size) {
        cell = c;
        cell_size = sz;
      }
    std::vector<int> members;
    for (int v = 0; v < m_; ++v)
      if (colors[v] == cell) members.push_back(v);

    if (leftmost) base_.push_back(members.front());

    bool found = false;
    std::vector<int> tried;
    for (int v : members) {
      if (!tried.empty() && in_known_orbit(v, tried)) continue;
      if (!tried.empty() && swap_is_automorphism(tried.front(), v)) {
        // interchangeable twins: record the transposition, skip the descent
        Permutation t = Permutation::identity(m_);
        std::swap(t.map[tried.front()], t.map[v]);
        gens_.push_back(std::move(t));
        tried.push_back(v);
        found = true;
        continue;
      }
      std::vector<int> child = colors;
      for (int u : members)
        if (u != v) child[u] = nc;  // v keeps the cell color, rest split off
      fixed_.push_back(v);
      const bool f = dfs(std::move(child), depth + 1, leftmost && tried.empty());
      fixed_.pop_back();
      tried.push_back(v);
      if (f) {
        found = true;
        if (!leftmost) return true;
      }
    }
    return found;
  }

  bool handle_leaf(const std::vector<int>& colors) {
    std::vector<int> leaf(m_);
    for (int v = 0; v < m_; ++v) leaf[colors[v]] = v;
    if (first_leaf_.empty()) {
      first_leaf_ = leaf;
      return false;
    }
    Permutation g;
    g.map.resize(m_);
    for (int k = 0; k < m_; ++k) g.map[leaf[k]] = first_leaf_[k];
    if (g.is_identity() || !is_automorphism(g, net_)) return false;
    if (std::find(gens_.begin(), gens_.end(), g) == gens_.end()) gens_.push_back(g);
    return true;
  }

  // orbit closure of `seed` points under generators fixing `prefix` pointwise
  std::vector<int> orbit_of_set(const std::vector<int>& seeds,
                                const std::vector<int>& prefix) const {
    std::vector<const Permutation*> usable;
    for (const auto& g : gens_) {
      bool ok = true;
      for (int f : prefix)
        if (g.map[f] != f) {
          ok = false;
          break;
        }
      if (ok) usable.push_back(&g);
    }
    std::vector<char> in(m_, 0);
    std::vector<int> queue = seeds;
    for (int s : seeds) in[s] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (const Permutation* g : usable) {
        const int img = g->map[queue[h]];
        if (!in[img]) {
          in[img] = 1;
          queue.push_back(img);
        }
      }
    return queue;
  }

  std::vector<int> orbit_of(int seed, const std::vector<int>& prefix) const {
    return orbit_of_set({seed}, prefix);
  }

  bool in_known_orbit(int v, const std::vector<int>& tried) const {
    const auto orb = orbit_of_set(tried, fixed_);
    return std::find(orb.begin(), orb.end(), v) != orb.end();
  }

  const SignedNetwork& net_;
  int m_;
  std::vector<std::uint8_t> rel_;
  std::vector<Permutation> gens_;
  std::vector<int> first_leaf_;
  std::vector<Shape> first_trace_;
  std::vector<int> base_;
  std::vector<int> fixed_;
};

}  // namespace

AutomorphismReport count_automorphisms_bruteforce(const SignedNetwork& net) {
  const int m = net.size();
  if (m > 9) throw SymmetryError("count_automorphisms_bruteforce: M > 9");
  AutomorphismReport rep;
  rep.group_order = 0;
  Permutation p = Permutation::identity(m);
  do {
    if (is_automorphism(p, net)) {
      rep.group_order += 1;
      if (!p.is_identity()) rep.generators.push_back(p);
    }
  } while (std::next_permutation(p.map.begin(), p.map.end()));
  rep.orbit_partition = orbits_from_generators(m, rep.generators);
  return rep;
}

AutomorphismReport count_automorphisms(const SignedNetwork& net) {
  return AutSearch(net).run();
}

}  // namespace rcnet
