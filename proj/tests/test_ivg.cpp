#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ffbench/error.hpp"
#include "ffbench/ivg.hpp"
#include "ffbench/wall_forge.hpp"

using namespace ffbench;

namespace {

Interval iv(long a, long b) { return {Rational(a), Rational(b)}; }

bool meet(const Interval& a, const Interval& b) { return max(a.lo, b.lo) <= min(a.hi, b.hi); }

// Largest pairwise-intersecting subset, by enumeration.
std::size_t brute_clique(const IntervalFamily& f) {
  std::size_t best = 0;
  const std::size_t n = f.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = i + 1; j < n && ok; ++j) {
        if ((mask >> i & 1) && (mask >> j & 1) && !meet(f[i], f[j])) ok = false;
      }
    }
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcountll(mask)));
  }
  return best;
}

Coloring naive_first_fit(const IntervalFamily& f, const std::vector<std::size_t>& order) {
  Coloring c(f.size(), 0);
  for (std::size_t v : order) {
    Color k = 1;
    for (bool clash = true; clash;) {
      clash = false;
      for (std::size_t u = 0; u < f.size(); ++u) {
        if (u != v && c[u] == k && meet(f[u], f[v])) {
          clash = true;
          ++k;
          break;
        }
      }
    }
    c[v] = k;
  }
  return c;
}

IntervalFamily random_family(std::mt19937& rng, std::size_t n, int span) {
  std::uniform_int_distribution<int> pos(0, span);
  std::uniform_int_distribution<int> den(1, 3);
  IntervalFamily f;
  for (std::size_t i = 0; i < n; ++i) {
    const int d = den(rng);
    Rational a(pos(rng), d);
    Rational b(pos(rng), d);
    if (b < a) std::swap(a, b);
    f.push_back({a, b});
  }
  return f;
}

}  // namespace

TEST_CASE("interval rejects hi below lo and uses closed intersection") {
  CHECK_THROWS_AS(iv(2, 1), Error);
  CHECK(iv(0, 1).intersects(iv(1, 2)));
  CHECK_FALSE(iv(0, 1).intersects(iv(2, 3)));
  CHECK(iv(0, 4).contains(iv(1, 2)));
}

TEST_CASE("clique_size examples") {
  CHECK(clique_size({iv(0, 1), iv(2, 3)}) == 1);
  CHECK(clique_size({iv(0, 1), iv(0, 1), iv(0, 1), iv(0, 1)}) == 4);
  CHECK(clique_size({iv(0, 2), iv(1, 3), iv(2, 4)}) == 3);
  CHECK_THROWS_AS(clique_size({}), Error);
}

TEST_CASE("clique_size agrees with subset enumeration on random small families") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto f = random_family(rng, 1 + trial % 12, 10);
    CAPTURE(trial);
    CHECK(clique_size(f) == brute_clique(f));
  }
}

TEST_CASE("adjacency matches pairwise intersection") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_family(rng, 1 + trial % 20, 12);
    const auto adj = adjacency(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::vector<std::size_t> want;
      for (std::size_t j = 0; j < f.size(); ++j) {
        if (j != i && meet(f[i], f[j])) want.push_back(j);
      }
      CHECK(adj[i] == want);
    }
  }
}

TEST_CASE("first_fit on the path v1-v3-v4-v2") {
  // ids 0..3 are v1..v4
  const IntervalFamily path{iv(0, 1), iv(3, 4), iv(1, 2), iv(2, 3)};
  const Coloring bad = first_fit(path, {0, 1, 2, 3});
  CHECK(bad == Coloring{1, 1, 2, 3});
  CHECK(distinct_colors(bad) == 3);
  CHECK(distinct_colors(first_fit(path, {0, 2, 3, 1})) == 2);
  CHECK(first_fit({iv(5, 6)}, {0}) == Coloring{1});
}

TEST_CASE("first_fit rejects non-permutations") {
  const IntervalFamily f{iv(0, 1), iv(1, 2)};
  CHECK_THROWS_AS(first_fit(f, {0}), Error);
  CHECK_THROWS_AS(first_fit(f, {0, 0}), Error);
  CHECK_THROWS_AS(first_fit(f, {0, 2}), Error);
}

TEST_CASE("first_fit agrees with a naive simulator, is proper and uses at least omega colors") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_family(rng, 1 + trial % 25, 15);
    std::vector<std::size_t> order(f.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const Coloring c = first_fit(f, order);
    CHECK(c == naive_first_fit(f, order));
    const auto adj = adjacency(f);
    for (std::size_t v = 0; v < f.size(); ++v) {
      for (std::size_t u : adj[v]) CHECK(c[u] != c[v]);
    }
    CHECK(distinct_colors(c) >= clique_size(f));
  }
}

TEST_CASE("color_sorted_order sorts by color, ties by id") {
  Wall w;
  w.family = {iv(0, 1), iv(2, 3)};
  w.colors = {2, 1};
  CHECK(color_sorted_order(w) == std::vector<std::size_t>{1, 0});
  CHECK(color_sorted_order(clique_wall(3)) == std::vector<std::size_t>{0, 1, 2});
  const Wall t1 = tower_wall(1);
  const auto order = color_sorted_order(t1);
  for (std::size_t i = 1; i < order.size(); ++i) {
    const bool sorted = t1.colors[order[i - 1]] < t1.colors[order[i]] ||
                        (t1.colors[order[i - 1]] == t1.colors[order[i]] && order[i - 1] < order[i]);
    CHECK(sorted);
  }
}

TEST_CASE("verify_wall on clean walls") {
  Wall t2 = tower_wall(2);
  t2.declared_ratio = Rational(7, 3);
  const WallReport rep = verify_wall(t2);
  CHECK(rep.ok());
  CHECK(rep.clique_size == 3);
  CHECK(rep.color_count == 7);
  CHECK(rep.ratio == Rational(7, 3));
  for (std::size_t k = 1; k <= 6; ++k) {
    const WallReport c = verify_wall(clique_wall(k));
    CHECK(c.ok());
    CHECK(c.clique_size == k);
    CHECK(c.color_count == k);
  }
  CHECK(verify_wall(Wall{}).ok());
}

TEST_CASE("verify_wall flags a broken support") {
  Wall t1 = tower_wall(1);
  // Remove one color-1 vertex; some color-2 vertex loses its support.
  const auto it = std::find(t1.colors.begin(), t1.colors.end(), 1);
  const auto v = static_cast<std::size_t>(it - t1.colors.begin());
  t1.family.erase(t1.family.begin() + static_cast<long>(v));
  t1.colors.erase(t1.colors.begin() + static_cast<long>(v));
  t1.declared_ratio = Rational(1);
  const WallReport rep = verify_wall(t1);
  REQUIRE_FALSE(rep.ok());
  bool orphan = false;
  for (const auto& viol : rep.violations) {
    if (viol.vertex && t1.colors[*viol.vertex] == 2 && viol.reason.find("support") != std::string::npos) orphan = true;
  }
  CHECK(orphan);
}

TEST_CASE("verify_wall flags improper, nonpositive and under-ratio colorings") {
  Wall w;
  w.family = {iv(0, 1), iv(0, 1)};
  w.colors = {1, 1};
  CHECK_FALSE(verify_wall(w).ok());
  w.colors = {0, 1};
  CHECK_FALSE(verify_wall(w).ok());
  w = clique_wall(2);
  w.declared_ratio = Rational(3, 2);
  const WallReport rep = verify_wall(w);
  CHECK_FALSE(rep.ok());
  CHECK(rep.violations.size() == 1);
}

TEST_CASE("squeeze maps affinely and preserves adjacency") {
  const IntervalFamily out = squeeze({iv(0, 1), iv(1, 2)}, iv(10, 11));
  CHECK(out == IntervalFamily{{Rational(10), Rational(21, 2)}, {Rational(21, 2), Rational(11)}});
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_family(rng, 2 + trial % 10, 9);
    const Interval box = bounding_interval(f);
    if (box.length().sign() > 0) CHECK(squeeze(f, box) == f);
    const auto g = squeeze(f, Interval(Rational(-3), Rational(-3) + Rational(1, 1000)));
    CHECK(adjacency(g) == adjacency(f));
  }
  const Wall t1 = tower_wall(1);
  CHECK(clique_size(squeeze(t1.family, {Rational(0), Rational(1, 100)})) == clique_size(t1.family));
  CHECK_THROWS_AS(squeeze({iv(0, 1)}, iv(3, 3)), Error);
}
