#include <doctest.h>

#include <algorithm>
#include <set>

#include "ffbench/error.hpp"
#include "ffbench/wall_forge.hpp"

using namespace ffbench;

namespace {

// Max number of intervals over the endpoints; for closed intervals the maximum sits at some endpoint.
std::size_t point_clique(const IntervalFamily& f) {
  std::size_t best = 0;
  for (const Interval& a : f) {
    for (const Rational* p : {&a.lo, &a.hi}) {
      std::size_t n = 0;
      for (const Interval& b : f) n += b.contains(*p) ? 1 : 0;
      best = std::max(best, n);
    }
  }
  return best;
}

// Replays first-fit in color order with a quadratic neighbor scan.
bool replay_matches(const Wall& w) {
  std::vector<std::size_t> order(w.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return w.colors[a] < w.colors[b]; });
  Coloring got(w.size(), 0);
  for (std::size_t v : order) {
    std::set<Color> used;
    for (std::size_t u = 0; u < w.size(); ++u) {
      if (got[u] > 0 && w.family[u].intersects(w.family[v])) used.insert(got[u]);
    }
    Color c = 1;
    while (used.count(c)) ++c;
    got[v] = c;
  }
  return got == w.colors;
}

VertexCap two_box() { return lower_to_vertex_cap(scale_to_integers(build_two_box_cap())); }

}  // namespace

TEST_CASE("clique_wall") {
  CHECK(clique_wall(0).empty());
  const Wall one = clique_wall(1);
  CHECK(one.size() == 1);
  CHECK(one.colors == Coloring{1});
  const Wall four = clique_wall(4);
  const WallReport rep = verify_wall(four);
  CHECK(rep.ok());
  CHECK(rep.clique_size == 4);
  CHECK(rep.color_count == 4);
}

TEST_CASE("drop_color") {
  const Wall c = drop_color(clique_wall(3), ColorEnd::Highest);
  CHECK(c.colors == Coloring{1, 2});
  CHECK(verify_wall(c).ok());
  const Wall t = drop_color(tower_wall(1), ColorEnd::Highest);
  const WallReport rep = verify_wall(t);
  CHECK(rep.ok());
  CHECK(rep.color_count == 3);
  CHECK(rep.clique_size <= 2);
  CHECK(drop_color(clique_wall(1), ColorEnd::Highest).empty());
  const Wall low = drop_color(tower_wall(2), ColorEnd::Lowest);
  CHECK(*std::min_element(low.colors.begin(), low.colors.end()) == 1);
  CHECK(verify_wall(low).ok());
  CHECK_THROWS_AS(drop_color(Wall{}, ColorEnd::Lowest), Error);
}

TEST_CASE("tower walls have 3i+1 colors and clique size i+1") {
  CHECK(tower_wall(0).size() == 1);
  CHECK(tower_wall(2).size() == 36);
  for (std::size_t i = 0; i <= 4; ++i) {
    const Wall w = tower_wall(i);
    CAPTURE(i);
    CHECK(w.size() == tower_size(i));
    const WallReport rep = verify_wall(w);
    CHECK(rep.ok());
    CHECK(rep.color_count == 3 * i + 1);
    CHECK(rep.clique_size == i + 1);
    CHECK(point_clique(w.family) == i + 1);
  }
  CHECK(replay_matches(tower_wall(2)));
}

TEST_CASE("tower budget") {
  CHECK_THROWS_AS(tower_wall(3, 100), Error);
  try {
    tower_wall(3, 100);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
}

TEST_CASE("expansion constants of the two-box cap") {
  const ExpansionConstants k = expansion_constants(two_box());
  CHECK(k.c == Rational(2));
  CHECK(k.b == Rational(4));
}

TEST_CASE("two-box cap expands to walls with clique size k") {
  const VertexCap cap = two_box();
  for (std::size_t k : {0, 1, 2, 3, 5, 8, 10}) {
    CAPTURE(k);
    const Wall w = cap_to_wall(cap, k);
    if (k == 0) {
      CHECK(w.empty());
      continue;
    }
    const WallReport rep = verify_wall(w);
    CHECK(rep.ok());
    CHECK(point_clique(w.family) == k);
    const long need = std::max(1L, static_cast<long>(2 * k) - 4);
    CHECK(static_cast<long>(distinct_colors(w.colors)) >= need);
  }
  const Wall w10 = cap_to_wall(cap, 10);
  CHECK(replay_matches(w10));
  CHECK(distinct_colors(w10.colors) >= 16);
  CHECK(w10.size() <= 50'000);
}

TEST_CASE("cs 4-cap expansion stays a wall") {
  const VertexCap cap = lower_to_vertex_cap(build_cs_4cap());
  for (std::size_t k : {15, 16, 18}) {
    CAPTURE(k);
    const Wall w = cap_to_wall(cap, k);
    const WallReport rep = verify_wall(w);
    CHECK(rep.ok());
    CHECK(rep.clique_size == k);
    const long need = std::max(1L, 4 * static_cast<long>(k) - 64);
    CHECK(static_cast<long>(rep.color_count) >= need);
  }
}

TEST_CASE("parallel fill is deterministic") {
  const VertexCap cap = lower_to_vertex_cap(build_cs_4cap());
  const Wall a = cap_to_wall(cap, 18, {1'000'000, false});
  const Wall b = cap_to_wall(cap, 18, {1'000'000, true});
  CHECK(a == b);
}

TEST_CASE("cap_to_wall errors") {
  VertexCap bad = two_box();
  bad.r = Rational(3);
  try {
    cap_to_wall(bad, 4);
    FAIL("expected InvalidCap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidCap);
  }
  try {
    cap_to_wall(two_box(), 10, {50, false});
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
}
