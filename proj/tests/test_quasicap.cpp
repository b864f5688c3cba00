#include <doctest.h>

#include <optional>
#include <tuple>

#include "ffbench/error.hpp"
#include "ffbench/quasicap.hpp"

using namespace ffbench;

namespace {

std::vector<Rational> strand(const Rational& r, const Rational& t, const Rational& d, std::size_t n) {
  std::vector<Rational> u{Rational(1), Rational(1), t + d};
  while (u.size() < n) {
    const std::size_t k = u.size();
    u.push_back((r - t) * u[k - 1] - (r - t - t) * u[k - 2] - t * u[k - 3]);
  }
  u.resize(n);
  return u;
}

// First N > 1 with u_0 = u_1 <= u_2 < ... < u_N >= u_{N+1}.
std::optional<std::size_t> stop_of(const std::vector<Rational>& u) {
  if (u[2] < u[1]) return std::nullopt;
  for (std::size_t n = 2; n + 1 < u.size(); ++n) {
    if (u[n + 1] <= u[n]) return n;
    if (n > 2 && !(u[n - 1] < u[n])) return std::nullopt;
  }
  return std::nullopt;
}

StopResult stopped(std::size_t n) { return {StopResult::Kind::Stopped, n}; }

bool has_box(const BoxCap& cap, const Rational& top, const Rational& bottom) {
  for (const CapBox& b : cap.boxes) {
    if (b.top == top && b.bottom() == bottom) return true;
  }
  return false;
}

void check_recipe(const Recipe& rec) {
  REQUIRE_FALSE(rec.steps.empty());
  Rational theta(1);
  for (const RecipeStep& s : rec.steps) {
    CHECK(s.theta == theta);
    CHECK(s.delta.sign() > 0);
    CHECK(stop_of(strand(rec.r, s.theta, s.delta, s.N + 2)) == s.N);
    theta += s.delta;
  }
  CHECK(theta == rec.r - Rational(2));
}

}  // namespace

TEST_CASE("strand_sequence examples") {
  const std::vector<Rational> four = strand_sequence({4, 1, 1}, 7);
  CHECK(std::vector<Rational>(four.begin(), four.begin() + 6) == std::vector<Rational>{1, 1, 2, 3, 4, 4});
  const std::vector<Rational> half{1, 1, Rational(9, 5), Rational(14, 5), Rational(43, 10), Rational(25, 4),
                                   Rational(333, 40), Rational(737, 80), Rational(829, 160)};
  CHECK(strand_sequence({Rational(9, 2), 1, Rational(4, 5)}, 9) == half);
  const std::vector<Rational> second{1, 1, Rational(5, 2), Rational(81, 20), Rational(1377, 200),
                                     Rational(20889, 2000), Rational(294273, 20000), Rational(3586761, 200000),
                                     Rational(32757777, 2000000)};
  CHECK(strand_sequence({Rational(9, 2), Rational(9, 5), Rational(7, 10)}, 9) == second);
  CHECK_THROWS_AS(strand_sequence({4, 1, 1}, 2), Error);
}

TEST_CASE("r = 5 strand from theta 1 matches the listed terms") {
  const std::vector<Rational> u = strand_sequence({5, 1, 2}, 13);
  const std::vector<Rational> listed{1, 3, 8, 22, 61, 170, 475, 1329, 3721, 10422, 29196};
  for (std::size_t i = 0; i < listed.size(); ++i) CHECK(u[i + 1] == listed[i]);
  CHECK(find_stop({5, 1, 2}, 11) == StopResult{StopResult::Kind::Diverged, 11});
}

TEST_CASE("Fibonacci boundary") {
  const std::vector<Rational> u = strand_sequence({5, 2, 0}, 20);
  Rational a(1), b(1);
  for (std::size_t n = 0; n < 20; ++n) {
    CHECK(u[n] == a);
    const Rational c = a + b;
    a = b;
    b = c;
  }
}

TEST_CASE("strands agree with an independent recurrence") {
  for (const Rational& r : {Rational(4), Rational(9, 2), Rational(49, 10), Rational(5)}) {
    for (const Rational& t : {Rational(1), Rational(3, 2), Rational(17, 10)}) {
      for (const Rational& d : {Rational(1, 8), Rational(1, 3), Rational(1)}) {
        CHECK(strand_sequence({r, t, d}, 30) == strand(r, t, d, 30));
      }
    }
  }
}

TEST_CASE("difference sequence obeys q F = p") {
  for (const auto& [r, t, d] : {std::tuple{Rational(9, 2), Rational(1), Rational(4, 5)},
                                std::tuple{Rational(49, 10), Rational(7, 4), Rational(1, 8)},
                                std::tuple{Rational(5), Rational(2), Rational(0)}}) {
    const std::vector<Rational> u = strand_sequence({r, t, d}, 26);
    std::vector<Rational> f(24);
    for (std::size_t n = 0; n < 24; ++n) f[n] = u[n + 1] - u[n];
    const std::vector<Rational> q{Rational(1), t - r, r - t - t, t};
    const std::vector<Rational> p{Rational(0), t + d - Rational(1), -(t + d)};
    for (std::size_t n = 0; n < 24; ++n) {
      Rational acc;
      for (std::size_t i = 0; i < q.size() && i <= n; ++i) acc += q[i] * f[n - i];
      CHECK(acc == (n < p.size() ? p[n] : Rational(0)));
    }
  }
}

TEST_CASE("find_stop examples") {
  CHECK(find_stop({4, 1, 1}, 50) == stopped(4));
  CHECK(find_stop({Rational(9, 2), 1, Rational(4, 5)}, 50) == stopped(7));
  CHECK(find_stop({Rational(9, 2), Rational(9, 5), Rational(7, 10)}, 50) == stopped(7));
  CHECK(find_stop({4, 1, -1}, 50).kind == StopResult::Kind::PatternBroken);
  CHECK_THROWS_AS(find_stop({4, 1, 1}, 3), Error);
}

TEST_CASE("find_stop agrees with a direct pattern scan") {
  for (const Rational& r : {Rational(41, 10), Rational(9, 2), Rational(24, 5)}) {
    for (int ti = 0; ti < 5; ++ti) {
      const Rational t = Rational(1) + Rational(ti, 4);
      if (!(t < r - Rational(2))) continue;
      for (const Rational& d : {Rational(1, 16), Rational(1, 4), Rational(1, 2)}) {
        CAPTURE(r);
        CAPTURE(t);
        CAPTURE(d);
        const StopResult got = find_stop({r, t, d}, 200);
        const auto want = stop_of(strand(r, t, d, 202));
        if (want) {
          CHECK(got == stopped(*want));
        } else {
          CHECK_FALSE(got.stopped());
        }
      }
    }
  }
}

TEST_CASE("bit budget ends the scan as Diverged") {
  CHECK(find_stop({5, 1, 2}, 10'000, 64).kind == StopResult::Kind::Diverged);
}

TEST_CASE("initial quasicap") {
  for (const Rational& r : {Rational(4), Rational(9, 2), Rational(5)}) {
    const Quasicap qc = initial_quasicap(r);
    CHECK(qc.theta == Rational(1));
    const CapBox& key = qc.cap.box(qc.key_box);
    CHECK(key.top == r - Rational(1));
    CHECK(key.bottom() == r);
    CHECK(key.cone_depth == r);
    CHECK(qc.cap.box(qc.twin_top).top == Rational(0));
    CHECK(qc.cap.box(qc.twin_low).top == Rational(1));
    CHECK(verify_quasicap(qc).ok());
    // the gap under the twins is the one thing plain verification objects to
    const CapReport plain = verify_box_cap(qc.cap);
    CHECK_FALSE(plain.ok());
    for (const auto& v : plain.violations) CHECK(v.condition == "support");
  }
  CHECK_THROWS_AS(initial_quasicap(Rational(3)), Error);
}

TEST_CASE("gap_step at r = 4 closes the gap in one step") {
  const Quasicap qc = gap_step(initial_quasicap(4), 1);
  CHECK(qc.theta == Rational(2));
  CHECK(qc.cap.boxes.size() == 18u);
  CHECK(verify_box_cap(qc.cap).ok());
  CHECK(verify_quasicap(qc).ok());
  CHECK(qc.cap.total_height() == build_cs_4cap().total_height());
}

TEST_CASE("gap_step chain at r = 9/2") {
  const Rational r(9, 2);
  const Quasicap q0 = initial_quasicap(r);
  const Quasicap q1 = gap_step(q0, Rational(4, 5));
  const Quasicap q2 = gap_step(q1, Rational(7, 10));
  for (const auto& [before, after, delta] : {std::tuple{&q0, &q1, Rational(4, 5)}, std::tuple{&q1, &q2, Rational(7, 10)}}) {
    const Rational h = before->theta + delta;
    CHECK(after->theta == h);
    const CapBox& key = after->cap.box(after->key_box);
    CHECK(key.height == h);
    CHECK(key.top == r - h);
    CHECK(key.bottom() == r);
    CHECK(verify_quasicap(*after).ok());
    // plain verification only once the key box reaches the twins
    CHECK(verify_box_cap(after->cap).ok() == (h == r - Rational(2)));

    const std::size_t N = 7;
    const std::size_t K = (before->cap.boxes.size() - 2) / 2;
    CHECK(after->cap.boxes.size() == 2 + 2 * (N + N * K));

    const std::vector<Rational> u = strand(r, before->theta, delta, N + 3);
    Rational tail = r;
    for (std::size_t n = 1; n + 1 <= N; ++n) {
      tail += u[n + 2];
      CAPTURE(n);
      CHECK(has_box(after->cap, tail, r * u[n + 1]));
    }
  }
  CHECK(q2.theta == r - Rational(2));
  CHECK(verify_vertex_cap(lower_to_vertex_cap(scale_to_integers(q2.cap))).ok());
}

TEST_CASE("gap_step errors") {
  const Quasicap qc = initial_quasicap(5);
  try {
    gap_step(qc, 2);
    FAIL("expected NotStopped");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotStopped);
  }
  try {
    gap_step(initial_quasicap(Rational(9, 2)), Rational(4, 5), kDefaultCutoff, 10);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
  CHECK_THROWS_AS(gap_step(initial_quasicap(4), 0), Error);
}

TEST_CASE("certify 9/2 with a 4/5 first step") {
  CertifyOptions o;
  o.delta0 = Rational(4, 5);
  o.geometric = true;
  const Certification c = certify_r(Rational(9, 2), o);
  const std::vector<RecipeStep> want{{1, Rational(4, 5), 7}, {Rational(9, 5), Rational(7, 10), 7}};
  CHECK(c.recipe.steps == want);
  check_recipe(c.recipe);
  REQUIRE(c.cap);
  CHECK(c.cap->cap.box(c.cap->key_box).height == Rational(5, 2));
  CHECK(execute_recipe(c.recipe).cap == c.cap->cap);
}

TEST_CASE("certify just above 4") {
  const Rational r = Rational(4) + Rational(BigInt(1), BigInt(1) << 20);
  const Certification c = certify_r(r);
  check_recipe(c.recipe);
  CHECK(c.recipe.steps.size() < 10);
  for (const RecipeStep& s : c.recipe.steps) CHECK(s.N < 10);
}

TEST_CASE("certify 49/10 recipe and parallel agreement") {
  CertifyOptions o;
  const Recipe seq = certify_r(Rational(49, 10), o).recipe;
  check_recipe(seq);
  o.jobs = 3;
  CHECK(certify_r(Rational(49, 10), o).recipe == seq);
}

TEST_CASE("certify 5 stalls") {
  try {
    certify_r(5);
    FAIL("expected Stalled");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Stalled);
  }
}
