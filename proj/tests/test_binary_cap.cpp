#include <doctest.h>

#include <algorithm>

#include "ffbench/binary_cap.hpp"
#include "ffbench/error.hpp"

using namespace ffbench;

namespace {

struct BP {
  Rational beta, pi;
};

// beta/pi by walking each word letter by letter from the top.
BP walk(const BinaryCap& cap, const Word& w) {
  BP q{Rational(0), Rational(0)};
  Word v;
  for (char c : w) {
    const Rational k = cap.kappa(v);
    if (c == 'L') {
      q = {q.beta + q.pi, k - q.pi};
    } else {
      q = {q.beta, k};
    }
    v.push_back(c);
  }
  return q;
}

Rational tau_low(const BinaryCap& cap, const Word& v) {
  if (cap.present(v + "L")) return cap.nodes.at(v + "L").tau;
  return cap.r * (walk(cap, v).beta + cap.kappa(v));
}

// Same relation set as the library, evaluated independently.
std::size_t count_violations(const BinaryCap& cap) {
  std::size_t bad = cap.nodes.at("").tau.sign() != 0 ? 1 : 0;
  for (const auto& [v, node] : cap.nodes) {
    if (!cap.present(v)) continue;
    const BP q = walk(cap, v);
    const Rational k = node.kappa;
    const Rational tl = tau_low(cap, v);
    if (cap.present(v + "L")) {
      const Rational need = cap.r * (q.beta + k) - tl;
      bad += cap.kappa(v + "L") < need ? 1 : 0;
      bad += need.sign() < 0 ? 1 : 0;
    }
    if (cap.present(v + "H")) {
      const Rational need = tl - node.tau - k;
      bad += cap.kappa(v + "H") < need ? 1 : 0;
      bad += need.sign() < 0 ? 1 : 0;
      bad += cap.nodes.at(v + "H").tau != node.tau + k ? 1 : 0;
    }
  }
  return bad;
}

BigInt fib(unsigned n) {
  BigInt a = 0, b = 1;
  for (unsigned i = 0; i < n; ++i) {
    const BigInt c = a + b;
    a = b;
    b = c;
  }
  return a;
}

// Re-derives every chain number from the cap.
void audit(const BinaryCap& cap, const RefutationWitness& w) {
  if (w.by_relations()) {
    CHECK(count_violations(cap) > 0);
    return;
  }
  CHECK(count_violations(cap) == 0);
  REQUIRE_FALSE(w.chain.empty());
  CHECK(w.chain.front().word.empty());
  for (std::size_t i = 0; i < w.chain.size(); ++i) {
    const HardLink& h = w.chain[i];
    CHECK(h.word == h.base + std::string(h.m, 'H'));
    const BP q = walk(cap, h.word);
    const Rational pu = walk(cap, h.base).pi;
    const Rational k = cap.kappa(h.word);
    CHECK(h.pi == q.pi);
    CHECK(h.kappa == k);
    CHECK(q.pi.sign() >= 0);
    CHECK(k >= Rational(2) * q.pi - pu * Rational(fib(h.m)));
    CHECK(cap.nodes.at(h.word).tau <= Rational(5) * q.beta + Rational(2) * q.pi + pu * Rational(fib(h.m + 1)));
    CHECK(k >= pu * Rational(fib(h.m + 3)));
    if (i > 0) CHECK(h.word.size() == w.chain[i - 1].word.size() + 1);
  }
  REQUIRE(w.failure);
  const ChainFailure& f = *w.failure;
  CHECK(f.word.size() == w.chain.back().word.size() + 1);
  CHECK(f.actual == cap.kappa(f.word));
  if (f.strict) {
    CHECK(f.actual <= f.required);
  } else {
    CHECK(f.actual < f.required);
  }
}

BinaryCap single(const Rational& r) {
  BinaryCap cap;
  cap.r = r;
  cap.set("", 1, 0);
  return cap;
}

}  // namespace

TEST_CASE("ShortLex order") {
  ShortLex less;
  CHECK(less("", "H"));
  CHECK(less("L", "HH"));
  CHECK(less("HL", "LH"));
  CHECK_FALSE(less("H", "H"));
}

TEST_CASE("Fibonacci numbers") {
  for (unsigned n = 0; n < 120; ++n) CHECK(fibonacci(n) == fib(n));
  CHECK(fibonacci(0) == 0);
  CHECK(fibonacci(1) == 1);
  CHECK(fibonacci(10) == 55);
}

TEST_CASE("derive_quantities examples") {
  BinaryCap cap = single(5);
  auto q = derive_quantities(cap);
  CHECK(q.at("").beta == Rational(0));
  CHECK(q.at("").pi == Rational(0));
  cap.set("H", 1, 1);
  q = derive_quantities(cap);
  CHECK(q.at("H").beta == Rational(0));
  CHECK(q.at("H").pi == Rational(1));
  BinaryCap low = single(5);
  low.set("L", 2, 3);
  q = derive_quantities(low);
  CHECK(q.at("L").beta == Rational(0));
  CHECK(q.at("L").pi == Rational(1));
  CHECK(q.at("L").alpha() == Rational(1));
}

TEST_CASE("derive_quantities errors") {
  BinaryCap orphan;
  orphan.r = 5;
  orphan.set("", 1, 0);
  orphan.set("HL", 1, 3);
  try {
    derive_quantities(orphan);
    FAIL("expected MissingParent");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingParent);
  }
  BinaryCap headless;
  headless.r = 5;
  headless.set("H", 1, 0);
  CHECK_THROWS_AS(derive_quantities(headless), Error);
  BinaryCap junk = single(5);
  junk.set("X", 1, 1);
  CHECK_THROWS_AS(derive_quantities(junk), Error);
}

TEST_CASE("check_relations examples") {
  CHECK(check_relations(single(1)).ok());
  BinaryCap shifted = single(1);
  shifted.set("", 1, 1);
  CHECK_FALSE(check_relations(shifted).ok());
  BinaryCap bad_tau = single(5);
  bad_tau.set("H", 1, 3);
  const RelationReport rep = check_relations(bad_tau);
  REQUIRE_FALSE(rep.ok());
  bool h_tau = false;
  for (const auto& v : rep.violations) h_tau = h_tau || v.relation == "H-tau";
  CHECK(h_tau);
}

TEST_CASE("encoding of the cs 4-cap") {
  const BinaryCap at4 = encode_binary(build_cs_4cap());
  CHECK(at4.nodes.size() == build_cs_4cap().boxes.size());
  CHECK(check_relations(at4).ok());
  CHECK(count_violations(at4) == 0);

  BoxCap cs5 = build_cs_4cap();
  cs5.r = 5;
  const BinaryCap at5 = encode_binary(cs5);
  const RelationReport rep = check_relations(at5);
  REQUIRE_FALSE(rep.ok());
  bool l_kappa = false;
  for (const auto& v : rep.violations) l_kappa = l_kappa || v.relation == "L-kappa";
  CHECK(l_kappa);
  CHECK(count_violations(at5) > 0);
  const RefutationWitness w = refute_five(at5);
  CHECK(w.by_relations());
  CHECK(verify_witness(at5, w).empty());
}

TEST_CASE("encoding agrees with box verification on two-box caps") {
  const BoxCap two = build_two_box_cap();
  const BinaryCap enc = encode_binary(two);
  CHECK(enc.nodes.size() == 2);
  CHECK(check_relations(enc).ok() == verify_box_cap(two).ok());
}

TEST_CASE("encoding rejects three supporters") {
  BoxCap cap = build_two_box_cap();
  for (int id : {2, 3}) {
    CapBox b = cap.boxes[1];
    b.id = id;
    cap.boxes.push_back(b);
  }
  try {
    encode_binary(cap);
    FAIL("expected InvalidCap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidCap);
  }
}

TEST_CASE("single box at r = 5 fails at H") {
  const BinaryCap cap = single(5);
  const RefutationWitness w = refute_five(cap);
  CHECK_FALSE(w.by_relations());
  REQUIRE(w.chain.size() == 1);
  CHECK(w.chain[0].word.empty());
  REQUIRE(w.failure);
  CHECK(w.failure->word == "H");
  CHECK(w.failure->required == Rational(2));
  CHECK(w.failure->actual == Rational(0));
  CHECK(verify_witness(cap, w).empty());
  audit(cap, w);
}

TEST_CASE("refute_five wants r = 5") {
  CHECK_THROWS_AS(refute_five(single(4)), Error);
}

TEST_CASE("tampered witnesses are rejected") {
  const BinaryCap cap = single(5);
  RefutationWitness w = refute_five(cap);
  w.failure->actual = Rational(3);
  CHECK_FALSE(verify_witness(cap, w).empty());
  w = refute_five(cap);
  w.chain[0].kappa = Rational(7);
  CHECK_FALSE(verify_witness(cap, w).empty());
  w = refute_five(cap);
  w.failure.reset();
  CHECK_FALSE(verify_witness(cap, w).empty());
}

TEST_CASE("shapes") {
  CHECK(binary_shapes(0).size() == 1);
  CHECK(binary_shapes(1).size() == 4);
  CHECK(binary_shapes(2).size() == 25);
  CHECK(binary_shapes(3).size() == 676);
  for (const auto& shape : binary_shapes(2)) {
    for (const Word& w : shape) {
      if (w.empty()) continue;
      CHECK(std::find(shape.begin(), shape.end(), w.substr(0, w.size() - 1)) != shape.end());
    }
  }
}

TEST_CASE("corpus slice: derivation, relations and witnesses") {
  const std::vector<BinaryCap> corpus = refuter_corpus();
  REQUIRE(corpus.size() > 1000);
  std::vector<BinaryCap> slice;
  for (std::size_t i = 0; i < corpus.size(); i += 97) slice.push_back(corpus[i]);
  for (const BinaryCap& cap : slice) {
    CHECK(cap.r == Rational(5));
    const DerivedQuantities q = derive_quantities(cap);
    for (const auto& [w, node] : cap.nodes) {
      if (!cap.present(w)) continue;
      CHECK(q.at(w).beta == walk(cap, w).beta);
      CHECK(q.at(w).pi == walk(cap, w).pi);
    }
    CHECK(check_relations(cap).ok() == (count_violations(cap) == 0));
    const RefutationWitness wit = refute_five(cap);
    CHECK(verify_witness(cap, wit).empty());
    audit(cap, wit);
  }
  const CorpusStats one = refute_corpus(slice, 1);
  const CorpusStats three = refute_corpus(slice, 3);
  CHECK(one.instances == slice.size());
  CHECK(one.inconsistent == 0);
  CHECK(one.invalid_witness == 0);
  CHECK(one.by_relations + one.by_chain == one.instances);
  CHECK(three.by_relations == one.by_relations);
  CHECK(three.by_chain == one.by_chain);
  CHECK(three.max_chain == one.max_chain);
}
