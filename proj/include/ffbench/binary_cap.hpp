#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffbench/cap_geometry.hpp"
#include "ffbench/rational.hpp"

namespace ffbench {

/// Word over {H, L}; the empty string is the top box.
using Word = std::string;

/// Shorter words first, then lexicographic.
struct ShortLex {
  bool operator()(const Word& a, const Word& b) const {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  }
};

struct BinaryCapNode {
  Word word;
  Rational kappa;  // 0 means the box is absent
  Rational tau;
  friend bool operator==(const BinaryCapNode&, const BinaryCapNode&) = default;
};

struct BinaryCap {
  Rational r;
  std::map<Word, BinaryCapNode, ShortLex> nodes;

  bool present(const Word& w) const;
  Rational kappa(const Word& w) const;
  void set(const Word& w, Rational kappa, Rational tau);
  friend bool operator==(const BinaryCap&, const BinaryCap&) = default;
};

struct NodeQuantities {
  Rational beta;
  Rational pi;
  Rational alpha() const { return beta + pi; }
};

/// beta and pi for every present word, plus both children of each present word.
using DerivedQuantities = std::map<Word, NodeQuantities, ShortLex>;

DerivedQuantities derive_quantities(const BinaryCap& cap);

/// tau of the low child, or the cone depth r(beta + kappa) when it is absent.
Rational low_child_tau(const BinaryCap& cap, const DerivedQuantities& q, const Word& v);

struct RelationViolation {
  Word word;          // the parent v
  std::string relation;  // Cap-lambda, L-kappa, H-kappa, H-tau
  Rational lhs;
  Rational rhs;       // lhs >= rhs (or lhs == rhs for equalities) fails
  friend bool operator==(const RelationViolation&, const RelationViolation&) = default;
};

struct RelationReport {
  std::vector<RelationViolation> violations;
  bool ok() const { return violations.empty(); }
};

RelationReport check_relations(const BinaryCap& cap);

BigInt fibonacci(unsigned n);

struct HardLink {
  Word word;
  Word base;      // u, with word = u H^m
  unsigned m = 0;
  Rational pi;    // H0: pi >= 0
  Rational kappa;
  Rational h1_bound;  // H1: kappa >= 2 pi - pi_u f_m
  Rational tau;
  Rational h2_bound;  // H2: tau <= 5 beta + 2 pi + pi_u f_{m+1}
  Rational fib_bound;  // kappa >= pi_u f_{m+3}
  friend bool operator==(const HardLink&, const HardLink&) = default;
};

struct ChainFailure {
  Word word;
  Rational required;
  bool strict = false;  // kappa > required instead of >=
  Rational actual;
  friend bool operator==(const ChainFailure&, const ChainFailure&) = default;
};

/// Either the relation report refutes the cap, or a hard chain ends at a failure.
struct RefutationWitness {
  std::vector<RelationViolation> relations;
  std::vector<HardLink> chain;
  std::optional<ChainFailure> failure;

  bool by_relations() const { return !relations.empty(); }
  friend bool operator==(const RefutationWitness&, const RefutationWitness&) = default;
};

RefutationWitness refute_five(const BinaryCap& cap);

/// Re-checks every number in the witness against the cap; empty means valid.
std::vector<std::string> verify_witness(const BinaryCap& cap, const RefutationWitness& w);

/// Words follow the support tree: two supporters split by which one sits higher.
BinaryCap encode_binary(const BoxCap& cap);

struct CorpusStats {
  std::size_t instances = 0;
  std::size_t by_relations = 0;
  std::size_t by_chain = 0;
  std::size_t inconsistent = 0;
  std::size_t invalid_witness = 0;
  std::size_t max_chain = 0;
};

/// All prefix-closed shapes of word length at most `depth`.
std::vector<std::vector<Word>> binary_shapes(unsigned depth);

/// Exhaustive for small shapes, seeded samples for the rest; r = 5.
std::vector<BinaryCap> refuter_corpus();

CorpusStats refute_corpus(const std::vector<BinaryCap>& corpus, unsigned jobs = 1);

}  // namespace ffbench
