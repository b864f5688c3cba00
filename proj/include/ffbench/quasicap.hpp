#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ffbench/cap_geometry.hpp"
#include "ffbench/rational.hpp"

namespace ffbench {

struct StrandParams {
  Rational r;
  Rational theta;
  Rational delta;
};

struct StopResult {
  enum class Kind { Stopped, Diverged, PatternBroken };
  Kind kind = Kind::Diverged;
  std::size_t n = 0;

  bool stopped() const { return kind == Kind::Stopped; }
  friend bool operator==(const StopResult&, const StopResult&) = default;
};

constexpr std::size_t kDefaultCutoff = 10'000;
// Working integers beyond this many bits end the scan as Diverged.
constexpr std::size_t kDefaultBitBudget = 1u << 12;
constexpr std::size_t kDefaultBoxBudget = 20'000;

/// u_0 .. u_{limit-1}.
std::vector<Rational> strand_sequence(const StrandParams& p, std::size_t limit);

StopResult find_stop(const StrandParams& p, std::size_t cutoff = kDefaultCutoff,
                     std::size_t bit_budget = kDefaultBitBudget);

Quasicap initial_quasicap(const Rational& r);

Quasicap gap_step(const Quasicap& qc, const Rational& delta, std::size_t cutoff = kDefaultCutoff,
                  std::size_t box_budget = kDefaultBoxBudget);

struct RecipeStep {
  Rational theta;
  Rational delta;
  std::size_t N = 0;
  friend bool operator==(const RecipeStep&, const RecipeStep&) = default;
};

struct Recipe {
  Rational r;
  std::vector<RecipeStep> steps;
  friend bool operator==(const Recipe&, const Recipe&) = default;
};

struct CertifyOptions {
  Rational delta0{1};
  std::size_t cutoff = kDefaultCutoff;
  Rational delta_min{BigInt(1), BigInt(1) << 20};
  std::size_t box_budget = kDefaultBoxBudget;
  std::size_t bit_budget = kDefaultBitBudget;
  bool geometric = false;
  unsigned jobs = 1;
};

struct Certification {
  Recipe recipe;
  std::optional<Quasicap> cap;
};

Certification certify_r(const Rational& r, const CertifyOptions& options = {});

/// Runs a recipe through gap_step from the initial quasicap.
Quasicap execute_recipe(const Recipe& recipe, std::size_t cutoff = kDefaultCutoff,
                        std::size_t box_budget = kDefaultBoxBudget);

}  // namespace ffbench
