#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffbench/rational.hpp"

namespace ffbench {

/// Closed interval [lo, hi] with exact endpoints.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational l, Rational h);

  bool intersects(const Interval& o) const { return max(lo, o.lo) <= min(hi, o.hi); }
  bool contains(const Rational& p) const { return lo <= p && p <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  Rational length() const { return hi - lo; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Vertex ids are the indices 0..n-1.
using IntervalFamily = std::vector<Interval>;

using Color = std::int64_t;
using Coloring = std::vector<Color>;

struct Wall {
  IntervalFamily family;
  Coloring colors;
  Rational declared_ratio{1};

  std::size_t size() const { return family.size(); }
  bool empty() const { return family.empty(); }
  friend bool operator==(const Wall&, const Wall&) = default;
};

struct WallViolation {
  std::optional<std::size_t> vertex;
  std::string reason;
};

struct WallReport {
  std::size_t clique_size = 0;
  std::size_t color_count = 0;
  Rational ratio{0};
  std::vector<WallViolation> violations;

  bool ok() const { return violations.empty(); }
};

std::size_t clique_size(const IntervalFamily& family);

/// Neighbor lists of the intersection graph, each sorted ascending.
std::vector<std::vector<std::size_t>> adjacency(const IntervalFamily& family);

Coloring first_fit(const IntervalFamily& family, const std::vector<std::size_t>& order);
Coloring first_fit(const std::vector<std::vector<std::size_t>>& adj,
                   const std::vector<std::size_t>& order);

std::vector<std::size_t> color_sorted_order(const Wall& wall);

WallReport verify_wall(const Wall& wall);

/// Smallest interval containing every member; family must be nonempty.
Interval bounding_interval(const IntervalFamily& family);

IntervalFamily squeeze(const IntervalFamily& family, const Interval& target);

std::size_t distinct_colors(const Coloring& colors);

}  // namespace ffbench
