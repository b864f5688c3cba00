#pragma once

#include <cstddef>

#include "ffbench/cap_geometry.hpp"
#include "ffbench/ivg.hpp"

namespace ffbench {

struct ExpansionBudget {
  std::size_t max_vertices = 1'000'000;
  bool parallel_fill = false;
};

struct ExpansionConstants {
  Rational c;  // deepest cone depth
  Rational b;  // r * c
};

enum class ColorEnd { Highest, Lowest };

constexpr std::size_t kDefaultTowerBudget = 1'000'000;

Wall clique_wall(std::size_t k);

Wall drop_color(const Wall& wall, ColorEnd end);

/// Vertex count of T_i without building it.
std::size_t tower_size(std::size_t i);

Wall tower_wall(std::size_t i, std::size_t max_vertices = kDefaultTowerBudget);

ExpansionConstants expansion_constants(const VertexCap& cap);

/// Wall of clique size k with at least ceil(r k - b) colors.
Wall cap_to_wall(const VertexCap& cap, std::size_t k, const ExpansionBudget& budget = {});

}  // namespace ffbench
