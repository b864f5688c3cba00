#include "ffbench/wall_forge.hpp"

#include <algorithm>
#include <future>
#include <limits>
#include <map>

#include "ffbench/error.hpp"

namespace ffbench {

namespace {

Rational achieved_ratio(const Wall& w) {
  if (w.empty()) return Rational(1);
  return Rational(static_cast<long>(distinct_colors(w.colors)), static_cast<long>(clique_size(w.family)));
}

long to_long(const BigInt& v, const char* what) {
  if (!v.fits_slong_p()) throw Error(ErrorKind::BudgetExceeded, std::string(what) + " does not fit a machine word");
  return v.get_si();
}

// One group of cap vertices sharing a cone strip J.
struct Void {
  Interval J;
  long top_cone;  // the largest c among members
};

class Expander {
 public:
  Expander(const VertexCap& cap, const ExpansionBudget& budget) : cap_(cap), budget_(budget) {
    for (const VertexRun& run : cap.runs) {
      runs_.push_back({run.I, run.J, to_long(run.f_top, "color"), to_long(run.count, "run length"),
                       to_long(run.c, "cone color")});
      deepest_ = std::max(deepest_, -runs_.back().c);
      auto it = std::find_if(voids_.begin(), voids_.end(), [&](const Void& v) { return v.J == run.J; });
      if (it == voids_.end()) {
        voids_.push_back({run.J, runs_.back().c});
      } else {
        it->top_cone = std::max(it->top_cone, runs_.back().c);
      }
      right_edge_ = runs_.size() == 1 ? run.I.hi : max(right_edge_, run.I.hi);
    }
  }

  const Wall& build(std::size_t k) {
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    Wall w = k < static_cast<std::size_t>(deepest_) ? base(k) : step(k);
    return memo_.emplace(k, std::move(w)).first->second;
  }

 private:
  struct Run {
    Interval I;
    Interval J;
    long f_top;
    long count;
    long c;
  };

  void charge(std::size_t n) const {
    if (n > budget_.max_vertices) {
      throw Error(ErrorKind::BudgetExceeded, "expanded wall needs " + std::to_string(n) + " vertices, budget " +
                                                 std::to_string(budget_.max_vertices));
    }
  }

  Wall base(std::size_t k) const {
    charge(k);
    return clique_wall(k);
  }

  Wall step(std::size_t k) {
    const Rational rk = cap_.r * Rational(static_cast<long>(k));
    const Rational b = cap_.r * Rational(deepest_);
    const long keep_from = to_long((b - rk).floor(), "color floor") + 1;
    const long shift = to_long((rk - b).ceil(), "palette shift");

    std::vector<const Wall*> fills;
    std::size_t total = k;
    for (const Run& run : runs_) {
      const long lowest = std::max(run.f_top - run.count + 1, keep_from);
      if (run.f_top >= lowest) total += static_cast<std::size_t>(run.f_top - lowest + 1);
    }
    for (const Void& v : voids_) {
      const long drop = to_long((Rational(-v.top_cone) / cap_.r).floor(), "clique offset");
      fills.push_back(&build(k - static_cast<std::size_t>(drop)));
      total += kept(*fills.back(), v.top_cone, keep_from);
    }
    charge(total);

    Wall out;
    out.family.reserve(total);
    out.colors.reserve(total);
    for (const Run& run : runs_) {
      for (long f = run.f_top; f > run.f_top - run.count && f >= keep_from; --f) {
        out.family.push_back(run.I);
        out.colors.push_back(f + shift);
      }
    }
    auto fill = [&](std::size_t i) { return place(*fills[i], voids_[i], keep_from, shift); };
    if (budget_.parallel_fill && voids_.size() > 1) {
      std::vector<std::future<Wall>> jobs;
      for (std::size_t i = 0; i < voids_.size(); ++i) jobs.push_back(std::async(std::launch::async, fill, i));
      for (auto& job : jobs) append(out, job.get());
    } else {
      for (std::size_t i = 0; i < voids_.size(); ++i) append(out, fill(i));
    }
    const Interval side(right_edge_ + Rational(1), right_edge_ + Rational(2));
    for (std::size_t j = 1; j <= k; ++j) {
      out.family.push_back(side);
      out.colors.push_back(static_cast<Color>(j));
    }
    out.declared_ratio = achieved_ratio(out);
    return out;
  }

  static Color top_color(const Wall& w) {
    return w.colors.empty() ? 0 : *std::max_element(w.colors.begin(), w.colors.end());
  }

  static std::size_t kept(const Wall& w, long top_cone, long keep_from) {
    const Color t = top_color(w);
    std::size_t n = 0;
    for (Color j : w.colors) {
      if (top_cone - t + j >= keep_from) ++n;
    }
    return n;
  }

  // Squeeze into the middle third of J, recolor from the cone down.
  static Wall place(const Wall& w, const Void& v, long keep_from, long shift) {
    Wall out;
    if (w.empty()) return out;
    const Rational third = v.J.length() / Rational(3);
    const IntervalFamily fam = squeeze(w.family, Interval(v.J.lo + third, v.J.hi - third));
    const Color t = top_color(w);
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const Color c = v.top_cone - t + w.colors[i];
      if (c < keep_from) continue;
      out.family.push_back(fam[i]);
      out.colors.push_back(c + shift);
    }
    return out;
  }

  static void append(Wall& out, Wall part) {
    out.family.insert(out.family.end(), std::make_move_iterator(part.family.begin()),
                      std::make_move_iterator(part.family.end()));
    out.colors.insert(out.colors.end(), part.colors.begin(), part.colors.end());
  }

  const VertexCap& cap_;
  ExpansionBudget budget_;
  std::vector<Run> runs_;
  std::vector<Void> voids_;
  long deepest_ = 0;
  Rational right_edge_;
  std::map<std::size_t, Wall> memo_;
};

}  // namespace

Wall clique_wall(std::size_t k) {
  Wall w;
  for (std::size_t i = 0; i < k; ++i) {
    w.family.push_back({Rational(0), Rational(1)});
    w.colors.push_back(static_cast<Color>(i + 1));
  }
  return w;
}

Wall drop_color(const Wall& wall, ColorEnd end) {
  if (wall.empty()) throw Error(ErrorKind::EmptyInput, "cannot drop a color from an empty wall");
  const auto [lo, hi] = std::minmax_element(wall.colors.begin(), wall.colors.end());
  const Color gone = end == ColorEnd::Highest ? *hi : *lo;
  Wall out;
  for (std::size_t v = 0; v < wall.size(); ++v) {
    if (wall.colors[v] == gone) continue;
    out.family.push_back(wall.family[v]);
    out.colors.push_back(end == ColorEnd::Lowest ? wall.colors[v] - 1 : wall.colors[v]);
  }
  out.declared_ratio = achieved_ratio(out);
  return out;
}

std::size_t tower_size(std::size_t i) {
  std::size_t n = 1;
  constexpr std::size_t cap = std::numeric_limits<std::size_t>::max() / 8;
  for (std::size_t level = 0; level < i; ++level) {
    n = n > cap ? cap : 4 * n + 4;
  }
  return n;
}

Wall tower_wall(std::size_t i, std::size_t max_vertices) {
  if (tower_size(i) > max_vertices) {
    throw Error(ErrorKind::BudgetExceeded, "tower " + std::to_string(i) + " needs " + std::to_string(tower_size(i)) +
                                               " vertices, budget " + std::to_string(max_vertices));
  }
  Wall w;
  w.family.push_back({Rational(0), Rational(1)});
  w.colors.push_back(1);
  for (std::size_t level = 1; level <= i; ++level) {
    const Color m = static_cast<Color>(3 * (level - 1) + 1);
    Wall next;
    for (long slot : {1, 4, 7, 10}) {
      const IntervalFamily copy = squeeze(w.family, Interval(Rational(slot), Rational(slot + 1)));
      next.family.insert(next.family.end(), copy.begin(), copy.end());
      next.colors.insert(next.colors.end(), w.colors.begin(), w.colors.end());
    }
    const std::pair<long, Color> tops[] = {{0, m + 1}, {3, m + 2}, {6, m + 3}, {9, m + 1}};
    for (const auto& [start, color] : tops) {
      next.family.push_back({Rational(start), Rational(start + 3)});
      next.colors.push_back(color);
    }
    w = std::move(next);
  }
  w.declared_ratio = Rational(static_cast<long>(3 * i + 1), static_cast<long>(i + 1));
  return w;
}

ExpansionConstants expansion_constants(const VertexCap& cap) {
  BigInt deepest = 0;
  for (const VertexRun& run : cap.runs) {
    if (deepest < -run.c) deepest = -run.c;
  }
  const Rational c(deepest);
  return {c, cap.r * c};
}

Wall cap_to_wall(const VertexCap& cap, std::size_t k, const ExpansionBudget& budget) {
  const CapReport report = verify_vertex_cap(cap);
  if (!report.ok()) {
    const CapViolation& v = report.violations.front();
    throw Error(ErrorKind::InvalidCap, v.condition + " at vertex " + std::to_string(v.id) + ": " + v.witness);
  }
  if (budget.max_vertices < 1) throw Error(ErrorKind::InvalidArgument, "vertex budget must be positive");
  if (cap.vertex_count() > BigInt(static_cast<unsigned long>(budget.max_vertices))) {
    throw Error(ErrorKind::BudgetExceeded, "cap alone exceeds the vertex budget");
  }
  Expander ex(cap, budget);
  return ex.build(k);
}

}  // namespace ffbench
