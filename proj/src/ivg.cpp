#include "ffbench/ivg.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "ffbench/error.hpp"

namespace ffbench {

namespace {

struct Event {
  const Rational* at;
  int kind;  // 0 = open, 1 = close
  std::size_t id;
};

std::vector<Event> sorted_events(const IntervalFamily& family) {
  std::vector<Event> events;
  events.reserve(2 * family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    events.push_back({&family[i].lo, 0, i});
    events.push_back({&family[i].hi, 1, i});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    const int c = cmp(a.at->raw(), b.at->raw());
    if (c != 0) return c < 0;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.id < b.id;
  });
  return events;
}

}  // namespace

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "interval with hi < lo");
}

std::size_t clique_size(const IntervalFamily& family) {
  if (family.empty()) throw Error(ErrorKind::EmptyInput, "clique size of an empty family");
  std::size_t open = 0;
  std::size_t best = 0;
  for (const Event& e : sorted_events(family)) {
    if (e.kind == 0) {
      best = std::max(best, ++open);
    } else {
      --open;
    }
  }
  return best;
}

std::vector<std::vector<std::size_t>> adjacency(const IntervalFamily& family) {
  std::vector<std::vector<std::size_t>> adj(family.size());
  std::vector<std::size_t> active;
  std::vector<std::size_t> slot(family.size(), 0);
  for (const Event& e : sorted_events(family)) {
    if (e.kind == 0) {
      for (std::size_t u : active) {
        adj[u].push_back(e.id);
        adj[e.id].push_back(u);
      }
      slot[e.id] = active.size();
      active.push_back(e.id);
    } else {
      const std::size_t pos = slot[e.id];
      active[pos] = active.back();
      slot[active[pos]] = pos;
      active.pop_back();
    }
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

Coloring first_fit(const std::vector<std::vector<std::size_t>>& adj,
                   const std::vector<std::size_t>& order) {
  const std::size_t n = adj.size();
  if (order.size() != n) throw Error(ErrorKind::BadOrder, "order length differs from vertex count");
  std::vector<char> seen(n, 0);
  for (std::size_t v : order) {
    if (v >= n || seen[v]) throw Error(ErrorKind::BadOrder, "order is not a permutation");
    seen[v] = 1;
  }
  Coloring colors(n, 0);
  std::vector<std::size_t> stamp(n + 2, n);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t v = order[step];
    for (std::size_t u : adj[v]) {
      const Color c = colors[u];
      if (c > 0 && static_cast<std::size_t>(c) < stamp.size()) stamp[c] = step;
    }
    Color c = 1;
    while (stamp[c] == step) ++c;
    colors[v] = c;
  }
  return colors;
}

Coloring first_fit(const IntervalFamily& family, const std::vector<std::size_t>& order) {
  return first_fit(adjacency(family), order);
}

std::vector<std::size_t> color_sorted_order(const Wall& wall) {
  std::vector<std::size_t> order(wall.colors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return wall.colors[a] < wall.colors[b];
  });
  return order;
}

std::size_t distinct_colors(const Coloring& colors) {
  return std::set<Color>(colors.begin(), colors.end()).size();
}

WallReport verify_wall(const Wall& wall) {
  WallReport report;
  auto flag = [&](std::optional<std::size_t> v, std::string why) {
    report.violations.push_back({v, std::move(why)});
  };
  const std::size_t n = wall.family.size();
  if (wall.colors.size() != n) {
    flag(std::nullopt, "coloring covers " + std::to_string(wall.colors.size()) + " of " +
                           std::to_string(n) + " vertices");
    return report;
  }
  if (n == 0) return report;

  report.clique_size = clique_size(wall.family);
  report.color_count = distinct_colors(wall.colors);
  report.ratio = Rational(static_cast<long>(report.color_count), static_cast<long>(report.clique_size));

  const auto adj = adjacency(wall.family);
  bool positive = true;
  for (std::size_t v = 0; v < n; ++v) {
    if (wall.colors[v] < 1) {
      positive = false;
      flag(v, "color " + std::to_string(wall.colors[v]) + " is not positive");
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u : adj[v]) {
      if (u < v && wall.colors[u] == wall.colors[v]) {
        flag(v, "improper: shares color " + std::to_string(wall.colors[v]) + " with neighbor " +
                    std::to_string(u));
      }
    }
  }
  std::vector<std::size_t> stamp(n + 2, n);
  for (std::size_t v = 0; v < n; ++v) {
    const Color f = wall.colors[v];
    if (f < 1) continue;
    if (static_cast<std::size_t>(f) > n) {
      flag(v, "support: color " + std::to_string(f) + " exceeds closed neighborhood size");
      continue;
    }
    stamp[f] = v;
    for (std::size_t u : adj[v]) {
      const Color c = wall.colors[u];
      if (c >= 1 && c < f) stamp[c] = v;
    }
    for (Color c = 1; c < f; ++c) {
      if (stamp[c] != v) {
        flag(v, "support: no neighbor of color " + std::to_string(c));
        break;
      }
    }
  }
  const Rational need = wall.declared_ratio * Rational(static_cast<long>(report.clique_size));
  if (Rational(static_cast<long>(report.color_count)) < need) {
    flag(std::nullopt, "color count " + std::to_string(report.color_count) + " below " +
                           wall.declared_ratio.str() + " x clique size " +
                           std::to_string(report.clique_size));
  }
  if (positive) {
    const Coloring replay = first_fit(adj, color_sorted_order(wall));
    for (std::size_t v = 0; v < n; ++v) {
      if (replay[v] != wall.colors[v]) {
        flag(v, "first-fit replay assigns " + std::to_string(replay[v]) + " instead of " +
                    std::to_string(wall.colors[v]));
      }
    }
  }
  return report;
}

Interval bounding_interval(const IntervalFamily& family) {
  if (family.empty()) throw Error(ErrorKind::EmptyInput, "bounding interval of an empty family");
  Rational lo = family.front().lo;
  Rational hi = family.front().hi;
  for (const Interval& iv : family) {
    if (iv.lo < lo) lo = iv.lo;
    if (hi < iv.hi) hi = iv.hi;
  }
  return {lo, hi};
}

IntervalFamily squeeze(const IntervalFamily& family, const Interval& target) {
  if (target.length().sign() <= 0) throw Error(ErrorKind::DegenerateTarget, "target has no length");
  if (family.empty()) return {};
  const Interval box = bounding_interval(family);
  IntervalFamily out;
  out.reserve(family.size());
  if (box.length().sign() == 0) {
    for (std::size_t i = 0; i < family.size(); ++i) out.push_back(target);
    return out;
  }
  const Rational scale = target.length() / box.length();
  for (const Interval& iv : family) {
    out.push_back({target.lo + (iv.lo - box.lo) * scale, target.lo + (iv.hi - box.lo) * scale});
  }
  return out;
}

}  // namespace ffbench
