#include <algorithm>
#include <map>
#include <set>

#include "ffbench/cap_geometry.hpp"
#include "ffbench/error.hpp"

namespace ffbench {

namespace {

[[noreturn]] void unembeddable(const std::string& why) { throw Error(ErrorKind::Unembeddable, why); }

struct Node {
  const SkeletonBox* box = nullptr;
  std::optional<std::size_t> left;
  std::optional<std::size_t> right;
};

bool depth_overlap(const SkeletonBox& a, const SkeletonBox& b) {
  return max(a.top, b.top) < min(a.top + a.height, b.top + b.height);
}

}  // namespace

BoxCap assign_layout(const Skeleton& skeleton) {
  const auto& boxes = skeleton.boxes;
  const std::size_t n = boxes.size();
  if (n == 0) throw Error(ErrorKind::EmptyInput, "skeleton has no boxes");
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(boxes[i].id, i).second) unembeddable("duplicate box id " + std::to_string(boxes[i].id));
  }
  auto at = [&](int id) {
    auto it = index.find(id);
    if (it == index.end()) unembeddable("unknown box id " + std::to_string(id));
    return it->second;
  };

  std::vector<Node> nodes(n);
  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].box = &boxes[i];
    if (!boxes[i].supports) {
      if (root) unembeddable("more than one box supports nothing");
      root = i;
    }
  }
  if (!root) unembeddable("no top box");
  for (std::size_t i = 0; i < n; ++i) {
    if (!boxes[i].supports) continue;
    Node& parent = nodes[at(*boxes[i].supports)];
    auto& slot = boxes[i].attach == Side::Left ? parent.left : parent.right;
    if (boxes[i].attach == Side::Center) unembeddable("box " + std::to_string(boxes[i].id) + " has no attach side");
    if (slot) unembeddable("two supporters attached on one side of box " + std::to_string(*boxes[i].supports));
    slot = i;
  }

  // Cone slots in left-to-right order.
  std::vector<std::size_t> slot_of(n, n);
  std::size_t next = 0;
  std::vector<std::pair<std::size_t, bool>> stack{{*root, false}};
  while (!stack.empty()) {
    auto [i, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      slot_of[i] = next++;
      continue;
    }
    if (nodes[i].right) stack.push_back({*nodes[i].right, false});
    stack.push_back({i, true});
    if (nodes[i].left) stack.push_back({*nodes[i].left, false});
  }
  if (next != n) unembeddable("support links do not form a tree");

  // Cones that each box must lie above.
  std::vector<std::vector<std::size_t>> seen_by(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::set<std::size_t> ws{c};
    for (int id : boxes[c].weight_set) ws.insert(at(id));
    for (std::size_t b : ws) seen_by[b].push_back(c);
  }
  std::vector<std::size_t> lo(n), hi(n);
  for (std::size_t b = 0; b < n; ++b) {
    std::size_t a = n, z = 0;
    const Rational bottom = boxes[b].top + boxes[b].height;
    for (std::size_t c : seen_by[b]) {
      a = std::min(a, slot_of[c]);
      z = std::max(z, slot_of[c]);
      if (boxes[c].cone_depth < bottom) {
        unembeddable("box " + std::to_string(boxes[b].id) + " must lie above the cone of box " +
                     std::to_string(boxes[c].id) + " but reaches below it");
      }
    }
    if (z - a + 1 != seen_by[b].size()) {
      unembeddable("cones seeing box " + std::to_string(boxes[b].id) + " are not contiguous");
    }
    lo[b] = a;
    hi[b] = z;
  }
  for (std::size_t b = 0; b < n; ++b) {
    if (!boxes[b].supports) continue;
    const std::size_t p = at(*boxes[b].supports);
    if (hi[b] + 1 < lo[p] || hi[p] + 1 < lo[b]) {
      unembeddable("box " + std::to_string(boxes[b].id) + " cannot reach the box it supports");
    }
  }

  // Extents in sixths of a slot; an inset is one unit.
  std::vector<long> xlo(n), xhi(n);
  for (std::size_t b = 0; b < n; ++b) {
    xlo[b] = static_cast<long>(6 * lo[b]);
    xhi[b] = static_cast<long>(6 * hi[b] + 6);
  }
  auto partners = [&](std::size_t b) {
    std::vector<std::size_t> out;
    if (boxes[b].supports) out.push_back(at(*boxes[b].supports));
    if (nodes[b].left) out.push_back(*nodes[b].left);
    if (nodes[b].right) out.push_back(*nodes[b].right);
    return out;
  };
  auto leans_right = [&](std::size_t b) {
    for (std::size_t p : partners(b)) {
      if (xlo[p] == xhi[b]) return true;
    }
    return false;
  };
  auto leans_left = [&](std::size_t b) {
    for (std::size_t p : partners(b)) {
      if (xhi[p] == xlo[b]) return true;
    }
    return false;
  };
  // deeper boxes give way first
  auto deeper = [&](std::size_t a, std::size_t b) {
    if (boxes[a].top != boxes[b].top) return boxes[b].top < boxes[a].top;
    return boxes[b].height < boxes[a].height;
  };
  std::multimap<long, std::size_t> by_lo;
  for (std::size_t b = 0; b < n; ++b) by_lo.emplace(xlo[b], b);
  for (std::size_t a = 0; a < n; ++a) {
    auto [first, last] = by_lo.equal_range(xhi[a]);
    for (auto it = first; it != last; ++it) {
      const std::size_t b = it->second;
      if (!depth_overlap(boxes[a], boxes[b]) || xhi[a] != xlo[b]) continue;
      const bool can_a = !leans_right(a);
      const bool can_b = !leans_left(b);
      const bool prefer_a = deeper(a, b) || !can_b;
      if (prefer_a && can_a) {
        xhi[a] -= 1;
      } else if (can_b) {
        xlo[b] += 1;
      } else {
        unembeddable("boxes " + std::to_string(boxes[a].id) + " and " + std::to_string(boxes[b].id) +
                     " touch at a shared depth and cannot be separated");
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xlo[a] < xlo[b]; });
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = order[i];
    for (std::size_t j = i + 1; j < n && xlo[order[j]] <= xhi[a]; ++j) {
      const std::size_t b = order[j];
      if (depth_overlap(boxes[a], boxes[b])) {
        unembeddable("boxes " + std::to_string(boxes[a].id) + " and " + std::to_string(boxes[b].id) +
                     " would share area");
      }
    }
  }

  const Rational unit(1L, static_cast<long>(6 * n));
  BoxCap cap{skeleton.r, {}};
  cap.boxes.reserve(n);
  for (std::size_t b = 0; b < n; ++b) {
    const SkeletonBox& s = boxes[b];
    const long k = static_cast<long>(slot_of[b]);
    cap.boxes.push_back({s.id, Interval(Rational(xlo[b]) * unit, Rational(xhi[b]) * unit), s.top, s.height, s.cone_depth,
                         Interval(Rational(6 * k + 2) * unit, Rational(6 * k + 4) * unit), s.supports, s.side,
                         s.attach});
  }
  return cap;
}

}  // namespace ffbench
