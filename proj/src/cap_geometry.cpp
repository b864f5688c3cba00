#include "ffbench/cap_geometry.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ffbench/error.hpp"

namespace ffbench {

namespace {

struct Range {
  Rational lo;
  Rational hi;
};

Rational union_measure(std::vector<Range> ranges) {
  std::sort(ranges.begin(), ranges.end(), [](const Range& a, const Range& b) { return a.lo < b.lo; });
  Rational total;
  std::optional<Range> cur;
  for (const Range& r : ranges) {
    if (r.hi <= r.lo) continue;
    if (cur && r.lo <= cur->hi) {
      if (cur->hi < r.hi) cur->hi = r.hi;
    } else {
      if (cur) total += cur->hi - cur->lo;
      cur = r;
    }
  }
  if (cur) total += cur->hi - cur->lo;
  return total;
}

// First point of [from, to] not covered by the ranges, if any.
std::optional<Rational> first_gap(std::vector<Range> ranges, const Rational& from, const Rational& to) {
  std::sort(ranges.begin(), ranges.end(), [](const Range& a, const Range& b) { return a.lo < b.lo; });
  Rational reach = from;
  for (const Range& r : ranges) {
    if (reach >= to) break;
    if (reach < r.lo) return reach;
    if (reach < r.hi) reach = r.hi;
  }
  if (reach < to) return reach;
  return std::nullopt;
}

std::string show(const Interval& iv) { return "[" + iv.lo.str() + ", " + iv.hi.str() + "]"; }

}  // namespace

char side_char(Side s) {
  switch (s) {
    case Side::Left: return 'L';
    case Side::Right: return 'R';
    case Side::Center: return 'C';
  }
  return 'C';
}

Side side_from_char(char c) {
  switch (c) {
    case 'L': return Side::Left;
    case 'R': return Side::Right;
    case 'C': return Side::Center;
    default: throw Error(ErrorKind::ParseError, std::string("unknown side '") + c + "'");
  }
}

const CapBox& BoxCap::box(int id) const {
  for (const CapBox& b : boxes) {
    if (b.id == id) return b;
  }
  throw Error(ErrorKind::InvalidArgument, "no box with id " + std::to_string(id));
}

CapBox& BoxCap::box(int id) {
  return const_cast<CapBox&>(static_cast<const BoxCap&>(*this).box(id));
}

Rational BoxCap::total_height() const {
  Rational sum;
  for (const CapBox& b : boxes) sum += b.height;
  return sum;
}

bool CapReport::has(const std::string& condition) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const CapViolation& v) { return v.condition == condition; });
}

CapReport verify_box_cap(const BoxCap& cap, const BoxCapOptions& options) {
  CapReport report;
  auto flag = [&](long id, const char* condition, std::string witness) {
    report.violations.push_back({id, condition, std::move(witness)});
  };
  const auto& boxes = cap.boxes;
  if (boxes.empty()) {
    flag(-1, "nonempty", "cap has no boxes");
    return report;
  }
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!index.emplace(boxes[i].id, i).second) flag(boxes[i].id, "local", "duplicate box id");
  }
  bool has_top = false;
  for (const CapBox& b : boxes) {
    if (b.top.sign() == 0) has_top = true;
    if (b.top.sign() < 0) flag(b.id, "local", "top " + b.top.str() + " above the cap top");
    if (b.height.sign() <= 0) flag(b.id, "local", "height " + b.height.str() + " is not positive");
    if (b.cone_depth < b.bottom()) {
      flag(b.id, "emptiness", "cone at " + b.cone_depth.str() + " above box bottom " + b.bottom().str());
    }
    if (!b.x.contains(b.cone_x)) flag(b.id, "local", "cone strip " + show(b.cone_x) + " outside " + show(b.x));
    if (b.cone_x.length().sign() <= 0) flag(b.id, "local", "cone strip has no width");
    if (b.supports && (*b.supports == b.id || !index.count(*b.supports))) {
      flag(b.id, "local", "supports unknown box " + std::to_string(*b.supports));
    }
  }
  if (!has_top) flag(-1, "local", "no box at depth 0");

  for (const CapBox& c : boxes) {
    // Emptiness: nothing meeting the strip reaches below the cone.
    for (const CapBox& b : boxes) {
      if (b.x.intersects(c.cone_x) && c.cone_depth < b.bottom()) {
        flag(c.id, "emptiness",
             "box " + std::to_string(b.id) + " reaches depth " + b.bottom().str() + " below cone at " +
                 c.cone_depth.str());
      }
    }
    // Sparseness, cell by cell across the strip.
    std::set<Rational> marks{c.cone_x.lo, c.cone_x.hi};
    for (const CapBox& b : boxes) {
      for (const Rational* e : {&b.x.lo, &b.x.hi}) {
        if (c.cone_x.lo < *e && *e < c.cone_x.hi) marks.insert(*e);
      }
    }
    std::vector<Rational> probes(marks.begin(), marks.end());
    for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
      probes.push_back((probes[i] + probes[i + 1]) / Rational(2));
    }
    for (const Rational& p : probes) {
      std::vector<Range> above;
      for (const CapBox& b : boxes) {
        if (b.x.contains(p) && b.top < c.cone_depth) {
          above.push_back({max(b.top, Rational(0)), min(b.bottom(), c.cone_depth)});
        }
      }
      const Rational w = union_measure(std::move(above));
      if (c.cone_depth < cap.r * w) {
        flag(c.id, "sparseness",
             "at x=" + p.str() + " weight " + w.str() + " needs depth " + (cap.r * w).str() +
                 ", cone at " + c.cone_depth.str());
        break;
      }
    }
    // Support.
    std::vector<Range> cover;
    int supporters = 0;
    for (const CapBox& b : boxes) {
      if (b.supports && *b.supports == c.id) {
        ++supporters;
        if (!b.x.intersects(c.x)) {
          flag(c.id, "support", "supporter " + std::to_string(b.id) + " does not meet it horizontally");
        }
        cover.push_back({b.top, b.bottom()});
      }
    }
    if (supporters > 2) flag(c.id, "support", std::to_string(supporters) + " supporters");
    for (const SupportWaiver& w : options.waivers) {
      if (w.box == c.id) cover.push_back({w.from, w.to});
    }
    if (auto gap = first_gap(std::move(cover), c.bottom(), c.cone_depth)) {
      flag(c.id, "support", "depth " + gap->str() + " between bottom " + c.bottom().str() +
                                " and cone " + c.cone_depth.str() + " is uncovered");
    }
  }
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      const CapBox& a = boxes[i];
      const CapBox& b = boxes[j];
      if (!a.x.intersects(b.x)) continue;
      if (max(a.top, b.top) < min(a.bottom(), b.bottom())) {
        flag(std::min(a.id, b.id), "overlap",
             "boxes " + std::to_string(a.id) + " and " + std::to_string(b.id) + " share area");
      }
    }
  }
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const CapViolation& a, const CapViolation& b) { return a.id < b.id; });
  return report;
}

std::vector<int> weight_set_of(const BoxCap& cap, int cone_owner) {
  const CapBox& c = cap.box(cone_owner);
  std::vector<int> out;
  for (const CapBox& b : cap.boxes) {
    if (b.x.intersects(c.cone_x) && b.top < c.cone_depth) out.push_back(b.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Skeleton skeleton_of(const BoxCap& cap) {
  Skeleton sk{cap.r, {}};
  for (const CapBox& b : cap.boxes) {
    sk.boxes.push_back({b.id, b.top, b.height, b.cone_depth, b.supports, b.side, b.attach,
                        weight_set_of(cap, b.id)});
  }
  return sk;
}

BoxCap build_cs_4cap() {
  struct Row {
    int top, height, cone, supports;
    Side attach;
    std::vector<int> weight;
  };
  // Right side, ids 2..9; box 1 is the lower twin.
  const std::vector<Row> right = {
      {2, 2, 8, 1, Side::Right, {}},     {7, 1, 8, 2, Side::Left, {1}},
      {4, 3, 12, 2, Side::Right, {}},    {11, 1, 12, 4, Side::Left, {2}},
      {7, 4, 16, 4, Side::Right, {}},    {15, 1, 16, 6, Side::Left, {4}},
      {11, 4, 16, 6, Side::Right, {}},   {15, 1, 16, 8, Side::Right, {}},
  };
  Skeleton sk;
  sk.r = Rational(4);
  sk.boxes.push_back({0, Rational(0), Rational(1), Rational(4), std::nullopt, Side::Center, Side::Center, {}});
  sk.boxes.push_back({1, Rational(1), Rational(1), Rational(4), 0, Side::Center, Side::Right, {}});
  const int shift = static_cast<int>(right.size());
  auto mirror_id = [&](int id) { return id == 1 ? 0 : id + shift; };
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < right.size(); ++i) {
      const Row& row = right[i];
      const int id = 2 + static_cast<int>(i);
      SkeletonBox b{pass == 0 ? id : id + shift, Rational(row.top), Rational(row.height), Rational(row.cone),
                    pass == 0 ? row.supports : mirror_id(row.supports),
                    pass == 0 ? Side::Right : Side::Left, row.attach, {}};
      if (pass == 1) b.attach = row.attach == Side::Left ? Side::Right : Side::Left;
      for (int w : row.weight) b.weight_set.push_back(pass == 0 ? w : mirror_id(w));
      sk.boxes.push_back(std::move(b));
    }
  }
  return assign_layout(sk);
}

BoxCap build_two_box_cap() {
  Skeleton sk;
  sk.r = Rational(2);
  sk.boxes.push_back({0, Rational(0), Rational(1), Rational(2), std::nullopt, Side::Center, Side::Center, {}});
  sk.boxes.push_back({1, Rational(1), Rational(1), Rational(2), 0, Side::Right, Side::Right, {}});
  return assign_layout(sk);
}

BoxCap scale_to_integers(const BoxCap& cap) {
  BigInt l = 1;
  for (const CapBox& b : cap.boxes) {
    l = lcm(l, b.top.den());
    l = lcm(l, b.height.den());
    l = lcm(l, b.cone_depth.den());
  }
  BoxCap out = cap;
  const Rational k(l);
  for (CapBox& b : out.boxes) {
    b.top *= k;
    b.height *= k;
    b.cone_depth *= k;
  }
  return out;
}

CapReport verify_quasicap(const Quasicap& qc) {
  const BoxCap& cap = qc.cap;
  const Rational gap_end = cap.r - qc.theta;
  BoxCapOptions options;
  if (Rational(2) < gap_end) {
    options.waivers.push_back({qc.twin_top, Rational(2), gap_end});
    options.waivers.push_back({qc.twin_low, Rational(2), gap_end});
  }
  CapReport report = verify_box_cap(cap, options);
  auto flag = [&](long id, const char* condition, std::string witness) {
    report.violations.push_back({id, condition, std::move(witness)});
  };
  const CapBox* top = nullptr;
  const CapBox* low = nullptr;
  const CapBox* key = nullptr;
  for (const CapBox& b : cap.boxes) {
    if (b.id == qc.twin_top) top = &b;
    if (b.id == qc.twin_low) low = &b;
    if (b.id == qc.key_box) key = &b;
  }
  if (!top || !low || !key) {
    flag(-1, "normality", "twin or key box missing");
    return report;
  }
  if (top->top != Rational(0) || top->height != Rational(1)) flag(top->id, "normality", "upper twin is not 1-tall at depth 0");
  if (low->top != Rational(1) || low->height != Rational(1)) flag(low->id, "normality", "lower twin is not 1-tall at depth 1");
  if (!low->supports || *low->supports != top->id) flag(low->id, "normality", "lower twin does not support the upper twin");
  int low_supporters = 0;
  for (const CapBox& b : cap.boxes) {
    if (b.supports && *b.supports == low->id) ++low_supporters;
  }
  if (low_supporters != 1 || !key->supports || *key->supports != low->id) {
    flag(low->id, "normality", "lower twin needs exactly one supporter, the key box");
  }
  if (key->top != gap_end || key->bottom() != cap.r) {
    flag(key->id, "normality", "key box spans [" + key->top.str() + ", " + key->bottom().str() + "], expected [" +
                                   gap_end.str() + ", " + cap.r.str() + "]");
  }
  for (const CapBox& b : cap.boxes) {
    if (b.id != top->id && b.id != low->id && b.top < key->top) {
      flag(b.id, "normality", "top " + b.top.str() + " above the key box top " + key->top.str());
    }
  }
  // Mirror symmetry about the seam between the twins.
  const Rational axis2 = top->x.hi + low->x.lo;
  auto mirror = [&](const Interval& iv) { return Interval(axis2 - iv.hi, axis2 - iv.lo); };
  if (mirror(top->x) != low->x || mirror(top->cone_x) != low->cone_x || top->cone_depth != low->cone_depth) {
    flag(top->id, "symmetry", "twins are not mirror images");
  }
  std::multiset<std::tuple<Rational, Rational, Rational, Rational, Rational, Rational>> lefts;
  std::size_t rights = 0;
  for (const CapBox& b : cap.boxes) {
    if (b.side == Side::Left) {
      const Interval mx = mirror(b.x);
      const Interval mc = mirror(b.cone_x);
      lefts.insert({b.top, b.height, b.cone_depth, mx.lo, mx.hi, mc.lo});
    }
  }
  for (const CapBox& b : cap.boxes) {
    if (b.side != Side::Right) continue;
    ++rights;
    auto it = lefts.find({b.top, b.height, b.cone_depth, b.x.lo, b.x.hi, b.cone_x.lo});
    if (it == lefts.end()) {
      flag(b.id, "symmetry", "no mirror image on the left");
    } else {
      lefts.erase(it);
    }
  }
  if (!lefts.empty()) flag(-1, "symmetry", std::to_string(lefts.size()) + " left boxes without a right image");
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const CapViolation& a, const CapViolation& b) { return a.id < b.id; });
  return report;
}

BigInt VertexCap::vertex_count() const {
  BigInt n = 0;
  for (const VertexRun& run : runs) n += run.count;
  return n;
}

VertexCap lower_to_vertex_cap(const BoxCap& cap) {
  VertexCap out{cap.r, {}};
  for (const CapBox& b : cap.boxes) {
    if (!b.top.is_integer() || !b.height.is_integer() || !b.cone_depth.is_integer()) {
      throw Error(ErrorKind::NonIntegral, "box " + std::to_string(b.id) + " has fractional depths");
    }
    out.runs.push_back({b.x, b.cone_x, BigInt(-b.top.num()), b.height.num(), BigInt(-b.cone_depth.num())});
  }
  return out;
}

namespace {

struct ColorRange {
  BigInt lo;  // inclusive
  BigInt hi;  // inclusive
};

ColorRange colors_of(const VertexRun& run) { return {run.f_top - run.count + 1, run.f_top}; }

// Merged, sorted, disjoint ranges.
std::vector<ColorRange> merge(std::vector<ColorRange> rs) {
  std::sort(rs.begin(), rs.end(), [](const ColorRange& a, const ColorRange& b) { return a.lo < b.lo; });
  std::vector<ColorRange> out;
  for (const ColorRange& r : rs) {
    if (!out.empty() && r.lo <= out.back().hi + 1) {
      if (out.back().hi < r.hi) out.back().hi = r.hi;
    } else {
      out.push_back(r);
    }
  }
  return out;
}

BigInt count_in(const std::vector<ColorRange>& merged, const BigInt& lo, const BigInt& hi) {
  BigInt n = 0;
  for (const ColorRange& r : merged) {
    const BigInt a = r.lo < lo ? lo : r.lo;
    const BigInt b = hi < r.hi ? hi : r.hi;
    if (a <= b) n += b - a + 1;
  }
  return n;
}

}  // namespace

CapReport verify_vertex_cap(const VertexCap& cap) {
  CapReport report;
  const auto& runs = cap.runs;
  std::vector<BigInt> first(runs.size());
  BigInt next = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    first[i] = next;
    next += runs[i].count;
  }
  auto flag = [&](std::size_t run, const char* condition, std::string witness) {
    report.violations.push_back({first[run].get_si(), condition, std::move(witness)});
  };
  bool has_zero = false;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const VertexRun& v = runs[i];
    if (v.count < 1) flag(i, "local", "empty run");
    if (v.f_top > 0) flag(i, "local", "color " + v.f_top.get_str() + " is positive");
    if (v.f_top >= 0 && v.f_top - v.count < 0) has_zero = true;
    if (v.c >= 0) flag(i, "local", "cone color " + v.c.get_str() + " is not negative");
    if (!v.I.contains(v.J) || v.J.length().sign() <= 0) flag(i, "local", "J is not a positive-length part of I");
  }
  if (!has_zero) report.violations.push_back({-1, "local", "no vertex has color 0"});

  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      if (runs[i].J.intersects(runs[j].J) && runs[i].J != runs[j].J) {
        flag(j, "local", "J meets another J without being equal to it");
      }
      if (runs[i].I.intersects(runs[j].I)) {
        const ColorRange a = colors_of(runs[i]);
        const ColorRange b = colors_of(runs[j]);
        if (!(a.hi < b.lo || b.hi < a.lo)) flag(j, "proper", "shares a color with an intersecting vertex");
      }
    }
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const VertexRun& v = runs[i];
    std::vector<ColorRange> seen;
    std::vector<ColorRange> near;
    for (const VertexRun& u : runs) {
      if (u.I.intersects(v.J)) seen.push_back(colors_of(u));
      if (u.I.intersects(v.I)) near.push_back(colors_of(u));
    }
    const auto cv = merge(std::move(seen));
    if (!cv.empty() && cv.front().lo <= v.c) {
      flag(i, "emptiness", "color " + cv.front().lo.get_str() + " meets J at or below cone " + v.c.get_str());
    }
    const BigInt sparse = count_in(cv, v.c + 1, BigInt(0));
    if (cap.r * Rational(sparse) > Rational(BigInt(-v.c))) {
      flag(i, "sparseness", sparse.get_str() + " colors above cone " + v.c.get_str() + " exceed 1/r of its depth");
    }
    const auto nv = merge(std::move(near));
    BigInt want = v.c + 1;
    for (const ColorRange& r : nv) {
      if (want > v.f_top) break;
      if (r.hi < want) continue;
      if (want < r.lo) break;
      want = r.hi + 1;
    }
    if (want <= v.f_top) flag(i, "support", "missing color " + want.get_str());
  }
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const CapViolation& a, const CapViolation& b) { return a.id < b.id; });
  return report;
}

VertexCap remove_vertex(const VertexCap& cap, const BigInt& vertex) {
  VertexCap out{cap.r, {}};
  BigInt start = 0;
  bool done = false;
  for (const VertexRun& run : cap.runs) {
    if (!done && vertex >= start && vertex < start + run.count) {
      const BigInt offset = vertex - start;
      if (offset > 0) {
        VertexRun upper = run;
        upper.count = offset;
        out.runs.push_back(upper);
      }
      if (offset + 1 < run.count) {
        VertexRun lower = run;
        lower.f_top = run.f_top - offset - 1;
        lower.count = run.count - offset - 1;
        out.runs.push_back(lower);
      }
      done = true;
    } else {
      out.runs.push_back(run);
    }
    start += run.count;
  }
  if (!done) throw Error(ErrorKind::InvalidArgument, "no vertex " + vertex.get_str());
  return out;
}

}  // namespace ffbench
