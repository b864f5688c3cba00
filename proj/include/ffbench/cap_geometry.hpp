#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffbench/ivg.hpp"
#include "ffbench/rational.hpp"

namespace ffbench {

enum class Side { Left, Right, Center };

char side_char(Side s);
Side side_from_char(char c);

/// A box of identical intervals. Depths grow downward from the cap top at 0.
struct CapBox {
  int id = 0;
  Interval x;
  Rational top;
  Rational height;
  Rational cone_depth;
  Interval cone_x;
  std::optional<int> supports;
  Side side = Side::Center;
  // Which side of the supported box's cone this box's cone sits on.
  Side attach = Side::Center;

  Rational bottom() const { return top + height; }
  friend bool operator==(const CapBox&, const CapBox&) = default;
};

struct BoxCap {
  Rational r;
  std::vector<CapBox> boxes;

  const CapBox& box(int id) const;
  CapBox& box(int id);
  Rational total_height() const;
  friend bool operator==(const BoxCap&, const BoxCap&) = default;
};

struct CapViolation {
  long id = -1;
  std::string condition;
  std::string witness;
};

struct CapReport {
  std::vector<CapViolation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& condition) const;
};

/// Depth range [from, to] of a box that its supporters need not cover.
struct SupportWaiver {
  int box = 0;
  Rational from;
  Rational to;
};

struct BoxCapOptions {
  std::vector<SupportWaiver> waivers;
};

CapReport verify_box_cap(const BoxCap& cap, const BoxCapOptions& options = {});

/// Box data without horizontal placement. `weight_set` lists the boxes that
/// must lie above this box's cone; the box itself is always included.
struct SkeletonBox {
  int id = 0;
  Rational top;
  Rational height;
  Rational cone_depth;
  std::optional<int> supports;
  Side side = Side::Center;
  Side attach = Side::Center;
  std::vector<int> weight_set;
};

struct Skeleton {
  Rational r;
  std::vector<SkeletonBox> boxes;
};

BoxCap assign_layout(const Skeleton& skeleton);

/// Boxes whose extent meets the cone strip of `cone_owner` above its cone.
std::vector<int> weight_set_of(const BoxCap& cap, int cone_owner);

Skeleton skeleton_of(const BoxCap& cap);

BoxCap build_cs_4cap();

/// Two 1-tall boxes, cones at depth 2, the lower supporting the upper; r = 2.
BoxCap build_two_box_cap();

BoxCap scale_to_integers(const BoxCap& cap);

/// Twin 1-tall boxes on top, a key box under the lower twin, mirror symmetric.
struct Quasicap {
  BoxCap cap;
  int twin_top = 0;
  int twin_low = 1;
  int key_box = 2;
  Rational theta;
};

CapReport verify_quasicap(const Quasicap& qc);

/// `count` unit vertices sharing I and J, colored f_top, f_top - 1, ...
struct VertexRun {
  Interval I;
  Interval J;
  BigInt f_top;
  BigInt count;
  BigInt c;

  friend bool operator==(const VertexRun&, const VertexRun&) = default;
};

struct VertexCap {
  Rational r;
  std::vector<VertexRun> runs;

  BigInt vertex_count() const;
  friend bool operator==(const VertexCap&, const VertexCap&) = default;
};

VertexCap lower_to_vertex_cap(const BoxCap& cap);

/// Violation ids are the vertex id of the first vertex of the offending run.
CapReport verify_vertex_cap(const VertexCap& cap);

/// Removes one vertex, splitting its run when it sits in the middle.
VertexCap remove_vertex(const VertexCap& cap, const BigInt& vertex);

}  // namespace ffbench
