#include "ffbench/quasicap.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>

#include "ffbench/error.hpp"

namespace ffbench {

std::vector<Rational> strand_sequence(const StrandParams& p, std::size_t limit) {
  if (limit < 3) throw Error(ErrorKind::InvalidArgument, "strand sequence needs at least 3 terms");
  std::vector<Rational> u{Rational(1), Rational(1), p.theta + p.delta};
  const Rational a = p.r - p.theta;
  const Rational b = p.r - p.theta - p.theta;
  while (u.size() < limit) {
    const std::size_t n = u.size();
    u.push_back(a * u[n - 1] - b * u[n - 2] - p.theta * u[n - 3]);
  }
  return u;
}

StopResult find_stop(const StrandParams& p, std::size_t cutoff, std::size_t bit_budget) {
  if (cutoff < 4) throw Error(ErrorKind::InvalidArgument, "cutoff must be at least 4");
  const Rational a = p.r - p.theta;
  const Rational b = p.r - p.theta - p.theta;
  const Rational& c = p.theta;
  const Rational s = p.theta + p.delta;
  if (s < Rational(1)) return {StopResult::Kind::PatternBroken, 2};

  // v_n = u_n * M^n stays integral and keeps the comparisons exact.
  BigInt m = lcm(lcm(a.den(), b.den()), lcm(c.den(), s.den()));
  const BigInt ka = (a * Rational(m)).num();
  const BigInt kb = (b * Rational(m)).num() * m;
  const BigInt kc = (c * Rational(m)).num() * m * m;
  BigInt v0 = 1;
  BigInt v1 = m;
  BigInt v2 = (s * Rational(m)).num() * m;
  BigInt next;
  BigInt bound;
  for (std::size_t n = 2; n + 1 <= cutoff; ++n) {
    next = ka * v2 - kb * v1 - kc * v0;
    bound = m * v2;
    if (next <= bound) return {StopResult::Kind::Stopped, n};
    if (mpz_sizeinbase(next.get_mpz_t(), 2) > bit_budget) break;
    v0.swap(v1);
    v1.swap(v2);
    v2.swap(next);
  }
  return {StopResult::Kind::Diverged, cutoff};
}

namespace {

SkeletonBox skeleton_box(int id, Rational top, Rational height, Rational cone, std::optional<int> supports,
                         Side side, Side attach, std::vector<int> weight = {}) {
  return {id, std::move(top), std::move(height), std::move(cone), supports, side, attach, std::move(weight)};
}

Side flip(Side s) {
  if (s == Side::Left) return Side::Right;
  if (s == Side::Right) return Side::Left;
  return s;
}

// Appends the mirror image of every right-side box; ids shift by `offset`.
void mirror_right_side(Skeleton& sk, int twin_top, int twin_low, int offset) {
  const std::size_t count = sk.boxes.size();
  auto image = [&](int id) { return id == twin_low ? twin_top : id + offset; };
  for (std::size_t i = 0; i < count; ++i) {
    const SkeletonBox& b = sk.boxes[i];
    if (b.side != Side::Right) continue;
    SkeletonBox m = b;
    m.id = b.id + offset;
    m.side = Side::Left;
    m.attach = flip(b.attach);
    if (b.supports) m.supports = image(*b.supports);
    for (int& w : m.weight_set) w = image(w);
    sk.boxes.push_back(std::move(m));
  }
}

void require_clean(const Quasicap& qc, const char* what) {
  const CapReport report = verify_quasicap(qc);
  if (!report.ok()) {
    const CapViolation& v = report.violations.front();
    throw Error(ErrorKind::Inconsistent, std::string(what) + " failed verification: " + v.condition + " at box " +
                                             std::to_string(v.id) + ": " + v.witness);
  }
}

}  // namespace

Quasicap initial_quasicap(const Rational& r) {
  if (r <= Rational(3)) throw Error(ErrorKind::InvalidArgument, "initial quasicap needs r > 3");
  Skeleton sk;
  sk.r = r;
  sk.boxes.push_back(skeleton_box(0, Rational(0), Rational(1), r, std::nullopt, Side::Center, Side::Center));
  sk.boxes.push_back(skeleton_box(1, Rational(1), Rational(1), r, 0, Side::Center, Side::Right));
  sk.boxes.push_back(skeleton_box(2, r - Rational(1), Rational(1), r, 1, Side::Right, Side::Right));
  mirror_right_side(sk, 0, 1, 1);
  Quasicap qc{assign_layout(sk), 0, 1, 2, Rational(1)};
  require_clean(qc, "initial quasicap");
  return qc;
}

Quasicap gap_step(const Quasicap& qc, const Rational& delta, std::size_t cutoff, std::size_t box_budget) {
  const BoxCap& old = qc.cap;
  const Rational& r = old.r;
  const Rational& theta = qc.theta;
  if (theta < Rational(1) || !(theta < r - Rational(2))) {
    throw Error(ErrorKind::InvalidArgument, "key box height " + theta.str() + " outside [1, r-2)");
  }
  if (delta.sign() <= 0 || r - Rational(2) < theta + delta) {
    throw Error(ErrorKind::InvalidArgument, "step " + delta.str() + " must be positive and close at most the gap");
  }
  const StopResult stop = find_stop({r, theta, delta}, cutoff);
  if (!stop.stopped()) {
    throw Error(ErrorKind::NotStopped, "strand for theta " + theta.str() + ", delta " + delta.str() + " never stops");
  }
  const std::size_t N = stop.n;
  const std::vector<Rational> u = strand_sequence({r, theta, delta}, N + 2);

  // The part copied: the key box and everything below it on the right.
  std::map<int, const CapBox*> by_id;
  for (const CapBox& b : old.boxes) by_id[b.id] = &b;
  std::vector<const CapBox*> part;
  for (const CapBox& b : old.boxes) {
    const CapBox* at = &b;
    std::set<int> guard;
    while (at->id != qc.key_box && at->supports && guard.insert(at->id).second) at = by_id.at(*at->supports);
    if (at->id == qc.key_box) part.push_back(&b);
  }
  const std::size_t per_side = N + N * part.size();
  if (2 + 2 * per_side > box_budget) {
    throw Error(ErrorKind::BudgetExceeded, "gap step needs " + std::to_string(2 + 2 * per_side) + " boxes, budget " +
                                               std::to_string(box_budget));
  }
  std::map<int, std::size_t> slot;
  for (std::size_t i = 0; i < part.size(); ++i) slot[part[i]->id] = i;
  std::vector<std::vector<int>> old_weight(part.size());
  std::vector<bool> one_side(part.size());
  for (std::size_t i = 0; i < part.size(); ++i) {
    for (int w : weight_set_of(old, part[i]->id)) {
      if (w == qc.twin_low) {
        one_side[i] = true;
      } else if (slot.count(w)) {
        old_weight[i].push_back(w);
      } else {
        throw Error(ErrorKind::InvalidArgument, "box " + std::to_string(part[i]->id) + " sees box " +
                                                    std::to_string(w) + " outside its side");
      }
    }
  }

  Skeleton sk;
  sk.r = r;
  const int top_id = 0;
  const int low_id = 1;
  sk.boxes.push_back(skeleton_box(top_id, Rational(0), Rational(1), r, std::nullopt, Side::Center, Side::Center));
  sk.boxes.push_back(skeleton_box(low_id, Rational(1), Rational(1), r, top_id, Side::Center, Side::Right));
  // Outer strand O_2..O_{N+1}; O_1 is the lower twin.
  auto outer_id = [&](std::size_t n) { return n == 1 ? low_id : static_cast<int>(n); };
  Rational bottom = r;
  for (std::size_t n = 2; n <= N + 1; ++n) {
    if (n >= 3) bottom += u[n];
    const Rational cone = r * (n <= N ? u[n] : u[N]);
    sk.boxes.push_back(
        skeleton_box(outer_id(n), bottom - u[n], u[n], cone, outer_id(n - 1), Side::Right, Side::Right));
  }
  const int first_copy = static_cast<int>(N) + 2;
  auto copy_id = [&](std::size_t n, std::size_t i) {
    return first_copy + static_cast<int>((n - 1) * part.size() + i);
  };
  for (std::size_t n = 1; n <= N; ++n) {
    const std::size_t m = std::min(n, N - 1);
    const Rational slope = u[m + 1] - u[m];
    const Rational lift = r * u[m];
    const bool reversed = n < N;
    for (std::size_t i = 0; i < part.size(); ++i) {
      const CapBox& b = *part[i];
      SkeletonBox s = skeleton_box(copy_id(n, i), slope * b.top + lift, slope * b.height, slope * b.cone_depth + lift,
                                   std::nullopt, Side::Right, reversed ? flip(b.attach) : b.attach);
      if (b.id == qc.key_box) {
        s.supports = outer_id(n + 1);
        s.attach = reversed ? Side::Left : Side::Right;
      } else {
        s.supports = copy_id(n, slot.at(*b.supports));
      }
      for (int w : old_weight[i]) s.weight_set.push_back(copy_id(n, slot.at(w)));
      if (one_side[i]) {
        s.weight_set.push_back(outer_id(n + 1));
      } else if (n < N) {
        s.weight_set.push_back(outer_id(n));
      }
      sk.boxes.push_back(std::move(s));
    }
  }
  mirror_right_side(sk, top_id, low_id, static_cast<int>(sk.boxes.size()) - 2);
  Quasicap out{assign_layout(sk), top_id, low_id, outer_id(2), theta + delta};
  require_clean(out, "gap step");
  return out;
}

namespace {

StopResult probe(const Rational& r, const Rational& theta, const Rational& delta, const CertifyOptions& o) {
  return find_stop({r, theta, delta}, o.cutoff, o.bit_budget);
}

}  // namespace

Certification certify_r(const Rational& r, const CertifyOptions& options) {
  if (r <= Rational(3)) throw Error(ErrorKind::InvalidArgument, "certification needs r > 3");
  if (options.delta0.sign() <= 0) throw Error(ErrorKind::InvalidArgument, "delta0 must be positive");
  Certification out;
  out.recipe.r = r;
  const Rational goal = r - Rational(2);
  Rational theta(1);
  const unsigned jobs = std::max(1u, options.jobs);
  while (theta < goal) {
    Rational delta = min(options.delta0, goal - theta);
    std::optional<RecipeStep> found;
    while (!found) {
      std::vector<Rational> batch;
      for (Rational d = delta; batch.size() < jobs && !(d < options.delta_min); d /= Rational(2)) batch.push_back(d);
      if (batch.empty()) {
        throw Error(ErrorKind::Stalled, "no stopping step of at least " + options.delta_min.str() + " at theta " +
                                            theta.str() + " after " + std::to_string(out.recipe.steps.size()) +
                                            " steps");
      }
      std::vector<StopResult> results(batch.size());
      if (batch.size() > 1) {
        std::vector<std::future<StopResult>> pending;
        for (const Rational& d : batch) {
          pending.push_back(std::async(std::launch::async, probe, std::cref(r), std::cref(theta), d, std::cref(options)));
        }
        for (std::size_t i = 0; i < batch.size(); ++i) results[i] = pending[i].get();
      } else {
        results[0] = probe(r, theta, batch[0], options);
      }
      for (std::size_t i = 0; i < batch.size() && !found; ++i) {
        if (results[i].stopped()) found = RecipeStep{theta, batch[i], results[i].n};
      }
      delta = batch.back() / Rational(2);
    }
    out.recipe.steps.push_back(*found);
    theta += found->delta;
  }
  if (options.geometric) out.cap = execute_recipe(out.recipe, options.cutoff, options.box_budget);
  return out;
}

Quasicap execute_recipe(const Recipe& recipe, std::size_t cutoff, std::size_t box_budget) {
  Quasicap qc = initial_quasicap(recipe.r);
  for (const RecipeStep& step : recipe.steps) {
    if (step.theta != qc.theta) {
      throw Error(ErrorKind::InvalidArgument, "recipe step starts at theta " + step.theta.str() + ", cap has " +
                                                  qc.theta.str());
    }
    qc = gap_step(qc, step.delta, cutoff, box_budget);
  }
  return qc;
}

}  // namespace ffbench
