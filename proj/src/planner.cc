/*
 * Copyright 2026 The aiou Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "aiou/planner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aiou/error.h"
#include "aiou/parallel.h"

namespace aiou {
namespace {

using Vec4 = std::array<double, 4>;

constexpr double kFeasibleTolerance = 1e-9;

double Dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

double SquaredDistance(const Vec4& a, const Vec4& b) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double Sum(const Vec4& a) { return a[0] + a[1] + a[2] + a[3]; }

struct MccValue {
  double value;
  Vec4 gradient;
};

// MCC and its gradient; empty where a marginal vanishes.
std::optional<MccValue> EvaluateMcc(const Vec4& x) {
  const double a1 = x[0] + x[1];
  const double a0 = x[2] + x[3];
  const double b1 = x[0] + x[2];
  const double b0 = x[1] + x[3];
  if (!(a1 > 0.0 && a0 > 0.0 && b1 > 0.0 && b0 > 0.0)) return std::nullopt;
  const double root = std::sqrt(a1 * a0) * std::sqrt(b1 * b0);
  const double m = (x[0] * x[3] - x[1] * x[2]) / root;
  return MccValue{m,
                  {x[3] / root - 0.5 * m * (1.0 / a1 + 1.0 / b1),
                   -x[2] / root - 0.5 * m * (1.0 / a1 + 1.0 / b0),
                   -x[1] / root - 0.5 * m * (1.0 / a0 + 1.0 / b1),
                   x[0] / root - 0.5 * m * (1.0 / a0 + 1.0 / b0)}};
}

// {0 <= x <= upper} optionally intersected with {sum(x) = total}.
class FeasibleSet {
 public:
  FeasibleSet(const Vec4& upper, std::optional<double> total)
      : upper_(upper), total_(total) {}

  const Vec4& upper() const { return upper_; }
  const std::optional<double>& total() const { return total_; }

  // Euclidean projection.
  Vec4 Project(const Vec4& y) const {
    if (!total_) return Clamp(y, 0.0);
    // sum(clamp(y - tau, 0, upper)) is piecewise linear and nonincreasing
    // in tau with kinks at y[i] - upper[i] and y[i]; find the segment that
    // crosses the total and solve it exactly.
    std::array<double, 8> kinks;
    for (int i = 0; i < 4; ++i) {
      kinks[2 * i] = y[i] - upper_[i];
      kinks[2 * i + 1] = y[i];
    }
    std::sort(kinks.begin(), kinks.end());
    if (Sum(Clamp(y, kinks.front())) <= *total_) return Clamp(y, kinks.front());
    if (Sum(Clamp(y, kinks.back())) >= *total_) return Clamp(y, kinks.back());
    for (int k = 0; k + 1 < 8; ++k) {
      const double lo = kinks[k];
      const double hi = kinks[k + 1];
      const double s_lo = Sum(Clamp(y, lo));
      const double s_hi = Sum(Clamp(y, hi));
      if (s_hi > *total_ || s_lo < *total_) continue;
      if (s_lo == s_hi) return Clamp(y, lo);
      const double tau = lo + (s_lo - *total_) / (s_lo - s_hi) * (hi - lo);
      Vec4 x = Clamp(y, tau);
      // Spread the rounding residual over coordinates strictly inside.
      int free = 0;
      for (int i = 0; i < 4; ++i) free += x[i] > 0.0 && x[i] < upper_[i];
      if (free > 0) {
        const double share = (*total_ - Sum(x)) / free;
        for (int i = 0; i < 4; ++i) {
          if (x[i] > 0.0 && x[i] < upper_[i]) {
            x[i] = std::clamp(x[i] + share, 0.0, upper_[i]);
          }
        }
      }
      return x;
    }
    return Clamp(y, kinks.back());
  }

  bool AtBound(const Vec4& x, int i) const {
    constexpr double kTiny = 1e-12;
    return x[i] <= kTiny || x[i] >= upper_[i] - kTiny;
  }

 private:
  Vec4 Clamp(const Vec4& y, double shift) const {
    Vec4 x;
    for (int i = 0; i < 4; ++i) {
      x[i] = std::clamp(y[i] - shift, 0.0, upper_[i]);
    }
    return x;
  }

  Vec4 upper_;
  std::optional<double> total_;
};

struct Candidate {
  Vec4 x{};
  double residual = std::numeric_limits<double>::infinity();
  double objective = std::numeric_limits<double>::infinity();
};

// One augmented-Lagrangian solve of
//   min 0.5 ||x - anchor||^2  s.t.  mcc(x) = target,  x in set
// in proportion units.
class AugmentedLagrangian {
 public:
  AugmentedLagrangian(const FeasibleSet& set, const Vec4& anchor,
                      double target)
      : set_(set), anchor_(anchor), target_(target) {}

  Candidate Solve(const Vec4& start) const {
    Candidate out;
    Vec4 x = set_.Project(start);
    if (!EvaluateMcc(x)) return out;

    double multiplier = 0.0;
    double penalty = 10.0;
    double previous = std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < 80; ++outer) {
      Minimize(x, multiplier, penalty,
               std::max(1e-13, 1e-4 * std::pow(0.1, outer)));
      const double g = EvaluateMcc(x)->value - target_;
      if (std::abs(g) < 1e-12) break;
      multiplier += penalty * g;
      if (std::abs(g) > 0.25 * previous) {
        penalty = std::min(penalty * 10.0, 1e12);
      }
      previous = std::abs(g);
    }
    Polish(x);

    const auto m = EvaluateMcc(x);
    out.x = x;
    out.residual = std::abs(m->value - target_);
    if (set_.total()) {
      out.residual = std::max(out.residual, std::abs(Sum(x) - *set_.total()));
    }
    out.objective = 0.5 * SquaredDistance(x, anchor_);
    return out;
  }

 private:
  std::optional<double> Merit(const Vec4& x, double multiplier,
                              double penalty, Vec4& gradient) const {
    const auto m = EvaluateMcc(x);
    if (!m) return std::nullopt;
    const double g = m->value - target_;
    const double weight = multiplier + penalty * g;
    for (int i = 0; i < 4; ++i) {
      gradient[i] = (x[i] - anchor_[i]) + weight * m->gradient[i];
    }
    return 0.5 * SquaredDistance(x, anchor_) + multiplier * g +
           0.5 * penalty * g * g;
  }

  // Projected gradient with Barzilai-Borwein steps and Armijo backtracking.
  void Minimize(Vec4& x, double multiplier, double penalty,
                double tolerance) const {
    Vec4 grad{};
    double value = *Merit(x, multiplier, penalty, grad);
    const auto m = EvaluateMcc(x);
    double step = 1.0 / (1.0 + penalty * Dot(m->gradient, m->gradient));

    for (int it = 0; it < 1000; ++it) {
        Vec4 next;
      Vec4 next_grad{};
      double next_value = 0.0;
      bool accepted = false;
      while (step > 1e-20) {
        Vec4 trial;
        for (int i = 0; i < 4; ++i) trial[i] = x[i] - step * grad[i];
        next = set_.Project(trial);
        const double moved = SquaredDistance(next, x);
        if (moved == 0.0) return;
        const auto v = Merit(next, multiplier, penalty, next_grad);
        if (v && *v <= value - 1e-4 / step * moved) {
          next_value = *v;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) return;

      Vec4 s;
      Vec4 r;
      for (int i = 0; i < 4; ++i) {
        s[i] = next[i] - x[i];
        r[i] = next_grad[i] - grad[i];
      }
      const double stationarity = std::sqrt(Dot(s, s)) / step;
      x = next;
      grad = next_grad;
      value = next_value;
      if (stationarity < tolerance) return;
      const double sr = Dot(s, r);
      step = sr > 0.0 ? Dot(s, s) / sr : step * 2.0;
      step = std::clamp(step, 1e-20, 1e10);
    }
  }

  // Newton-type projection onto the constraint manifold restricted to the
  // coordinates off their bounds: each step solves
  //   min 0.5 ||x + d - anchor||^2  s.t.  J d = -c
  // whose fixed points are exactly the KKT points.
  void Polish(Vec4& x) const {
    for (int it = 0; it < 100; ++it) {
      const auto m = EvaluateMcc(x);
      const double g = m->value - target_;
      const double h = set_.total() ? Sum(x) - *set_.total() : 0.0;

      Vec4 row_g{};
      Vec4 row_h{};
      Vec4 r{};
      int free = 0;
      for (int i = 0; i < 4; ++i) {
        if (set_.AtBound(x, i)) continue;
        ++free;
        row_g[i] = m->gradient[i];
        row_h[i] = set_.total() ? 1.0 : 0.0;
        r[i] = x[i] - anchor_[i];
      }
      if (free == 0) return;

      Vec4 d{};
      if (set_.total()) {
        // 2x2 normal equations.
        const double a = Dot(row_g, row_g);
        const double b = Dot(row_g, row_h);
        const double c = Dot(row_h, row_h);
        const double det = a * c - b * b;
        if (!(std::abs(det) > 1e-300)) return;
        const double rhs_g = Dot(row_g, r) - g;
        const double rhs_h = Dot(row_h, r) - h;
        const double mu_g = (c * rhs_g - b * rhs_h) / det;
        const double mu_h = (a * rhs_h - b * rhs_g) / det;
        for (int i = 0; i < 4; ++i) {
          if (row_h[i] != 0.0) {
            d[i] = mu_g * row_g[i] + mu_h * row_h[i] - r[i];
          }
        }
      } else {
        const double a = Dot(row_g, row_g);
        if (!(a > 1e-300)) return;
        const double mu = (Dot(row_g, r) - g) / a;
        for (int i = 0; i < 4; ++i) {
          if (!set_.AtBound(x, i)) d[i] = mu * row_g[i] - r[i];
        }
      }

      const double current = std::abs(g) + std::abs(h);
      bool accepted = false;
      for (double t = 1.0; t > 1e-6; t *= 0.5) {
        Vec4 trial;
        for (int i = 0; i < 4; ++i) trial[i] = x[i] + t * d[i];
        trial = set_.Project(trial);
        const auto tm = EvaluateMcc(trial);
        if (!tm) continue;
        const double th =
            set_.total() ? std::abs(Sum(trial) - *set_.total()) : 0.0;
        const double next = std::abs(tm->value - target_) + th;
        if (next < current || next <= 1e-14) {
          x = trial;
          accepted = true;
          break;
        }
      }
      if (!accepted) return;
      if (Dot(d, d) < 1e-26 && current < 1e-13) return;
    }
  }

  const FeasibleSet& set_;
  Vec4 anchor_;
  double target_;
};

std::string CountsString(const ConfusionCounts& c) {
  return "(" + std::to_string(c.n11) + ", " + std::to_string(c.n10) + ", " +
         std::to_string(c.n01) + ", " + std::to_string(c.n00) + ")";
}

// Closest point to (a, b) on {x + y = total, 0 <= x <= a, 0 <= y <= b}.
std::pair<double, double> ProjectPair(double a, double b, double total) {
  const double shrink = 0.5 * (a + b - total);
  double x = a - shrink;
  double y = b - shrink;
  if (x < 0.0) {
    x = 0.0;
    y = total;
  } else if (y < 0.0) {
    y = 0.0;
    x = total;
  }
  return {x, y};
}

// mcc = +1 forces n10 = n01 = 0 (and -1 forces n11 = n00 = 0); the closest
// such point keeps the remaining cells, shrunk evenly under a cap.
SubgroupSizes SolvePerfectCorrelation(const Vec4& original, bool positive,
                                      std::optional<double> cap) {
  const int i = positive ? 0 : 1;
  const int j = positive ? 3 : 2;
  SubgroupSizes planned{};
  planned[i] = original[i];
  planned[j] = original[j];
  if (cap) {
    if (*cap > original[i] + original[j]) {
      throw Error(ErrorCode::kInfeasibleCap,
                  "cap exceeds the cells allowed at |mcc| = 1");
    }
    std::tie(planned[i], planned[j]) =
        ProjectPair(original[i], original[j], *cap);
  }
  if (!(planned[i] > 0.0 && planned[j] > 0.0)) {
    throw Error(ErrorCode::kInfeasibleCap,
                "cap leaves a zero marginal at |mcc| = 1");
  }
  return planned;
}

SubsamplePlan Finish(const ConfusionCounts& original, double target,
                     std::optional<std::int64_t> cap,
                     const SubgroupSizes& planned) {
  SubsamplePlan plan;
  plan.original = original;
  plan.target_mcc = target;
  plan.total_cap = cap;
  plan.planned = planned;
  plan.planned_mcc = Mcc(planned);
  plan.planned_distance =
      std::sqrt(SquaredDistance(planned, original.AsReals()));
  return RoundPlan(plan);
}

}  // namespace

bool MccInterval::Contains(double value) const {
  if (empty || std::isnan(value)) return false;
  if (value < lo || value > hi) return false;
  if (value == lo && !lo_closed) return false;
  if (value == hi && !hi_closed) return false;
  return true;
}

MccInterval AttainableMccRange(const ConfusionCounts& original) {
  // MCC is scale-free, so the reachable set only depends on which cells
  // may be nonzero. Positive correlation needs n11 and n00, negative needs
  // n10 and n01.
  const bool s11 = original.n11 > 0;
  const bool s10 = original.n10 > 0;
  const bool s01 = original.n01 > 0;
  const bool s00 = original.n00 > 0;
  const bool positive = s11 && s00;
  const bool negative = s10 && s01;
  MccInterval r;
  if (positive && negative) {
    r = {false, -1.0, 1.0, true, true};
  } else if (positive) {
    // Only one off-diagonal cell: mcc = sqrt(n11 n00 / (...)) in (0, 1].
    r = (s10 || s01) ? MccInterval{false, 0.0, 1.0, false, true}
                     : MccInterval{false, 1.0, 1.0, true, true};
  } else if (negative) {
    r = (s11 || s00) ? MccInterval{false, -1.0, 0.0, true, false}
                     : MccInterval{false, -1.0, -1.0, true, true};
  }
  return r;
}

SubsamplePlan SolveSubgroups(const ConfusionCounts& original,
                             double target_mcc, const SolveOptions& options) {
  if (original.n11 < 0 || original.n10 < 0 || original.n01 < 0 ||
      original.n00 < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative subgroup size");
  }
  const MccInterval range = AttainableMccRange(original);
  if (!range.Contains(target_mcc)) {
    throw Error(ErrorCode::kUnattainableTarget,
                "target MCC " + std::to_string(target_mcc) +
                    " is outside the attainable range of " +
                    CountsString(original) +
                    (range.empty ? std::string(" (empty)")
                                 : " " + std::string(range.lo_closed ? "[" : "(") +
                                       std::to_string(range.lo) + ", " +
                                       std::to_string(range.hi) +
                                       (range.hi_closed ? "]" : ")")));
  }

  const Vec4 n0 = original.AsReals();
  const double scale = Sum(n0);
  std::optional<double> cap;
  if (options.total_cap) {
    if (*options.total_cap <= 0 || *options.total_cap > original.total()) {
      throw Error(ErrorCode::kInfeasibleCap,
                  "cap " + std::to_string(*options.total_cap) +
                      " outside (0, " + std::to_string(original.total()) +
                      "]");
    }
    cap = static_cast<double>(*options.total_cap);
  }

  if (target_mcc == 1.0 || target_mcc == -1.0) {
    return Finish(original, target_mcc, options.total_cap,
                  SolvePerfectCorrelation(n0, target_mcc > 0.0, cap));
  }
  if ((!cap || *cap == scale) && std::abs(Mcc(original) - target_mcc) <=
                                     1e-12) {
    return Finish(original, target_mcc, options.total_cap, n0);
  }

  Vec4 upper;
  for (int i = 0; i < 4; ++i) upper[i] = n0[i] / scale;
  const FeasibleSet set(upper,
                        cap ? std::optional<double>(*cap / scale) : std::nullopt);
  const AugmentedLagrangian solver(set, upper, target_mcc);

  Vec4 warm = options.warm_start.value_or(n0);
  for (double& v : warm) v /= scale;
  std::array<Vec4, 5> starts;
  starts[0] = warm;
  for (int k = 0; k < 4; ++k) {
    starts[k + 1] = warm;
    starts[k + 1][k] *= 0.5;
  }

  Candidate best;
  for (const Vec4& start : starts) {
    const Candidate c = solver.Solve(start);
    if (c.residual <= kFeasibleTolerance && c.objective < best.objective) {
      best = c;
    }
  }
  // The minimizer may sit on a face with one emptied cell while the
  // interior holds a symmetric local minimum that attracts every start.
  // Solve each such face directly.
  for (int k = 0; k < 4; ++k) {
    if (upper[k] == 0.0) continue;
    ConfusionCounts reduced = original;
    (k == 0 ? reduced.n11 : k == 1 ? reduced.n10 : k == 2 ? reduced.n01
                                                         : reduced.n00) = 0;
    if (!AttainableMccRange(reduced).Contains(target_mcc)) continue;
    Vec4 face_upper = upper;
    face_upper[k] = 0.0;
    const FeasibleSet face(face_upper, set.total());
    const AugmentedLagrangian face_solver(face, upper, target_mcc);
    Vec4 start = warm;
    start[k] = 0.0;
    const Candidate c = face_solver.Solve(start);
    if (c.residual <= kFeasibleTolerance && c.objective < best.objective) {
      best = c;
    }
  }
  if (!std::isfinite(best.objective)) {
    if (cap) {
      throw Error(ErrorCode::kInfeasibleCap,
                  "no plan with total " + std::to_string(*options.total_cap) +
                      " reaches MCC " + std::to_string(target_mcc));
    }
    throw Error(ErrorCode::kUnattainableTarget,
                "solver found no feasible plan for MCC " +
                    std::to_string(target_mcc));
  }

  SubgroupSizes planned;
  for (int i = 0; i < 4; ++i) {
    planned[i] = std::clamp(best.x[i] * scale, 0.0, n0[i]);
  }
  return Finish(original, target_mcc, options.total_cap, planned);
}

SubsamplePlan RoundPlan(const SubsamplePlan& plan) {
  const Vec4 n0 = plan.original.AsReals();
  // Values within 1e-9 of an integer are taken as that integer.
  Vec4 base;
  std::array<bool, 4> integral;
  for (int i = 0; i < 4; ++i) {
    const double nearest = std::round(plan.planned[i]);
    integral[i] = std::abs(plan.planned[i] - nearest) <= 1e-9;
    base[i] = integral[i] ? nearest : std::floor(plan.planned[i]);
  }

  const auto admissible = [&](const Vec4& c) {
    for (int i = 0; i < 4; ++i) {
      if (c[i] < 0.0 || c[i] > n0[i]) return false;
    }
    return !plan.total_cap ||
           Sum(c) == static_cast<double>(*plan.total_cap);
  };
  const auto deviation = [&](const Vec4& c) -> std::optional<double> {
    const auto m = EvaluateMcc(c);
    if (!m) return std::nullopt;
    return std::abs(std::clamp(m->value, -1.0, 1.0) - plan.target_mcc);
  };

  // Accuracy bar from the floor/ceil corners.
  double bar = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < 16; ++mask) {
    Vec4 c;
    for (int i = 0; i < 4; ++i) {
      const bool up = (mask >> i) & 1;
      c[i] = base[i] + (up && !integral[i] ? 1.0 : 0.0);
    }
    if (!admissible(c)) continue;
    if (const auto d = deviation(c)) bar = std::min(bar, *d);
  }

  // Closest-to-original point in the widened neighbourhood meeting the bar.
  // Without any defined corner the bar is dropped and the most accurate
  // neighbour wins.
  const bool have_bar = std::isfinite(bar);
  Vec4 best{};
  double best_distance = std::numeric_limits<double>::infinity();
  double best_deviation = std::numeric_limits<double>::infinity();
  bool found = false;
  // An integral plan is kept as is.
  bool kept = false;
  if (std::all_of(integral.begin(), integral.end(), [](bool b) { return b; }) &&
      admissible(base)) {
    if (const auto d = deviation(base)) {
      best = base;
      best_distance = SquaredDistance(base, n0);
      best_deviation = *d;
      found = kept = true;
    }
  }
  constexpr int kReach = 3;
  constexpr int kSide = 2 * kReach + 1;
  for (int code = 0; !kept && code < kSide * kSide * kSide * kSide;
       ++code) {
    Vec4 c;
    for (int i = 0, rest = code; i < 4; ++i, rest /= kSide) {
      c[i] = base[i] + static_cast<double>(rest % kSide - kReach);
    }
    if (!admissible(c)) continue;
    const auto d = deviation(c);
    if (!d || (have_bar && *d > bar)) continue;
    const double dist = SquaredDistance(c, n0);
    const bool better =
        have_bar ? (dist < best_distance ||
                    (dist == best_distance && *d < best_deviation))
                 : (*d < best_deviation ||
                    (*d == best_deviation && dist < best_distance));
    if (!found || better) {
      best = c;
      best_distance = dist;
      best_deviation = *d;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kUndefinedMcc,
                "no integer rounding of the plan has a defined MCC");
  }

  SubsamplePlan out = plan;
  out.rounded = {static_cast<std::int64_t>(best[0]),
                 static_cast<std::int64_t>(best[1]),
                 static_cast<std::int64_t>(best[2]),
                 static_cast<std::int64_t>(best[3])};
  out.achieved_mcc = Mcc(out.rounded);
  out.l2_distance = std::sqrt(best_distance);
  out.total = out.rounded.total();
  return out;
}

std::vector<SubsamplePlan> Sweep(const ConfusionCounts& original,
                                 std::span<const double> targets) {
  if (!std::is_sorted(targets.begin(), targets.end())) {
    throw Error(ErrorCode::kInvalidArgument, "sweep targets must be sorted");
  }
  std::vector<SubsamplePlan> first;
  first.reserve(targets.size());
  SubgroupSizes warm = original.AsReals();
  for (const double t : targets) {
    first.push_back(SolveSubgroups(original, t, {warm, std::nullopt}));
    warm = first.back().planned;
  }
  if (first.empty()) return first;

  // Floor of the continuous totals: shrinking a plan keeps its MCC, so every
  // target stays feasible at this cap. A rounded total may not be.
  std::int64_t cap = first.front().original.total();
  for (const auto& p : first) {
    cap = std::min(cap, static_cast<std::int64_t>(std::floor(Sum(p.planned) + 1e-9)));
  }

  std::vector<SubsamplePlan> second(first.size());
  ParallelFor(first.size(), [&](std::size_t i) {
    // The pass-1 plan scaled down to the cap is feasible, so start there.
    SubgroupSizes start = first[i].planned;
    const double shrink = static_cast<double>(cap) / Sum(start);
    for (double& v : start) v *= shrink;
    second[i] = SolveSubgroups(original, targets[i], {start, cap});
  });
  return second;
}

ConfusionCounts SubgroupCounts(const LabelTable& labels,
                               std::string_view target,
                               std::string_view protected_attribute) {
  return CountPairs(labels.Column(target), labels.Column(protected_attribute));
}

LabelTable ApplyPlan(const LabelTable& labels, std::string_view target,
                     std::string_view protected_attribute,
                     const ConfusionCounts& rounded) {
  const auto t = labels.Column(target);
  const auto p = labels.Column(protected_attribute);
  // Remaining quota per subgroup, GroupIndex order: (0,0),(0,1),(1,0),(1,1).
  std::array<std::int64_t, 4> quota = {rounded.n00, rounded.n01, rounded.n10,
                                       rounded.n11};
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::int64_t& q = quota[GroupIndex({t[i], p[i]})];
    if (q > 0) {
      rows.push_back(i);
      --q;
    }
  }
  for (const auto q : quota) {
    if (q > 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "plan asks for more images than a subgroup holds");
    }
  }
  return labels.Subset(rows);
}

}  // namespace aiou
