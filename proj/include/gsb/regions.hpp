#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsb/core_model.hpp"
#include "gsb/errors.hpp"

namespace gsb {

namespace detail {

// Running product stored as mant * 2^exp2 with |mant| kept in [0.5, 1) by
// frexp renormalization. Lets brackets span far beyond double range (d
// entries may sit at 1e-300) without losing relative precision.
struct ScaledProduct {
  double mant = 0.5;
  long exp2 = 1;  // value = mant * 2^exp2, starts at 1

  void mul(double f) {
    mant *= f;
    renorm();
  }
  void div(double f) {
    mant /= f;
    renorm();
  }
  void renorm() {
    int e = 0;
    mant = std::frexp(mant, &e);
    exp2 += e;
  }

  // value^(1/b) without overflowing the intermediate value.
  double pow_inv(double b) const {
    if (exp2 > -900 && exp2 < 900)
      return std::pow(std::ldexp(mant, static_cast<int>(exp2)), 1.0 / b);
    double log2v = static_cast<double>(exp2) + std::log2(mant);
    return std::exp2(log2v / b);
  }
};

// One bracket of the parametric bound, for user k (0-based):
//
//   (1 + tau_k) / (d_0 + tau_0) * prod_{j=1..k} (d_j + tau_{j-1})/(d_j + tau_j)
//
// Infinite tau entries are sentinels for one joint limit M -> infinity in
// which every infinite tau equals M. Each infinite leading factor (1+M) or
// trailing divisor 1/(d_0+M) contributes a net power of M counted in
// `sentinel`; the ratio factors pair (d_j+M)/(d_j+M) -> 1. For a monotone
// tau vector the count always balances, so the bracket is the product of
// the surviving finite factors. A genuine division by zero (d_j = 0 with
// tau_j = 0 < tau_{j-1}) diverges independently of M and forces +inf.
struct BracketValue {
  bool infinite = false;
  bool zero = false;
  ScaledProduct p;

  double pow_inv(double b) const {
    if (infinite) return std::numeric_limits<double>::infinity();
    if (zero) return 0.0;
    return p.pow_inv(b);
  }

  // plain double value; overflows to +inf honestly
  double value() const {
    if (infinite) return std::numeric_limits<double>::infinity();
    if (zero) return 0.0;
    return std::ldexp(p.mant, static_cast<int>(p.exp2));
  }
};

inline BracketValue parametric_bracket(std::span<const double> d,
                                       const TauVector& tau, std::size_t k) {
  auto t = [&](std::size_t j) { return tau[j]; };
  int sentinel = 0;
  bool hard_inf = false;
  ScaledProduct p;

  if (std::isinf(t(k)))
    ++sentinel;
  else
    p.mul(1.0 + t(k));

  if (std::isinf(t(0))) {
    --sentinel;
  } else {
    double den0 = d[0] + t(0);
    if (den0 == 0.0)
      hard_inf = true;
    else
      p.div(den0);
  }

  for (std::size_t j = 1; j <= k; ++j) {
    double tp = t(j - 1), tc = t(j);
    bool inf_prev = std::isinf(tp), inf_cur = std::isinf(tc);
    if (inf_prev && inf_cur) continue;  // (d+M)/(d+M) -> 1
    if (inf_cur)
      fail(ErrorCode::InvalidTau, "infinite tau below a finite one");
    if (inf_prev) {
      ++sentinel;  // numerator ~ M, coefficient 1
      double den = d[j] + tc;
      if (den == 0.0)
        hard_inf = true;
      else
        p.div(den);
      continue;
    }
    double num = d[j] + tp, den = d[j] + tc;
    if (num == den) continue;  // shared value cancels exactly (tau ties, d=0)
    if (den == 0.0) {
      hard_inf = true;
      continue;
    }
    p.mul(num / den);
  }

  BracketValue out;
  if (hard_inf || sentinel > 0)
    out.infinite = true;
  else if (sentinel < 0)
    out.zero = true;
  else
    out.p = p;
  return out;
}

inline void check_distortion_span(std::span<const double> d,
                                  std::size_t users) {
  if (d.size() != users)
    fail(ErrorCode::DimensionMismatch,
         "expected " + std::to_string(users) + " distortions, got " +
             std::to_string(d.size()));
  for (double v : d) {
    if (!(v >= 0.0) || std::isnan(v))
      fail(ErrorCode::OutOfRange, "distortions must be >= 0");
  }
}

}  // namespace detail

// --- Region left-hand sides -------------------------------------------
//
// Every region inequality reads lhs(d) <= P + N_1. The span overloads are
// limit-aware: a zero entry makes its term +inf unless the term's noise
// increment is zero (those terms are skipped entirely), so membership of
// limit points can still be decided. They also accept entries above 1,
// which the gap certificates need for unclamped scaled vectors.

inline double inner_lhs(const BroadcastChannel& ch,
                        std::span<const double> d) {
  detail::check_distortion_span(d, ch.users());
  double sum = 0.0;
  for (std::size_t k = 0; k < ch.users(); ++k) {
    double w = ch.delta_noise(k);
    if (w == 0.0) continue;
    sum += w * std::pow(d[k], -1.0 / ch.bandwidth());
  }
  return sum;
}

inline double outer_pow2_lhs(const BroadcastChannel& ch,
                             std::span<const double> d) {
  detail::check_distortion_span(d, ch.users());
  double sum = 0.0;
  for (std::size_t k = 0; k < ch.users(); ++k) {
    double w = ch.delta_noise(k);
    if (w == 0.0) continue;
    // scale 2^(k+1) for 0-based k; ldexp keeps the scaling exact
    sum += w * std::pow(std::ldexp(d[k], static_cast<int>(k) + 1),
                        -1.0 / ch.bandwidth());
  }
  return sum;
}

inline double outer_K_lhs(const BroadcastChannel& ch,
                          std::span<const double> d) {
  detail::check_distortion_span(d, ch.users());
  double sum = 0.0;
  double users = static_cast<double>(ch.users());
  for (std::size_t k = 0; k < ch.users(); ++k) {
    double w = ch.delta_noise(k);
    if (w == 0.0) continue;
    sum += w * std::pow(users * d[k], -1.0 / ch.bandwidth());
  }
  return sum;
}

inline double parametric_outer_lhs(const BroadcastChannel& ch,
                                   std::span<const double> d,
                                   const TauVector& tau) {
  detail::check_distortion_span(d, ch.users());
  if (tau.users() != ch.users())
    fail(ErrorCode::DimensionMismatch,
         "tau has " + std::to_string(tau.users()) + " users, channel has " +
             std::to_string(ch.users()));
  double sum = 0.0;
  for (std::size_t k = 0; k < ch.users(); ++k) {
    double w = ch.delta_noise(k);
    if (w == 0.0) continue;
    sum += w * detail::parametric_bracket(d, tau, k).pow_inv(ch.bandwidth());
  }
  return sum;
}

inline double inner_lhs(const BroadcastChannel& ch,
                        const DistortionVector& d) {
  return inner_lhs(ch, d.values());
}
inline double outer_pow2_lhs(const BroadcastChannel& ch,
                             const DistortionVector& d) {
  return outer_pow2_lhs(ch, d.values());
}
inline double outer_K_lhs(const BroadcastChannel& ch,
                          const DistortionVector& d) {
  return outer_K_lhs(ch, d.values());
}
inline double parametric_outer_lhs(const BroadcastChannel& ch,
                                   const DistortionVector& d,
                                   const TauVector& tau) {
  return parametric_outer_lhs(ch, d.values(), tau);
}

// Best distortion user k could reach with the channel to itself alone.
inline double point_to_point_distortion(const BroadcastChannel& ch,
                                        std::size_t k) {
  double n = ch.noise(k);  // throws IndexOutOfRange
  return std::pow(1.0 + ch.power() / n, -ch.bandwidth());
}

// --- Membership ---------------------------------------------------------

enum class RegionId { Inner, OuterPow2, OuterK, Parametric, PointToPoint };

inline const char* to_string(RegionId id) {
  switch (id) {
    case RegionId::Inner: return "inner";
    case RegionId::OuterPow2: return "outer-pow2";
    case RegionId::OuterK: return "outer-k";
    case RegionId::Parametric: return "parametric";
    case RegionId::PointToPoint: return "p2p";
  }
  return "unknown";
}

class RegionKind {
 public:
  static RegionKind inner() { return RegionKind(RegionId::Inner); }
  static RegionKind outer_pow2() { return RegionKind(RegionId::OuterPow2); }
  static RegionKind outer_k() { return RegionKind(RegionId::OuterK); }
  static RegionKind point_to_point() {
    return RegionKind(RegionId::PointToPoint);
  }
  static RegionKind parametric(TauVector tau) {
    RegionKind r(RegionId::Parametric);
    r.tau_ = std::move(tau);
    return r;
  }

  RegionId id() const noexcept { return id_; }
  const TauVector& tau() const {
    if (!tau_)
      fail(ErrorCode::InvalidTau, "region kind carries no tau vector");
    return *tau_;
  }

 private:
  explicit RegionKind(RegionId id) : id_(id) {}
  RegionId id_;
  std::optional<TauVector> tau_;
};

struct MembershipResult {
  double lhs = 0.0;
  double budget = 0.0;
  bool member = false;
  double slack = 0.0;  // budget - lhs
};

inline double region_lhs(const RegionKind& region, const BroadcastChannel& ch,
                         std::span<const double> d) {
  switch (region.id()) {
    case RegionId::Inner: return inner_lhs(ch, d);
    case RegionId::OuterPow2: return outer_pow2_lhs(ch, d);
    case RegionId::OuterK: return outer_K_lhs(ch, d);
    case RegionId::Parametric: return parametric_outer_lhs(ch, d, region.tau());
    case RegionId::PointToPoint: break;
  }
  fail(ErrorCode::OutOfRange, "point-to-point region has no scalar lhs");
}

// Limit-aware membership over a raw vector: entries may be exactly 0, in
// which case a term is infinite unless its noise increment vanishes. The
// vector must still be a point of the ordered simplex [0,1]^K.
//
// The point-to-point region has per-user constraints d_k >= p2p_k instead
// of a budget sum; its result is mapped onto the same fields by taking
// slack = worst per-user margin and lhs = budget - slack, so the contract
// member == (lhs <= budget + tol) holds for every region kind.
inline MembershipResult membership_with_limits(const RegionKind& region,
                                               const BroadcastChannel& ch,
                                               std::span<const double> d,
                                               double tol = 1e-9) {
  detail::check_distortion_span(d, ch.users());
  for (double v : d)
    if (v > 1.0) fail(ErrorCode::OutOfRange, "distortions must be <= 1");
  for (std::size_t k = 0; k + 1 < d.size(); ++k)
    if (d[k] < d[k + 1])
      fail(ErrorCode::NotMonotone, "distortions must be non-increasing");

  MembershipResult res;
  res.budget = ch.budget();
  if (region.id() == RegionId::PointToPoint) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ch.users(); ++k) {
      double margin = d[k] - point_to_point_distortion(ch, k);
      if (margin < worst) worst = margin;
    }
    res.slack = worst;
    res.lhs = res.budget - worst;
  } else {
    res.lhs = region_lhs(region, ch, d);
    res.slack = res.budget - res.lhs;
  }
  res.member = res.lhs <= res.budget + tol;
  return res;
}

inline MembershipResult membership(const RegionKind& region,
                                   const BroadcastChannel& ch,
                                   const DistortionVector& d,
                                   double tol = 1e-9) {
  return membership_with_limits(region, ch, d.values(), tol);
}

// --- Boundary tracing ----------------------------------------------------

enum class Binding { Budget, Ordering, Infeasible };

inline const char* to_string(Binding b) {
  switch (b) {
    case Binding::Budget: return "budget";
    case Binding::Ordering: return "ordering";
    case Binding::Infeasible: return "infeasible";
  }
  return "unknown";
}

struct BoundaryResult {
  double value = 0.0;
  Binding binding = Binding::Budget;
};

// Smallest value of coordinate `solve_index` keeping the vector a member
// (at additive tolerance tol on the budget) and ordered. Every lhs is
// non-increasing in each coordinate, so the feasible set of the solved
// coordinate is an upper interval and bisection applies. Bisection uses
// geometric midpoints (the bracket can span hundreds of decades) and
// stops below 1e-13 relative width, comfortably inside the 1e-12
// absolute contract for coordinates in (0,1]. The returned value is on
// the feasible side of the crossing.
inline BoundaryResult boundary_solve(const RegionKind& region,
                                     const BroadcastChannel& ch,
                                     std::span<const double> d_template,
                                     std::size_t solve_index,
                                     double tol = 1e-9) {
  const std::size_t users = ch.users();
  if (d_template.size() != users)
    fail(ErrorCode::DimensionMismatch,
         "template length does not match channel users");
  if (solve_index >= users)
    fail(ErrorCode::IndexOutOfRange, "solve index out of range");
  for (std::size_t k = 0; k < users; ++k) {
    if (k == solve_index) continue;
    if (!(d_template[k] > 0.0) || !(d_template[k] <= 1.0))
      fail(ErrorCode::OutOfRange, "fixed distortions must lie in (0, 1]");
  }
  for (std::size_t k = 0; k + 1 < users; ++k) {
    if (k == solve_index || k + 1 == solve_index) continue;
    if (d_template[k] < d_template[k + 1])
      fail(ErrorCode::NotMonotone, "fixed distortions must be non-increasing");
  }

  const double lo_floor = 1e-300;
  double lo = solve_index + 1 < users
                  ? std::max(d_template[solve_index + 1], lo_floor)
                  : lo_floor;
  double hi = solve_index > 0 ? d_template[solve_index - 1] : 1.0;
  if (!(lo <= hi))
    fail(ErrorCode::NotMonotone,
         "neighbors of the solved coordinate leave no ordered room");

  if (region.id() == RegionId::PointToPoint) {
    double p = point_to_point_distortion(ch, solve_index);
    if (p > hi + tol)
      fail(ErrorCode::NoSolution,
           "point-to-point floor exceeds the ordering ceiling");
    double v = std::min(std::max(p, lo), hi);
    return {v, p >= lo ? Binding::Budget : Binding::Ordering};
  }

  std::vector<double> work(d_template.begin(), d_template.end());
  auto eval = [&](double x) {
    work[solve_index] = x;
    return region_lhs(region, ch, work);
  };
  const double budget = ch.budget();
  const double cap = budget + tol;

  double lhs_hi = eval(hi);
  if (!(lhs_hi <= cap))
    fail(ErrorCode::NoSolution,
         "budget infeasible even at the upper ordering limit");
  double lhs_lo = eval(lo);
  if (lhs_lo + 1e-9 * std::max(1.0, budget) < lhs_hi)
    fail(ErrorCode::NotMonotone, "lhs increased toward smaller distortion");
  if (lhs_lo <= cap) return {lo, Binding::Ordering};

  // invariant: eval(bad) > cap >= eval(good)
  double bad = lo, good = hi;
  for (int it = 0; it < 300 && good - bad > 1e-13 * good; ++it) {
    double mid = std::sqrt(bad) * std::sqrt(good);
    if (!(mid > bad && mid < good)) mid = bad + (good - bad) / 2;
    if (!(mid > bad && mid < good)) break;
    if (eval(mid) <= cap)
      good = mid;
    else
      bad = mid;
  }
  return {good, Binding::Budget};
}

struct BoundarySample {
  double free_value = 0.0;
  double solved_value = 0.0;  // NaN when infeasible
  Binding binding = Binding::Infeasible;
};

struct BoundaryCurve {
  std::size_t solve_index = 0;
  std::size_t free_index = 1;
  std::vector<BoundarySample> samples;
};

// One boundary_solve per grid value of the free coordinate; rows whose
// budget cannot be met are kept as infeasible markers so curves stay
// aligned with their grid. `base` supplies the fixed coordinates when
// K > 2 (ignored at free/solve positions); for K = 2 it may be empty.
inline BoundaryCurve trace_boundary(const RegionKind& region,
                                    const BroadcastChannel& ch,
                                    std::span<const double> grid,
                                    std::size_t solve_index = 0,
                                    std::size_t free_index = 1,
                                    std::span<const double> base = {}) {
  const std::size_t users = ch.users();
  if (solve_index >= users || free_index >= users ||
      solve_index == free_index)
    fail(ErrorCode::IndexOutOfRange, "bad solve/free index pair");
  std::vector<double> tmpl(users, 1.0);
  if (!base.empty()) {
    if (base.size() != users)
      fail(ErrorCode::DimensionMismatch,
           "base template length does not match channel users");
    tmpl.assign(base.begin(), base.end());
  } else if (users > 2) {
    fail(ErrorCode::DimensionMismatch,
         "channels with more than two users need a base template");
  }

  BoundaryCurve curve;
  curve.solve_index = solve_index;
  curve.free_index = free_index;
  curve.samples.reserve(grid.size());
  for (double g : grid) {
    tmpl[free_index] = g;
    BoundarySample s;
    s.free_value = g;
    try {
      BoundaryResult r = boundary_solve(region, ch, tmpl, solve_index);
      s.solved_value = r.value;
      s.binding = r.binding;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSolution) throw;
      s.solved_value = std::numeric_limits<double>::quiet_NaN();
      s.binding = Binding::Infeasible;
    }
    curve.samples.push_back(s);
  }
  return curve;
}

}  // namespace gsb
