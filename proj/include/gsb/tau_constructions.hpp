#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gsb/core_model.hpp"
#include "gsb/errors.hpp"
#include "gsb/regions.hpp"

namespace gsb {

// tau_k = d_k for every non-final user. Plugged into the parametric bound
// this dominates the 2^k-scaled outer bound term by term.
inline TauVector tau_for_pow2(const DistortionVector& d) {
  std::vector<double> tau(d.values().begin(), d.values().end() - 1);
  return TauVector(std::move(tau));
}

// Witness that the parametric family implies the K-scaled outer bound.
//
// split_index r counts the leading users whose distortion exceeds 1/K
// (after promotion of a removable singularity, see tau_for_Kfactor);
// those users carry the infinite tau sentinel. residuals[k] compares the
// bracket of user k against 1/(factor * d_k) at the factor the
// construction targets for that user: K inside the sentinel prefix, K - r
// in the recursed tail. Intermediate tail residuals vanish by
// construction; the final one is nonnegative. Residuals against the
// uniform factor K (nonnegative for every user) come from verify_Kfactor.
struct KfactorCertificate {
  TauVector tau;
  std::vector<double> alpha;      // K-1 values; analytic limit d_k inside the prefix
  std::vector<double> residuals;  // K values, see above
  std::size_t split_index = 0;
};

// Bracket of user k (0-based) minus 1/(factor * d_k), infinite taus in
// the analytic limit. Shared by the certificate and verify_Kfactor.
inline double kfactor_residual(std::span<const double> d, const TauVector& tau,
                               std::size_t k, double factor) {
  double bracket = detail::parametric_bracket(d, tau, k).value();
  return bracket - 1.0 / (factor * d[k]);
}

inline KfactorCertificate tau_for_Kfactor(std::size_t users,
                                          const DistortionVector& d) {
  if (d.size() != users)
    fail(ErrorCode::LengthMismatch,
         "expected " + std::to_string(users) + " distortions, got " +
             std::to_string(d.size()));
  const std::size_t K = users;
  const double Kd = static_cast<double>(K);
  const double inf = std::numeric_limits<double>::infinity();

  std::size_t r = 0;
  while (r < K && d[r] > 1.0 / Kd) ++r;

  std::vector<double> tau(K >= 1 ? K - 1 : 0, inf);

  // Tail recursion on the (K - r)-user subproblem. A subproblem whose
  // opening denominator 1 - (K-r) d_{r+1} underflows sits at the removable
  // singularity where the finite solution and the sentinel agree, so the
  // user is promoted into the sentinel prefix instead of dividing by ~0.
  while (r + 1 < K) {
    double sub = static_cast<double>(K - r);
    double den = 1.0 - sub * d[r];
    if (den >= 1e-12) break;
    ++r;
  }
  if (r + 1 < K) {
    double sub = static_cast<double>(K - r);
    tau[r] = (sub - 1.0) * d[r] / (1.0 - sub * d[r]);
    for (std::size_t k = r; k + 2 < K; ++k) {
      double alpha = d[k] * (1.0 + tau[k]) / (d[k + 1] + tau[k]);
      double den = alpha - d[k + 1];
      if (!(den > 0.0))
        fail(ErrorCode::DegenerateDenominator,
             "alpha did not stay above the next distortion at user " +
                 std::to_string(k + 2));
      double next = d[k + 1] * (1.0 - alpha) / den;
      tau[k + 1] = std::min(next, tau[k]);  // monotone despite rounding
    }
  }

  KfactorCertificate cert{TauVector(std::move(tau)), {}, {}, r};

  cert.alpha.reserve(K >= 1 ? K - 1 : 0);
  for (std::size_t k = 0; k + 1 < K; ++k) {
    if (k < r)
      cert.alpha.push_back(d[k]);  // limit of d_k(1+tau)/(d_{k+1}+tau)
    else
      cert.alpha.push_back(d[k] * (1.0 + cert.tau[k]) /
                           (d[k + 1] + cert.tau[k]));
  }

  cert.residuals.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    double factor = k < r ? Kd : static_cast<double>(K - r);
    cert.residuals.push_back(
        kfactor_residual(d.values(), cert.tau, k, factor));
  }
  return cert;
}

// Residuals of every user's bracket against the uniform factor
// 1/(users * d_k); all nonnegative for a certificate tau.
inline std::vector<double> verify_Kfactor(std::size_t users,
                                          const DistortionVector& d,
                                          const TauVector& tau) {
  if (d.size() != users || tau.users() != users)
    fail(ErrorCode::DimensionMismatch,
         "distortions, tau and user count must agree");
  std::vector<double> out;
  out.reserve(users);
  for (std::size_t k = 0; k < users; ++k)
    out.push_back(
        kfactor_residual(d.values(), tau, k, static_cast<double>(users)));
  return out;
}

// Relaxed distortion vector: each user either inherits the previous
// relaxed value (label 0) or restarts at 2^(1+labels so far) times its own
// distortion (label 1), whichever keeps the sequence non-increasing.
struct RelaxedVector {
  std::vector<double> d_star;
  std::vector<int> labels;
};

inline RelaxedVector relaxed_vector(const DistortionVector& d) {
  RelaxedVector rv;
  rv.d_star.reserve(d.size());
  rv.labels.reserve(d.size());
  int sum_labels = 0;
  double prev = 1.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    // 2^(1+sum) d_k is exact, so the >= 1 test of the recursion is exact
    double scaled = std::ldexp(d[k], 1 + sum_labels);
    if (scaled >= prev) {
      rv.d_star.push_back(prev);
      rv.labels.push_back(0);
    } else {
      rv.d_star.push_back(scaled);
      rv.labels.push_back(1);
      ++sum_labels;
      prev = scaled;
    }
  }
  return rv;
}

namespace detail {

inline void require_labels_match(const DistortionVector& d,
                                 std::span<const int> labels) {
  if (labels.size() != d.size())
    fail(ErrorCode::LengthMismatch, "one label per distortion required");
  RelaxedVector fresh = relaxed_vector(d);
  for (std::size_t k = 0; k < d.size(); ++k) {
    if ((labels[k] != 0) != (fresh.labels[k] != 0))
      fail(ErrorCode::InconsistentLabels,
           "labels do not match the relaxation of these distortions at user " +
               std::to_string(k + 1));
  }
}

}  // namespace detail

struct LabelBudget {
  std::size_t sum = 0;
  double bound = 0.0;  // log2(d_1 / d_K) + 1
};

inline LabelBudget label_budget(std::span<const int> labels,
                                const DistortionVector& d) {
  detail::require_labels_match(d, labels);
  LabelBudget out;
  for (int b : labels) out.sum += b != 0 ? 1 : 0;
  out.bound = std::log2(d[0] / d[d.size() - 1]) + 1.0;
  if (static_cast<double>(out.sum) > out.bound + 1e-12)
    fail(ErrorCode::InconsistentLabels,
         "label count exceeded its spread bound");  // defensive, never expected
  return out;
}

// tau_k = d_k where user k restarted the relaxation, else the previous
// tau, seeded with tau_0 = 1 ahead of the first user.
inline TauVector tau_for_relaxed(const DistortionVector& d,
                                 std::span<const int> labels) {
  detail::require_labels_match(d, labels);
  std::vector<double> tau;
  tau.reserve(d.size() >= 1 ? d.size() - 1 : 0);
  double carry = 1.0;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    if (labels[k] != 0) carry = d[k];
    tau.push_back(carry);
  }
  return TauVector(std::move(tau));
}

}  // namespace gsb
