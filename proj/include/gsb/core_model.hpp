#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gsb/errors.hpp"

namespace gsb {

// Model conventions used throughout:
//  * the source has unit variance, so every distortion lives in (0, 1];
//  * users are indexed 0..K-1 from worst (largest noise) to best;
//  * noise[k] > 0 non-increasing in k (ties allowed, they contribute
//    zero-weight terms); the virtual noise beyond the best user is 0,
//    which makes delta_noise sum to noise[0];
//  * bandwidth b > 0 is channel uses per source sample.

class BroadcastChannel {
 public:
  BroadcastChannel(std::vector<double> noise, double power, double bandwidth)
      : noise_(std::move(noise)), power_(power), bandwidth_(bandwidth) {
    if (noise_.empty())
      fail(ErrorCode::DimensionMismatch, "channel needs at least one user");
    for (double n : noise_) {
      if (!(n > 0.0) || !std::isfinite(n))
        fail(ErrorCode::NonPositiveVariance,
             "noise variances must be finite and > 0");
    }
    for (std::size_t k = 0; k + 1 < noise_.size(); ++k) {
      if (!(noise_[k] >= noise_[k + 1]))
        fail(ErrorCode::UnsortedNoise,
             "noise must be non-increasing (worst user first)");
    }
    if (!(power_ > 0.0) || !std::isfinite(power_))
      fail(ErrorCode::NonPositivePower, "power must be finite and > 0");
    if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_))
      fail(ErrorCode::NonPositiveBandwidth,
           "bandwidth must be finite and > 0");
  }

  std::size_t users() const noexcept { return noise_.size(); }
  double power() const noexcept { return power_; }
  double bandwidth() const noexcept { return bandwidth_; }

  double noise(std::size_t k) const {
    if (k >= noise_.size())
      fail(ErrorCode::IndexOutOfRange,
           "noise index " + std::to_string(k) + " out of range");
    return noise_[k];
  }

  std::span<const double> noises() const noexcept { return noise_; }

  // N_k - N_{k+1}, with N_K == 0 past the best user. Zero under a tie.
  double delta_noise(std::size_t k) const {
    if (k >= noise_.size())
      fail(ErrorCode::IndexOutOfRange,
           "delta_noise index " + std::to_string(k) + " out of range");
    return k + 1 < noise_.size() ? noise_[k] - noise_[k + 1] : noise_[k];
  }

  // Common right-hand side of every region inequality.
  double budget() const noexcept { return power_ + noise_[0]; }

 private:
  std::vector<double> noise_;
  double power_;
  double bandwidth_;
};

struct CanonicalChannel {
  BroadcastChannel channel;
  // permutation[i] = index in the caller's noise array that became user i.
  std::vector<std::size_t> permutation;
};

// Accepts noises in any order, sorts them worst-first, and reports which
// input slot each canonical user came from. Ties keep their input order.
inline CanonicalChannel canonicalize_channel(std::span<const double> noise,
                                             double power, double bandwidth) {
  std::vector<std::size_t> perm(noise.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) {
                     return noise[a] > noise[b];
                   });
  std::vector<double> sorted;
  sorted.reserve(noise.size());
  for (std::size_t i : perm) sorted.push_back(noise[i]);
  return {BroadcastChannel(std::move(sorted), power, bandwidth),
          std::move(perm)};
}

// One distortion per user; strictly positive, at most 1, non-increasing
// (worse users tolerate more distortion). Zero is excluded at the type
// level because every region term carries a d^(-1/b); the d -> 0 limits
// are answered by membership_with_limits in the regions layer, which
// works on raw spans.
class DistortionVector {
 public:
  explicit DistortionVector(std::vector<double> d) : d_(std::move(d)) {
    if (d_.empty())
      fail(ErrorCode::DimensionMismatch, "need at least one distortion");
    for (double v : d_) {
      if (!(v > 0.0) || !(v <= 1.0))
        fail(ErrorCode::OutOfRange, "distortions must lie in (0, 1]");
    }
    for (std::size_t k = 0; k + 1 < d_.size(); ++k) {
      if (d_[k] < d_[k + 1])
        fail(ErrorCode::NotMonotone, "distortions must be non-increasing");
    }
  }

  std::size_t size() const noexcept { return d_.size(); }

  double operator[](std::size_t k) const {
    if (k >= d_.size())
      fail(ErrorCode::IndexOutOfRange,
           "distortion index " + std::to_string(k) + " out of range");
    return d_[k];
  }

  std::span<const double> values() const noexcept { return d_; }

 private:
  std::vector<double> d_;
};

// Length-checked construction for callers holding raw arrays.
inline DistortionVector validate_distortions(std::span<const double> d,
                                             std::size_t users) {
  if (d.size() != users)
    fail(ErrorCode::LengthMismatch,
         "expected " + std::to_string(users) + " distortions, got " +
             std::to_string(d.size()));
  return DistortionVector(std::vector<double>(d.begin(), d.end()));
}

// Slack parameters of the parametric outer bound. For K users there are
// K-1 free values tau_0 >= tau_1 >= ... >= tau_{K-2} >= 0; the implicit
// tau for the best user is always 0. +infinity entries are legal and mean
// the joint limit where every infinite tau grows together.
class TauVector {
 public:
  // K = one more than the number of stored values.
  explicit TauVector(std::vector<double> tau) : tau_(std::move(tau)) {
    for (double t : tau_) {
      if (std::isnan(t) || t < 0.0)
        fail(ErrorCode::InvalidTau, "tau values must be >= 0 (or +inf)");
    }
    for (std::size_t k = 0; k + 1 < tau_.size(); ++k) {
      if (tau_[k] < tau_[k + 1])
        fail(ErrorCode::NotMonotone, "tau values must be non-increasing");
    }
  }

  static TauVector zeros(std::size_t users) {
    if (users == 0)
      fail(ErrorCode::DimensionMismatch, "need at least one user");
    return TauVector(std::vector<double>(users - 1, 0.0));
  }

  // All-infinite slack; with one user there is nothing to store.
  static TauVector infinite(std::size_t users) {
    if (users == 0)
      fail(ErrorCode::DimensionMismatch, "need at least one user");
    return TauVector(std::vector<double>(
        users - 1, std::numeric_limits<double>::infinity()));
  }

  std::size_t users() const noexcept { return tau_.size() + 1; }

  // tau_k for user k; the final user's tau is pinned to 0.
  double operator[](std::size_t k) const {
    if (k >= users())
      fail(ErrorCode::IndexOutOfRange,
           "tau index " + std::to_string(k) + " out of range");
    return k < tau_.size() ? tau_[k] : 0.0;
  }

  std::span<const double> values() const noexcept { return tau_; }

 private:
  std::vector<double> tau_;
};

}  // namespace gsb
