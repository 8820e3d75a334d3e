#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "gsb/errors.hpp"

namespace gsb {

// Auxiliary-noise configuration for the mutual-information bounds: two
// additive-noise variances tau <= tau_prime attached to the same source,
// and a target distortion D for the estimator being bounded.
struct AuxNoiseParams {
  double tau = 0.0;
  double tau_prime = 0.0;
  double D = 1.0;

  AuxNoiseParams(double tau_, double tau_prime_, double D_)
      : tau(tau_), tau_prime(tau_prime_), D(D_) {
    if (!(tau >= 0.0) || !std::isfinite(tau))
      fail(ErrorCode::OutOfRange, "tau must be finite and >= 0");
    if (!(tau_prime >= tau) || !std::isfinite(tau_prime))
      fail(ErrorCode::OutOfRange, "tau_prime must be finite and >= tau");
    if (!(D > 0.0) || !(D <= 1.0))
      fail(ErrorCode::OutOfRange, "D must lie in (0, 1]");
  }
};

// (1/2) ln((1+tau')/(D+tau')): lower bound on I(U'; W) for any W through
// which the source is reconstructed at distortion <= D.
inline double mi_lower_bound(const AuxNoiseParams& p) {
  return 0.5 * std::log((1.0 + p.tau_prime) / (p.D + p.tau_prime));
}

// (1/2) ln((1+tau)(D+tau') / ((1+tau')(D+tau))): lower bound on
// I(U; W) - I(U'; W) for the same W, nonnegative since tau <= tau'.
inline double mi_difference_lower_bound(const AuxNoiseParams& p) {
  double num = (1.0 + p.tau) * (p.D + p.tau_prime);
  double den = (1.0 + p.tau_prime) * (p.D + p.tau);
  return 0.5 * std::log(num / den);
}

struct OracleMi {
  double mi = 0.0;          // I(U'; W)
  double mi_difference = 0.0;  // I(U; W) - I(U'; W)
};

// Exact values for the jointly Gaussian witness W = (1-D) S + xi with
// var(xi) = D(1-D), the MMSE estimate of S at distortion exactly D. Then
// var(U' | W) = D + tau' and both informations are half-log variance
// ratios. Computed through log1p in a different arrangement from the
// closed-form bounds so agreement is evidence, not tautology. Requires
// D < 1 (at D = 1 the witness degenerates to a constant).
inline OracleMi gaussian_oracle_mi(const AuxNoiseParams& p) {
  if (!(p.D < 1.0))
    fail(ErrorCode::OutOfRange, "oracle requires D < 1");
  OracleMi out;
  // I(U'; W) = (1/2)[ln(1+tau') - ln(D+tau')]
  out.mi = 0.5 * (std::log1p(p.tau_prime) - std::log(p.D + p.tau_prime));
  // I(U; W) - I(U'; W)
  //   = (1/2)[ln(1 + (tau - tau')/(1 + tau')) + ln(1 + (tau' - tau)/(D + tau))]
  out.mi_difference =
      0.5 * (std::log1p((p.tau - p.tau_prime) / (1.0 + p.tau_prime)) +
             std::log1p((p.tau_prime - p.tau) / (p.D + p.tau)));
  return out;
}

struct MonteCarloMi {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Monte Carlo estimate of I(U'; W) for the same Gaussian witness, by
// sampling the log density ratio ln(p(u'|w)/p(u')). Both densities are
// Gaussian, so the integrand is evaluated in closed form per sample and
// only the expectation is estimated.
inline MonteCarloMi monte_carlo_mi_estimate(const AuxNoiseParams& p,
                                            std::size_t samples,
                                            std::uint64_t seed) {
  if (samples < 10000)
    fail(ErrorCode::InsufficientSamples,
         "at least 10000 samples required for a stable estimate");
  if (!(p.D < 1.0))
    fail(ErrorCode::OutOfRange, "estimator requires D < 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double var_cond = p.D + p.tau_prime;    // var(U' | W)
  const double var_marg = 1.0 + p.tau_prime;    // var(U')
  const double c0 = 0.5 * std::log(var_marg / var_cond);
  const double sd_xi = std::sqrt(p.D * (1.0 - p.D));
  const double sd_v = std::sqrt(p.tau_prime);

  double mean = 0.0, m2 = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    double s = gauss(rng);
    double w = (1.0 - p.D) * s + sd_xi * gauss(rng);
    double u = s + sd_v * gauss(rng);
    double r = u - w;  // E[U' | W] = W
    double x = c0 - r * r / (2.0 * var_cond) + u * u / (2.0 * var_marg);
    double delta = x - mean;
    mean += delta / static_cast<double>(n + 1);
    m2 += delta * (x - mean);
  }
  double var = m2 / static_cast<double>(samples - 1);
  MonteCarloMi out;
  out.estimate = mean;
  out.std_error = std::sqrt(var / static_cast<double>(samples));
  out.samples = samples;
  return out;
}

}  // namespace gsb
