#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "gsb/errors.hpp"

// Runs f and reports which library error it threw, if any.
template <typename F>
std::optional<gsb::ErrorCode> error_code_of(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const gsb::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double rel_err(double got, double want) {
  double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

// log-uniform sample in [lo, hi]
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// Random valid distortion profile: non-increasing values in [floor, 1].
inline std::vector<double> random_distortions(std::mt19937_64& rng,
                                              std::size_t users,
                                              double floor = 1e-4) {
  std::vector<double> d(users);
  for (auto& v : d) v = log_uniform(rng, floor, 1.0);
  std::sort(d.begin(), d.end(), std::greater<double>());
  return d;
}

// Random channel noises, worst user first.
inline std::vector<double> random_noises(std::mt19937_64& rng,
                                         std::size_t users,
                                         double lo = 1e-2, double hi = 1e2) {
  std::vector<double> n(users);
  for (auto& v : n) v = log_uniform(rng, lo, hi);
  std::sort(n.begin(), n.end(), std::greater<double>());
  return n;
}
