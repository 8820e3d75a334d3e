#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "gsb/core_model.hpp"
#include "helpers.hpp"

using namespace gsb;

TEST_CASE("channel accessors and noise increments") {
  BroadcastChannel ch({10.0, 1.0}, 50.0, 2.0);
  REQUIRE(ch.users() == 2);
  REQUIRE(ch.power() == 50.0);
  REQUIRE(ch.bandwidth() == 2.0);
  REQUIRE(ch.noise(0) == 10.0);
  REQUIRE(ch.noise(1) == 1.0);
  REQUIRE(ch.delta_noise(0) == 9.0);
  REQUIRE(ch.delta_noise(1) == 1.0);
  REQUIRE(ch.budget() == 60.0);
}

TEST_CASE("noise ties are legal and give zero-weight increments") {
  BroadcastChannel ch({5.0, 5.0, 2.0}, 1.0, 1.0);
  REQUIRE(ch.delta_noise(0) == 0.0);
  REQUIRE(ch.delta_noise(1) == 3.0);
  REQUIRE(ch.delta_noise(2) == 2.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < ch.users(); ++k) sum += ch.delta_noise(k);
  REQUIRE(sum == ch.noise(0));
}

TEST_CASE("channel validation") {
  auto inf = std::numeric_limits<double>::infinity();
  auto nan = std::numeric_limits<double>::quiet_NaN();
  REQUIRE(error_code_of([] { BroadcastChannel({}, 1.0, 1.0); }) ==
          ErrorCode::DimensionMismatch);
  REQUIRE(error_code_of([] { BroadcastChannel({1.0, 2.0}, 1.0, 1.0); }) ==
          ErrorCode::UnsortedNoise);
  REQUIRE(error_code_of([] { BroadcastChannel({0.0}, 1.0, 1.0); }) ==
          ErrorCode::NonPositiveVariance);
  REQUIRE(error_code_of([&] { BroadcastChannel({nan}, 1.0, 1.0); }) ==
          ErrorCode::NonPositiveVariance);
  REQUIRE(error_code_of([&] { BroadcastChannel({inf}, 1.0, 1.0); }) ==
          ErrorCode::NonPositiveVariance);
  REQUIRE(error_code_of([] { BroadcastChannel({1.0}, 0.0, 1.0); }) ==
          ErrorCode::NonPositivePower);
  REQUIRE(error_code_of([] { BroadcastChannel({1.0}, 1.0, -2.0); }) ==
          ErrorCode::NonPositiveBandwidth);
  REQUIRE(error_code_of([] { BroadcastChannel({1.0}, 1.0, 1.0).noise(1); }) ==
          ErrorCode::IndexOutOfRange);
  REQUIRE(error_code_of(
              [] { BroadcastChannel({1.0}, 1.0, 1.0).delta_noise(7); }) ==
          ErrorCode::IndexOutOfRange);
}

TEST_CASE("canonicalize sorts worst-first and reports the permutation") {
  std::vector<double> noise{1.0, 10.0, 3.0};
  auto canon = canonicalize_channel(noise, 2.0, 1.0);
  REQUIRE(canon.channel.noise(0) == 10.0);
  REQUIRE(canon.channel.noise(1) == 3.0);
  REQUIRE(canon.channel.noise(2) == 1.0);
  REQUIRE(canon.permutation == std::vector<std::size_t>{1, 2, 0});

  // ties keep input order
  std::vector<double> tied{2.0, 5.0, 5.0};
  auto canon2 = canonicalize_channel(tied, 2.0, 1.0);
  REQUIRE(canon2.permutation == std::vector<std::size_t>{1, 2, 0});
}

TEST_CASE("distortion vector validation") {
  REQUIRE_NOTHROW(DistortionVector({0.5, 0.3}));
  REQUIRE_NOTHROW(DistortionVector({1.0, 1.0}));
  REQUIRE(error_code_of([] { DistortionVector({0.3, 0.5}); }) ==
          ErrorCode::NotMonotone);
  REQUIRE(error_code_of([] { DistortionVector({0.5, 0.0}); }) ==
          ErrorCode::OutOfRange);
  REQUIRE(error_code_of([] { DistortionVector({1.5}); }) ==
          ErrorCode::OutOfRange);
  REQUIRE(error_code_of([] { DistortionVector({-0.25}); }) ==
          ErrorCode::OutOfRange);
  REQUIRE(error_code_of([] {
            DistortionVector({std::numeric_limits<double>::quiet_NaN()});
          }) == ErrorCode::OutOfRange);
  REQUIRE(error_code_of([] { DistortionVector(std::vector<double>{}); }) ==
          ErrorCode::DimensionMismatch);
  DistortionVector d({0.5, 0.3});
  REQUIRE(d.size() == 2);
  REQUIRE(d[0] == 0.5);
  REQUIRE(error_code_of([&] { (void)d[2]; }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("validate_distortions checks length then delegates") {
  std::vector<double> d{0.5, 0.3};
  REQUIRE_NOTHROW(validate_distortions(d, 2));
  REQUIRE(error_code_of([&] { validate_distortions(d, 3); }) ==
          ErrorCode::LengthMismatch);
}

TEST_CASE("tau vector stores K-1 values and pins the last user to zero") {
  auto inf = std::numeric_limits<double>::infinity();
  TauVector t({2.0, 0.5});
  REQUIRE(t.users() == 3);
  REQUIRE(t[0] == 2.0);
  REQUIRE(t[1] == 0.5);
  REQUIRE(t[2] == 0.0);  // implicit
  REQUIRE(error_code_of([&] { (void)t[3]; }) == ErrorCode::IndexOutOfRange);

  REQUIRE_NOTHROW(TauVector({inf, inf, 0.25}));
  REQUIRE_NOTHROW(TauVector(std::vector<double>{}));  // single user
  REQUIRE(error_code_of([] { TauVector({-1.0}); }) == ErrorCode::InvalidTau);
  REQUIRE(error_code_of([] {
            TauVector({std::numeric_limits<double>::quiet_NaN()});
          }) == ErrorCode::InvalidTau);
  REQUIRE(error_code_of([] { TauVector({0.5, 2.0}); }) ==
          ErrorCode::NotMonotone);

  REQUIRE(TauVector::zeros(3).users() == 3);
  REQUIRE(TauVector::zeros(3)[0] == 0.0);
  REQUIRE(TauVector::infinite(2)[0] == inf);
  REQUIRE(error_code_of([] { TauVector::zeros(0); }) ==
          ErrorCode::DimensionMismatch);
}
