// Copyright 2026 The evpark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evpark/capacity.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "evpark/certify.h"
#include "evpark/welfare.h"
#include "oracles.h"

namespace evpark {
namespace {

MarketParams Fig1Params() { return {1.25, 1.0, 5.0, 1.0, 1.0}; }
MarketParams Fig3Params() { return {1.0, 0.9, 1.0, 0.33, 1.0}; }

TEST_CASE("naive mandate capacities") {
  CapacityProfile caps = NaiveMandateCapacities(0.0, 0.6);
  CHECK(caps.ev == FirmPair{0.0, 0.0});
  CHECK(caps.ice[0] == doctest::Approx(0.6));
  CHECK(caps.ice[1] == doctest::Approx(0.4));
  caps = NaiveMandateCapacities(0.5, 0.6);
  CHECK(caps.ev[0] == doctest::Approx(0.3));
  CHECK(caps.ev[1] == doctest::Approx(0.2));
  caps = NaiveMandateCapacities(1.0, 0.5);
  CHECK(caps.ev == FirmPair{0.5, 0.5});
  CHECK(caps.ice == FirmPair{0.0, 0.0});
}

TEST_CASE("policy validation") {
  CHECK_NOTHROW((PolicyConfig{0.3, 0.1, 0.1}).Validate());
  CHECK_THROWS_AS((PolicyConfig{1.2, 0.1, 0.0}).Validate(), InvalidArgument);
  CHECK_THROWS_AS((PolicyConfig{0.2, 0.1, 0.2}).Validate(), InvalidArgument);
  CHECK_THROWS_AS((PolicyConfig{0.2, -0.1, 0.0}).Validate(), InvalidArgument);
}

TEST_CASE("a firm without EV spots earns ICE revenue only") {
  const MarketParams params = Fig1Params();
  const CapacityProfile caps = CapacityProfile::FromEv(0.6, 0.0, 0.1);
  const SecondStage stage =
      SolveSecondStage(params, caps, PricingRegime::kTwoPrice);
  const double expected = *stage.prices.ice[0] * stage.quantities.ice[0];
  for (double cost : {0.0, 0.5, 10.0}) {
    CHECK(FirmProfit(params, caps, PricingRegime::kTwoPrice, cost,
                     Firm::kOne) == doctest::Approx(expected));
  }
}

TEST_CASE("symmetric firms earn the same") {
  const CapacityProfile caps = NaiveMandateCapacities(0.3, 0.5);
  for (PricingRegime regime :
       {PricingRegime::kTwoPrice, PricingRegime::kOptimalSinglePrice,
        PricingRegime::kNaiveSinglePrice}) {
    CHECK(FirmProfit(Fig1Params(), caps, regime, 0.05, Firm::kOne) ==
          doctest::Approx(
              FirmProfit(Fig1Params(), caps, regime, 0.05, Firm::kTwo))
              .epsilon(1e-10));
  }
}

TEST_CASE("profit composes independently solved prices and quantities") {
  const MarketParams params = Fig1Params();
  const CapacityProfile caps = NaiveMandateCapacities(0.2, 0.6);
  const double cost = 0.02;
  double expected[2] = {0.0, 0.0};
  for (DriverClass cls : kDriverClasses) {
    const auto prices = oracle::LinearBestResponseIntersection(
        params.Intercept(cls), params.Slope(cls), params.epsilon,
        caps.Spots(cls));
    const auto q = oracle::WardropBySupport(params.Intercept(cls),
                                            params.Slope(cls), params.epsilon,
                                            caps.Spots(cls), prices);
    for (int i = 0; i < 2; ++i) expected[i] += prices[i] * q[i];
  }
  for (Firm firm : kFirms) {
    const int i = Index(firm);
    CHECK(FirmProfit(params, caps, PricingRegime::kTwoPrice, cost, firm) ==
          doctest::Approx(expected[i] - cost * caps.ev[i]).epsilon(1e-12));
  }
}

TEST_CASE("conversion never pays at a prohibitive cost") {
  const CapacityEquilibrium eq = OptimalCapacityEquilibrium(
      Fig3Params(), PolicyConfig{0.0, 100.0, 0.0}, 0.6,
      PricingRegime::kTwoPrice);
  CHECK(eq.capacities.ev == FirmPair{0.0, 0.0});
}

TEST_CASE("equal endowments give equal capacities and survive a fine grid") {
  const MarketParams params = Fig3Params();
  const PolicyConfig policy{0.0, 0.1, 0.0};
  const CapacityEquilibrium eq = OptimalCapacityEquilibrium(
      params, policy, 0.5, PricingRegime::kTwoPrice);
  CHECK(eq.capacities.ev[0] ==
        doctest::Approx(eq.capacities.ev[1]).epsilon(1e-6));
  CHECK(eq.warnings.empty());
  // Unilateral deviations on a 1e-3 grid of own capacity.
  for (Firm firm : kFirms) {
    const int i = Index(firm);
    const double base = FirmProfit(params, eq.capacities,
                                   PricingRegime::kTwoPrice, 0.1, firm);
    for (int k = 0; k <= 500; ++k) {
      FirmPair ev = eq.capacities.ev;
      ev[i] = k * 1e-3;
      const CapacityProfile moved = CapacityProfile::FromEv(0.5, ev[0], ev[1]);
      CHECK(FirmProfit(params, moved, PricingRegime::kTwoPrice, 0.1, firm) <=
            base + 1e-6);
    }
  }
}

TEST_CASE("a binding mandate is respected") {
  const PolicyConfig policy{0.33, 0.1, 0.1};
  for (double delta : {0.5, 0.7, 0.9}) {
    const CapacityEquilibrium eq = OptimalCapacityEquilibrium(
        Fig3Params(), policy, delta, PricingRegime::kTwoPrice);
    CHECK(eq.capacities.ev[0] >= 0.33 * delta - 1e-12);
    CHECK(eq.capacities.ev[1] >= 0.33 * (1 - delta) - 1e-12);
  }
}

TEST_CASE("optimal single pricing needs the opt-in") {
  const PolicyConfig policy{0.0, 0.1, 0.0};
  CHECK_THROWS_AS(
      OptimalCapacityEquilibrium(Fig3Params(), policy, 0.5,
                                 PricingRegime::kOptimalSinglePrice),
      InvalidArgument);
  CapacitySearchOptions options;
  options.allow_unsupported_theory = true;
  options.prescan_points = 101;
  const CapacityEquilibrium eq =
      OptimalCapacityEquilibrium(Fig3Params(), policy, 0.5,
                                 PricingRegime::kOptimalSinglePrice, options);
  REQUIRE(eq.warnings.size() == 1);
  CHECK(eq.warnings[0].find("unsupported-theory") != std::string::npos);
}

TEST_CASE("parameters outside the existence conditions warn") {
  const CapacityEquilibrium eq = OptimalCapacityEquilibrium(
      Fig1Params(), PolicyConfig{0.0, 0.05, 0.0}, 0.6,
      PricingRegime::kTwoPrice);
  CHECK_FALSE(eq.warnings.empty());
}

TEST_CASE("too few rounds reports the history") {
  CapacitySearchOptions options;
  options.max_rounds = 1;
  options.initial_ev = FirmPair{0.5, 0.5};
  try {
    OptimalCapacityEquilibrium(Fig3Params(), PolicyConfig{0.0, 0.1, 0.0}, 0.5,
                               PricingRegime::kTwoPrice, options);
    FAIL("expected CapacityConvergenceError");
  } catch (const CapacityConvergenceError& e) {
    CHECK(e.history().size() == 2);
    CHECK(e.history()[0] == FirmPair{0.5, 0.5});
  }
}

TEST_CASE("random starts converge to the same capacities") {
  std::mt19937_64 rng(31);
  for (int draw = 0; draw < 20; ++draw) {
    const MarketParams params = oracle::RandomExistenceMarket(rng);
    const double delta = oracle::Uniform(rng, 0.5, 0.9);
    const PolicyConfig policy{oracle::Uniform(rng, 0.0, 0.4),
                              oracle::Uniform(rng, 0.0, 0.2), 0.0};
    const CapacityEquilibrium base = OptimalCapacityEquilibrium(
        params, policy, delta, PricingRegime::kTwoPrice);
    CapacitySearchOptions options;
    options.initial_ev =
        FirmPair{delta * oracle::Uniform(rng, policy.mandate, 1.0),
                 (1 - delta) * oracle::Uniform(rng, policy.mandate, 1.0)};
    const CapacityEquilibrium other = OptimalCapacityEquilibrium(
        params, policy, delta, PricingRegime::kTwoPrice, options);
    CHECK(std::abs(other.capacities.ev[0] - base.capacities.ev[0]) < 1e-6);
    CHECK(std::abs(other.capacities.ev[1] - base.capacities.ev[1]) < 1e-6);
    CHECK(MaxCapacityDeviationGain(params, policy, base.capacities,
                                   PricingRegime::kTwoPrice) <= 1e-6);
  }
}

TEST_CASE("equal split of EV spots maximizes EV traffic") {
  std::mt19937_64 rng(32);
  for (int draw = 0; draw < 50; ++draw) {
    const MarketParams params = oracle::RandomMarket(rng);
    // K EV spots split (K - x, x); each firm owns half the lot.
    const double total = oracle::Uniform(rng, 0.02, 0.5);
    auto served = [&](double x) {
      const CapacityProfile caps = CapacityProfile::FromEv(0.5, total - x, x);
      const SecondStage stage =
          SolveSecondStage(params, caps, PricingRegime::kTwoPrice);
      return stage.quantities.ev[0] + stage.quantities.ev[1];
    };
    const double mid = served(total / 2);
    for (int k = 0; k <= 20; ++k) {
      CHECK(served(total * k / 20.0) <= mid + 1e-12);
    }
  }
}

TEST_CASE("regime names round-trip") {
  for (CapacityRegime regime :
       {CapacityRegime::kNaiveMandate, CapacityRegime::kOptimalCapacity}) {
    CHECK(ParseCapacityRegime(ToString(regime)) == regime);
  }
  CHECK_FALSE(ParseCapacityRegime("mandate").has_value());
}

}  // namespace
}  // namespace evpark
