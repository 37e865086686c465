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

#include "evpark/monopolist.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.h"

namespace evpark::monopolist {
namespace {

MonopolistParams Fig4(double p = 0.01) { return {1.25, 1.0, 1.0, p}; }

DemandDistribution Dist(std::vector<double> q, std::vector<double> pi) {
  return {std::move(q), std::move(pi)};
}

// Quantity served per realization at (N, c).
std::vector<double> Served(const MonopolistParams& params,
                           const DemandDistribution& dist, double n,
                           double c) {
  std::vector<double> served;
  for (double q : dist.sizes) served.push_back(EvDemand(params, n, c, q));
  return served;
}

TEST_CASE("ICE side") {
  const MonopolistParams params = Fig4();
  CHECK(IcePriceAndRevenue(params, 1.0).revenue == 0.0);
  CHECK(IcePriceAndRevenue(params, 0.0).revenue == doctest::Approx(0.25));
  CHECK(IcePriceAndRevenue(params, 0.196).revenue ==
        doctest::Approx(0.201).epsilon(1e-12));
  CHECK(IcePriceAndRevenue(params, 0.4).price == 0.5);
}

TEST_CASE("case 1 price") {
  const MonopolistParams params = Fig4();
  const DemandDistribution dist = Dist({0.1, 0.15, 0.3}, {0.4, 0.33, 0.27});
  CHECK(*Case1Price(params, dist, 0.196, 1) ==
        doctest::Approx(1.25 - 0.1 / 0.196).epsilon(1e-14));
  CHECK(*Case1Price(params, dist, 0.1 / 1.25, 1) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(Case1Price(params, dist, 0.05, 1).has_value());
  const DemandDistribution tiny = Dist({1e-9}, {1.0});
  CHECK(*Case1Price(params, tiny, 1.0, 1) == doctest::Approx(1.25));
}

TEST_CASE("case 2 price") {
  const MonopolistParams params = Fig4();
  const DemandDistribution dist = Dist({0.1, 0.15, 0.3}, {0.31, 0.33, 0.36});
  SUBCASE("window membership at N = 0.279") {
    const double n = 0.279;
    const double c = 1.25 / 2 + 0.31 * 0.1 / (2 * 0.69 * n);
    const double served = n * (1.25 - c);
    const bool inside = served > 0.1 && served < 0.15;
    CHECK(Case2Price(params, dist, n, 1).has_value() == inside);
    CHECK_FALSE(inside);  // just above q_2
  }
  SUBCASE("inside the window") {
    const double n = 0.25;
    const std::optional<double> c = Case2Price(params, dist, n, 1);
    REQUIRE(c.has_value());
    CHECK(*c == doctest::Approx(0.625 + 0.031 / (2 * 0.69 * n)));
    const double served = n * (1.25 - *c);
    CHECK(served > 0.1);
    CHECK(served < 0.15);
  }
  SUBCASE("vanishing served mass reduces to the case 3 price") {
    const DemandDistribution light = Dist({1e-12, 1.0}, {0.5, 0.5});
    CHECK(*Case2Price(params, light, 0.5, 1) ==
          doctest::Approx(0.625).epsilon(1e-10));
  }
  SUBCASE("small capacity is infeasible") {
    CHECK_FALSE(Case2Price(params, dist, 0.01, 1).has_value());
  }
  CHECK_THROWS_AS(Case2Price(params, dist, 0.3, 3), InvalidArgument);
}

TEST_CASE("case 3 price") {
  const MonopolistParams params = Fig4();
  const DemandDistribution dist = Dist({0.1, 0.15, 0.3}, {0.4, 0.33, 0.27});
  const std::optional<double> c = Case3Price(params, dist, 0.1);
  REQUIRE(c.has_value());
  CHECK(*c == 0.625);
  CHECK(EvDemand(params, 0.1, *c, 0.1) == doctest::Approx(0.0625));
  CHECK_FALSE(Case3Price(params, dist, 0.2).has_value());
  const DemandDistribution huge = Dist({100.0}, {1.0});
  for (double n : {0.01, 0.5, 1.0}) {
    CHECK(Case3Price(params, huge, n).has_value());
  }
}

TEST_CASE("expected profit") {
  const MonopolistParams params = Fig4();
  const DemandDistribution dist = Dist({0.1, 0.15, 0.3}, {0.4, 0.33, 0.27});
  for (const PricingCase& pc : AllCases(3)) {
    CHECK(ExpectedProfit(params, dist, 0.0, pc) == doctest::Approx(0.25));
  }
  CHECK_THROWS_AS(ExpectedProfit(params, dist, 0.05, PricingCase::Case1(1)),
                  InfeasibleCase);
  SUBCASE("single realization closed form") {
    const DemandDistribution one = Dist({0.2}, {1.0});
    for (double n : {0.2, 0.4, 0.8}) {
      const double expected =
          (1.25 - 0.2 / n) * 0.2 + (1 - n) * 0.25 - 0.01 * n;
      CHECK(ExpectedProfit(params, one, n, PricingCase::Case1(1)) ==
            doctest::Approx(expected).epsilon(1e-14));
    }
  }
  SUBCASE("agrees with direct evaluation at the case price") {
    for (const PricingCase& pc : AllCases(3)) {
      for (double n = 0.05; n < 1.0; n += 0.05) {
        const std::optional<double> c = CasePrice(params, dist, n, pc);
        if (!c) continue;
        CHECK(ExpectedProfit(params, dist, n, pc) ==
              doctest::Approx(oracle::MonopolistProfitAtPrice(params, dist, n,
                                                              *c))
                  .epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("case ordering") {
  const std::vector<PricingCase> cases = AllCases(3);
  REQUIRE(cases.size() == 6);
  CHECK(cases[0] == PricingCase::Case3());
  CHECK(cases[1] == PricingCase::Case1(1));
  CHECK(cases[2] == PricingCase::Case2(1));
  CHECK(cases[5] == PricingCase::Case1(3));
  CHECK(ToString(cases[2]) == "case2");
}

TEST_CASE("case 1 optimal capacities") {
  CHECK(OptimalCapacityCase1(
            Fig4(), Dist({0.1, 0.15, 0.3}, {0.4, 0.33, 0.27}), 1) ==
        doctest::Approx(0.196).epsilon(0.002 / 0.196));
  CHECK(OptimalCapacityCase1(
            Fig4(), Dist({0.1, 0.15, 0.3}, {0.31, 0.33, 0.36}), 2) ==
        doctest::Approx(0.279).epsilon(0.002 / 0.279));
  CHECK(OptimalCapacityCase1(
            Fig4(0.0), Dist({0.1, 0.15, 0.5}, {0.2, 0.15, 0.65}), 3) ==
        doctest::Approx(0.857).epsilon(0.002 / 0.857));
  // Capped at the whole lot.
  CHECK(OptimalCapacityCase1(Fig4(0.0), Dist({5.0}, {1.0}), 1) == 1.0);
}

TEST_CASE("theorem assumptions") {
  const TheoremAssumptions ok = VerifyTheoremAssumptions(
      Fig4(), Dist({0.1, 0.15, 0.3}, {0.4, 0.33, 0.27}));
  CHECK(ok.ev_value_exceeds_congestion);
  CHECK(ok.conversion_pays);
  CHECK_FALSE(
      VerifyTheoremAssumptions(Fig4(), Dist({1.0}, {1.0}))
          .ev_value_exceeds_congestion);
  CHECK_FALSE(
      VerifyTheoremAssumptions(Fig4(100.0), Dist({0.1}, {1.0}))
          .conversion_pays);
}

TEST_CASE("reported optima") {
  const MonopolistSolution a =
      SolveMonopolist(Fig4(), Dist({0.1, 0.15, 0.3}, {0.4, 0.33, 0.27}));
  CHECK(a.ev_spots == doctest::Approx(0.196).epsilon(0.002 / 0.196));
  CHECK(a.pricing_case == PricingCase::Case1(1));
  CHECK(a.oracle_agrees);
  CHECK_FALSE(a.used_grid_search);
  const MonopolistSolution d =
      SolveMonopolist(Fig4(), Dist({0.1, 0.15, 0.5}, {0.2, 0.1, 0.7}));
  CHECK(d.ev_spots == doctest::Approx(0.860).epsilon(0.002 / 0.86));
  CHECK(d.pricing_case == PricingCase::Case1(3));
}

TEST_CASE("unbounded single market falls back to the grid") {
  const DemandDistribution one = Dist({100.0}, {1.0});
  const MonopolistSolution solution = SolveMonopolist(Fig4(), one);
  CHECK(solution.used_grid_search);
  CHECK(solution.oracle_agrees);
  const oracle::MonopolistGridOptimum grid =
      oracle::MonopolistGrid(Fig4(), one, 1e-4);
  CHECK(std::abs(solution.expected_profit - grid.best.profit) < 1e-6);
  CHECK(solution.ev_price == doctest::Approx(0.625));
}

TEST_CASE("degenerate distributions are rejected") {
  CHECK_THROWS_AS(SolveMonopolist(Fig4(), Dist({}, {})), InvalidArgument);
  CHECK_THROWS_AS(Dist({0.1, 0.2}, {0.5, 0.4}).Validate(), InvalidArgument);
  CHECK_THROWS_AS(Dist({0.2, 0.1}, {0.5, 0.5}).Validate(), InvalidArgument);
  CHECK_THROWS_AS(Dist({0.1, 0.2}, {1.0, 0.0}).Validate(), InvalidArgument);
}

using Draw = oracle::MonopolistDraw;

Draw RandomDraw(std::mt19937_64& rng) { return oracle::RandomMonopolist(rng); }

TEST_CASE("an optimum below the spot cap serves a case 1 pattern") {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 30; ++k) {
    const Draw draw = RandomDraw(rng);
    REQUIRE(VerifyTheoremAssumptions(draw.params, draw.dist).all());
    const oracle::MonopolistGridOptimum grid =
        oracle::MonopolistGrid(draw.params, draw.dist, 1e-3);
    if (grid.ev_spots >= 1.0) continue;
    const std::vector<double> served = Served(
        draw.params, draw.dist, grid.ev_spots, grid.best.price);
    // The most a state receives is one of the q_t, and smaller states are
    // served in full.
    const double top = *std::max_element(served.begin(), served.end());
    bool matches = false;
    for (int t = 0; t < draw.dist.size(); ++t) {
      if (std::abs(top - draw.dist.sizes[t]) > 1e-9) continue;
      matches = true;
      for (int i = 0; i < draw.dist.size(); ++i) {
        CHECK(served[i] ==
              doctest::Approx(std::min(draw.dist.sizes[i], draw.dist.sizes[t]))
                  .epsilon(1e-9));
      }
    }
    CHECK(matches);
  }
}

TEST_CASE("case 2 profit peaks at a window edge") {
  std::mt19937_64 rng(52);
  for (int k = 0; k < 100; ++k) {
    const Draw draw = RandomDraw(rng);
    for (int t = 1; t < draw.dist.size(); ++t) {
      std::vector<double> window;
      std::vector<double> profit;
      for (int j = 1; j <= 2000; ++j) {
        const double n = j / 2000.0;
        if (!Case2Price(draw.params, draw.dist, n, t)) continue;
        window.push_back(n);
        profit.push_back(
            ExpectedProfit(draw.params, draw.dist, n, PricingCase::Case2(t)));
      }
      if (profit.size() < 3) continue;
      const double edge = std::max(profit.front(), profit.back());
      for (size_t i = 1; i + 1 < profit.size(); ++i) {
        CHECK(profit[i] <= edge + 1e-12);
      }
    }
  }
}

// Case 3 profit is linear in N_e with slope (W_e^2 - W_d^2) / (4 eps) - p;
// the escape holds exactly when that slope is positive.
TEST_CASE("leaving case 3 never hurts when case 3 profit rises") {
  std::mt19937_64 rng(53);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const Draw draw = RandomDraw(rng);
    const MonopolistParams& m = draw.params;
    if ((m.w_e * m.w_e - m.w_d * m.w_d) / (4 * m.epsilon) <=
        m.conversion_cost) {
      continue;
    }
    const double q1 = draw.dist.sizes[0];
    // Case 1 (t = 1) boundary where W_e / 2 serves exactly q_1.
    const double boundary = 2 * draw.params.epsilon * q1 / draw.params.w_e;
    if (boundary > 1.0) continue;
    for (int j = 1; j <= 50; ++j) {
      const double n = boundary * j / 51.0;
      if (!Case3Price(draw.params, draw.dist, n)) continue;
      ++checked;
      CHECK(ExpectedProfit(draw.params, draw.dist, boundary,
                           PricingCase::Case1(1)) >=
            ExpectedProfit(draw.params, draw.dist, n, PricingCase::Case3()) -
                1e-12);
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("solution price reproduces the case pattern") {
  std::mt19937_64 rng(54);
  for (int k = 0; k < 30; ++k) {
    const Draw draw = RandomDraw(rng);
    const MonopolistSolution solution = SolveMonopolist(draw.params, draw.dist);
    CHECK(solution.oracle_agrees);
    const int t = solution.pricing_case.target;
    const std::vector<double> served = Served(
        draw.params, draw.dist, solution.ev_spots, solution.ev_price);
    for (int i = 0; i < draw.dist.size(); ++i) {
      const double q = draw.dist.sizes[i];
      switch (solution.pricing_case.kind) {
        case PricingCase::Kind::kCase1:
          CHECK(served[i] ==
                doctest::Approx(std::min(q, draw.dist.sizes[t - 1]))
                    .epsilon(1e-12));
          break;
        case PricingCase::Kind::kCase2:
          if (i < t) {
            CHECK(served[i] == q);
          } else {
            CHECK(served[i] > draw.dist.sizes[t - 1]);
            CHECK(served[i] < draw.dist.sizes[t]);
          }
          break;
        case PricingCase::Kind::kCase3:
          CHECK(served[i] < draw.dist.sizes[0]);
          break;
      }
    }
  }
}

// Both assumptions hold here, yet the best plan serves strictly between q_1
// and q_2: the cheapest way to reach q_2 needs more than the whole lot.
TEST_CASE("the spot cap can make a case 2 price optimal") {
  const MonopolistParams params{1.25, 1.0, 1.0, 0.0};
  const DemandDistribution dist = Dist({0.1, 0.7}, {0.2, 0.8});
  REQUIRE(VerifyTheoremAssumptions(params, dist).all());
  const MonopolistSolution solution = SolveMonopolist(params, dist);
  CHECK(solution.used_grid_search);
  CHECK(solution.ev_spots == 1.0);
  CHECK(solution.pricing_case == PricingCase::Case2(1));
  CHECK(solution.expected_profit > solution.case1_candidates[0].profit);
  CHECK(solution.expected_profit > solution.case1_candidates[1].profit);
  const oracle::MonopolistGridOptimum grid =
      oracle::MonopolistGrid(params, dist, 1e-4);
  CHECK(solution.expected_profit ==
        doctest::Approx(grid.best.profit).epsilon(1e-9));
}

// The conversion check passes, but Case 3 profit falls with N_e because its
// slope is (W_e^2 - W_d^2) / (4 eps) - p < 0; leaving the lot alone wins.
TEST_CASE("a weak EV premium can make no conversion optimal") {
  const MonopolistParams params{1.0, 0.95, 1.0, 0.05};
  const DemandDistribution dist = Dist({0.1}, {1.0});
  REQUIRE(VerifyTheoremAssumptions(params, dist).all());
  const MonopolistSolution solution = SolveMonopolist(params, dist);
  CHECK(solution.used_grid_search);
  CHECK(solution.ev_spots == 0.0);
  CHECK(solution.expected_profit ==
        doctest::Approx(IcePriceAndRevenue(params, 0.0).revenue));
  CHECK(ExpectedProfit(params, dist, 0.1, PricingCase::Case3()) <
        ExpectedProfit(params, dist, 0.05, PricingCase::Case3()));
}

}  // namespace
}  // namespace evpark::monopolist
