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

#include "golden_section.h"

namespace evpark {
namespace {

CapacityProfile WithEv(const CapacityProfile& base, Firm firm, double ev) {
  FirmPair spots = base.ev;
  spots[Index(firm)] = ev;
  return CapacityProfile::FromEv(base.delta, spots[0], spots[1]);
}

}  // namespace

void PolicyConfig::Validate() const {
  if (!(mandate >= 0.0 && mandate <= 1.0)) {
    throw InvalidArgument("mandate r must lie in [0, 1]");
  }
  if (!std::isfinite(intrinsic_cost) || intrinsic_cost < 0.0) {
    throw InvalidArgument("intrinsic cost t must be finite and >= 0");
  }
  if (!(subsidy >= 0.0 && subsidy <= intrinsic_cost)) {
    throw InvalidArgument("subsidy s must lie in [0, t]");
  }
}

std::string ToString(CapacityRegime regime) {
  return regime == CapacityRegime::kNaiveMandate ? "naive-mandate" : "optimal";
}

std::optional<CapacityRegime> ParseCapacityRegime(std::string_view name) {
  if (name == "naive-mandate") return CapacityRegime::kNaiveMandate;
  if (name == "optimal") return CapacityRegime::kOptimalCapacity;
  return std::nullopt;
}

CapacityProfile NaiveMandateCapacities(double mandate, double delta) {
  return CapacityProfile::FromEv(delta, mandate * delta,
                                 mandate * (1.0 - delta));
}

SecondStage SolveSecondStage(const MarketParams& params,
                             const CapacityProfile& capacities,
                             PricingRegime regime,
                             const FixedPointOptions& options) {
  SecondStage stage;
  stage.prices = SolvePrices(params, capacities, regime, options);
  stage.quantities = WardropQuantities(params, capacities, stage.prices);
  return stage;
}

double FirmProfit(const SecondStage& stage, const CapacityProfile& capacities,
                  double effective_cost, Firm firm) {
  const int i = Index(firm);
  double profit = -effective_cost * capacities.ev[i];
  for (DriverClass cls : kDriverClasses) {
    const double q = stage.quantities.Of(cls)[i];
    if (q > 0.0) profit += *stage.prices.Of(cls)[i] * q;
  }
  return profit;
}

double FirmProfit(const MarketParams& params,
                  const CapacityProfile& capacities, PricingRegime regime,
                  double effective_cost, Firm firm) {
  return FirmProfit(SolveSecondStage(params, capacities, regime), capacities,
                    effective_cost, firm);
}

double BestResponseCapacity(const MarketParams& params,
                            const CapacityProfile& capacities, Firm firm,
                            const PolicyConfig& policy, PricingRegime regime,
                            const CapacitySearchOptions& options) {
  const double endowment = capacities.Endowment(firm);
  const double lo = policy.mandate * endowment;
  const double hi = endowment;
  if (!(hi - lo > 0.0)) return lo;

  const double cost = policy.EffectiveCost();
  auto profit = [&](double ev) {
    return FirmProfit(params, WithEv(capacities, firm, ev), regime, cost,
                      firm);
  };

  const int points = std::max(options.prescan_points, 3);
  const double step = (hi - lo) / (points - 1);
  int best_index = 0;
  double best_value = profit(lo);
  for (int k = 1; k < points; ++k) {
    const double x = (k == points - 1) ? hi : lo + k * step;
    const double value = profit(x);
    if (value > best_value) {
      best_value = value;
      best_index = k;
    }
  }

  const double left = lo + std::max(best_index - 1, 0) * step;
  const double right =
      best_index + 1 >= points - 1 ? hi : lo + (best_index + 1) * step;
  const double refined = internal::GoldenSectionMax(
      profit, left, right, options.capacity_tolerance);
  const double grid_best = (best_index == points - 1) ? hi : lo + best_index * step;
  return profit(refined) > best_value ? refined : grid_best;
}

CapacityEquilibrium OptimalCapacityEquilibrium(
    const MarketParams& params, const PolicyConfig& policy, double delta,
    PricingRegime regime, const CapacitySearchOptions& options) {
  params.Validate();
  policy.Validate();
  CapacityEquilibrium result;
  if (regime == PricingRegime::kOptimalSinglePrice) {
    if (!options.allow_unsupported_theory) {
      throw InvalidArgument(
          "optimal capacity under optimal single pricing requires the "
          "unsupported-theory opt-in");
    }
    result.warnings.push_back(
        "unsupported-theory: no existence guarantee for optimal capacity "
        "under optimal single pricing");
  }
  if (regime == PricingRegime::kTwoPrice &&
      (params.alpha * params.w_e > 1.0 || params.beta * params.w_d > 1.0 ||
       params.epsilon != 1.0)) {
    result.warnings.push_back(
        "outside existence conditions (alpha W_e <= 1, beta W_d <= 1, "
        "epsilon = 1)");
  }

  CapacityProfile profile = NaiveMandateCapacities(policy.mandate, delta);
  if (options.initial_ev) {
    profile = CapacityProfile::FromEv(delta, (*options.initial_ev)[0],
                                      (*options.initial_ev)[1]);
  }
  profile.Validate();

  std::vector<FirmPair> history;
  history.push_back(profile.ev);
  for (int round = 1; round <= options.max_rounds; ++round) {
    const FirmPair previous = profile.ev;
    for (Firm firm : kFirms) {
      const double ev = BestResponseCapacity(params, profile, firm, policy,
                                             regime, options);
      profile = WithEv(profile, firm, ev);
    }
    history.push_back(profile.ev);
    const double step = std::max(std::abs(profile.ev[0] - previous[0]),
                                 std::abs(profile.ev[1] - previous[1]));
    if (step < options.profile_tolerance) {
      result.capacities = profile;
      result.rounds = round;
      result.last_step = step;
      return result;
    }
  }
  throw CapacityConvergenceError(
      "capacity best responses did not settle within " +
          std::to_string(options.max_rounds) + " rounds",
      std::move(history));
}

}  // namespace evpark
