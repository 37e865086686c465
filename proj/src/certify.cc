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

#include "evpark/certify.h"

#include <algorithm>
#include <cmath>

namespace evpark {
namespace {

double Revenue(const MarketParams& params, const CapacityProfile& capacities,
               const PriceProfile& prices, int i) {
  const WardropOutcome outcome = WardropQuantities(params, capacities, prices);
  double revenue = 0.0;
  for (DriverClass cls : kDriverClasses) {
    const double q = outcome.Of(cls)[i];
    if (q > 0.0) revenue += *prices.Of(cls)[i] * q;
  }
  return revenue;
}

}  // namespace

double WardropResidual(const MarketParams& params,
                       const CapacityProfile& capacities,
                       const PriceProfile& prices,
                       const WardropOutcome& outcome) {
  double residual = 0.0;
  for (DriverClass cls : kDriverClasses) {
    for (Firm firm : kFirms) {
      if (outcome.Of(cls)[Index(firm)] <= 0.0) continue;
      residual = std::max(
          residual, std::abs(MarginalUtility(params, cls, firm, outcome,
                                             capacities, prices)));
    }
  }
  return residual;
}

double TwoPriceFixedPointResidual(const MarketParams& params,
                                  const CapacityProfile& capacities,
                                  const PriceProfile& prices) {
  double residual = 0.0;
  for (DriverClass cls : kDriverClasses) {
    const FirmPair& spots = capacities.Spots(cls);
    const PricePair& price = prices.Of(cls);
    for (int i = 0; i < 2; ++i) {
      const int j = 1 - i;
      if (spots[i] <= 0.0) continue;
      const double opp_price = spots[j] > 0.0 ? *price[j] : 0.0;
      const Price response =
          BestResponsePrice(params, cls, spots[i], spots[j], opp_price);
      residual = std::max(residual, std::abs(*response - *price[i]));
    }
  }
  return residual;
}

double SinglePriceFixedPointResidual(const MarketParams& params,
                                     const CapacityProfile& capacities,
                                     const PriceProfile& prices) {
  double residual = 0.0;
  for (Firm firm : kFirms) {
    const int i = Index(firm);
    if (!prices.ice[i]) continue;
    const double opp_price = prices.ice[1 - i].value_or(0.0);
    const Price response =
        SinglePriceBestResponse(params, capacities, firm, opp_price);
    residual = std::max(residual, std::abs(*response - *prices.ice[i]));
  }
  return residual;
}

double MaxPriceDeviationGain(const MarketParams& params,
                             const CapacityProfile& capacities,
                             const PriceProfile& prices, PricingRegime regime,
                             double radius, int points) {
  double gain = -INFINITY;
  for (int i = 0; i < 2; ++i) {
    const double base = Revenue(params, capacities, prices, i);
    auto scan = [&](auto&& shift) {
      for (int k = 0; k < points; ++k) {
        const double offset = -radius + 2.0 * radius * k / (points - 1);
        PriceProfile moved = prices;
        shift(moved, offset);
        gain = std::max(gain, Revenue(params, capacities, moved, i) - base);
      }
    };
    if (regime == PricingRegime::kTwoPrice) {
      for (DriverClass cls : kDriverClasses) {
        if (!prices.Of(cls)[i]) continue;
        scan([&](PriceProfile& moved, double offset) {
          *moved.Of(cls)[i] += offset;
        });
      }
    } else if (prices.ice[i]) {
      scan([&](PriceProfile& moved, double offset) {
        *moved.ev[i] += offset;
        *moved.ice[i] += offset;
      });
    }
  }
  return gain;
}

double MaxCapacityDeviationGain(const MarketParams& params,
                                const PolicyConfig& policy,
                                const CapacityProfile& capacities,
                                PricingRegime regime, int points) {
  const double cost = policy.EffectiveCost();
  double gain = -INFINITY;
  for (Firm firm : kFirms) {
    const int i = Index(firm);
    const double base = FirmProfit(params, capacities, regime, cost, firm);
    const double lo = policy.mandate * capacities.Endowment(firm);
    const double hi = capacities.Endowment(firm);
    for (int k = 0; k < points; ++k) {
      FirmPair ev = capacities.ev;
      ev[i] = k == points - 1 ? hi : lo + (hi - lo) * k / (points - 1);
      const CapacityProfile moved =
          CapacityProfile::FromEv(capacities.delta, ev[0], ev[1]);
      gain = std::max(gain,
                      FirmProfit(params, moved, regime, cost, firm) - base);
    }
  }
  return gain;
}

}  // namespace evpark
