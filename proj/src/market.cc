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

#include "evpark/market.h"

#include <cmath>
#include <string>

namespace evpark {
namespace {

constexpr double kMassTolerance = 1e-12;

void RequirePositive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw InvalidArgument(std::string(name) + " must be finite and > 0, got " +
                          std::to_string(value));
  }
}

void RequireUnitMass(double value, const char* name) {
  if (!std::isfinite(value) || value < -kMassTolerance ||
      value > 1.0 + kMassTolerance) {
    throw InvalidArgument(std::string(name) + " must lie in [0, 1], got " +
                          std::to_string(value));
  }
}

}  // namespace

std::string ToString(DriverClass cls) {
  return cls == DriverClass::kEv ? "ev" : "ice";
}

void MarketParams::Validate() const {
  RequirePositive(w_e, "W_e");
  RequirePositive(w_d, "W_d");
  RequirePositive(alpha, "alpha");
  RequirePositive(beta, "beta");
  RequirePositive(epsilon, "epsilon");
  if (!(w_e > w_d)) {
    throw InvalidArgument("W_e must exceed W_d");
  }
}

CapacityProfile CapacityProfile::FromEv(double delta, double ev_1,
                                        double ev_2) {
  CapacityProfile profile;
  profile.delta = delta;
  profile.ev = {ev_1, ev_2};
  profile.ice = {delta - ev_1, (1.0 - delta) - ev_2};
  // Rounding can leave -1e-17 when a firm converts everything.
  for (double& spots : profile.ice) {
    if (spots < 0.0 && spots > -kMassTolerance) spots = 0.0;
  }
  return profile;
}

void CapacityProfile::Validate() const {
  RequireUnitMass(delta, "delta");
  for (Firm firm : kFirms) {
    const int i = Index(firm);
    RequireUnitMass(ev[i], "N_e");
    RequireUnitMass(ice[i], "N_d");
    if (std::abs(ev[i] + ice[i] - Endowment(firm)) > kMassTolerance) {
      throw InvalidArgument("spots of firm " + std::to_string(i + 1) +
                            " do not add up to its endowment");
    }
  }
}

ClassMarket MakeClassMarket(const MarketParams& params,
                            const CapacityProfile& capacities,
                            DriverClass cls) {
  return {params.Intercept(cls), params.Slope(cls), params.epsilon,
          capacities.Spots(cls)};
}

double MarginalUtility(const MarketParams& params, DriverClass cls, Firm firm,
                       const WardropOutcome& quantities,
                       const CapacityProfile& capacities,
                       const PriceProfile& prices) {
  const int i = Index(firm);
  const double spots = capacities.Spots(cls)[i];
  if (spots <= 0.0) {
    throw InfiniteCongestion("no " + ToString(cls) + " spots at firm " +
                             std::to_string(i + 1));
  }
  const Price& price = prices.Of(cls)[i];
  if (!price) {
    throw InvalidArgument("missing " + ToString(cls) + " price at firm " +
                          std::to_string(i + 1));
  }
  const FirmPair& q = quantities.Of(cls);
  return params.Intercept(cls) * (1.0 - params.Slope(cls) * (q[0] + q[1])) -
         params.epsilon * q[i] / spots - *price;
}

FirmPair ClassWardropQuantities(const ClassMarket& market,
                                const PricePair& prices) {
  std::array<bool, 2> active = {market.spots[0] > 0.0, market.spots[1] > 0.0};
  FirmPair scaled = {market.spots[0] / market.epsilon,
                     market.spots[1] / market.epsilon};
  FirmPair price = {0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    if (!active[i]) continue;
    if (!prices[i] || !std::isfinite(*prices[i])) {
      throw InvalidArgument("firm " + std::to_string(i + 1) +
                            " has spots but no finite price");
    }
    price[i] = *prices[i];
  }

  // With both firms serving, U_i = 0 at each gives q_i = N_i/eps (A - p_i)
  // where A = W (1 - slope Q) is the common gross value of the marginal
  // driver. Solving for A is a single linear equation.
  const double w = market.intercept;
  const double sw = market.slope * w;
  while (active[0] || active[1]) {
    double weighted_price = 0.0;
    double total_scaled = 0.0;
    for (int i = 0; i < 2; ++i) {
      if (!active[i]) continue;
      weighted_price += scaled[i] * price[i];
      total_scaled += scaled[i];
    }
    const double marginal_value =
        (w + sw * weighted_price) / (1.0 + sw * total_scaled);

    int dropped = -1;
    for (int i = 0; i < 2; ++i) {
      if (active[i] && marginal_value - price[i] < 0.0 &&
          (dropped < 0 || price[i] > price[dropped])) {
        dropped = i;
      }
    }
    if (dropped < 0) {
      FirmPair q = {0.0, 0.0};
      for (int i = 0; i < 2; ++i) {
        if (active[i]) q[i] = scaled[i] * (marginal_value - price[i]);
      }
      return q;
    }
    active[dropped] = false;
  }
  return {0.0, 0.0};
}

WardropOutcome WardropQuantities(const MarketParams& params,
                                 const CapacityProfile& capacities,
                                 const PriceProfile& prices) {
  WardropOutcome outcome;
  for (DriverClass cls : kDriverClasses) {
    outcome.Of(cls) = ClassWardropQuantities(
        MakeClassMarket(params, capacities, cls), prices.Of(cls));
  }
  return outcome;
}

bool CheckNoProfitableUndercut(const MarketParams& params,
                               const CapacityProfile& capacities,
                               const PriceProfile& prices) {
  const WardropOutcome outcome = WardropQuantities(params, capacities, prices);
  for (DriverClass cls : kDriverClasses) {
    const FirmPair& spots = capacities.Spots(cls);
    if (spots[0] <= 0.0 || spots[1] <= 0.0) continue;
    const PricePair& price = prices.Of(cls);
    const FirmPair& q = outcome.Of(cls);
    for (Firm firm : kFirms) {
      const int i = Index(firm);
      const int j = Index(Opponent(firm));
      const double bound =
          params.Intercept(cls) / 2.0 + params.epsilon * q[i] / spots[i];
      if (*price[j] > bound + kMassTolerance) return false;
    }
  }
  return true;
}

}  // namespace evpark
