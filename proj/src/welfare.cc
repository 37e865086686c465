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

#include "evpark/welfare.h"

#include <string>

namespace evpark {
namespace {

double ClassSurplus(const MarketParams& params, DriverClass cls,
                    const CapacityProfile& capacities,
                    const PriceProfile& prices,
                    const WardropOutcome& outcome) {
  const FirmPair& q = outcome.Of(cls);
  const FirmPair& spots = capacities.Spots(cls);
  const double total = q[0] + q[1];
  double surplus = params.Intercept(cls) *
                   (total - params.Slope(cls) * total * total / 2.0);
  for (int i = 0; i < 2; ++i) {
    if (q[i] == 0.0) continue;
    if (spots[i] <= 0.0) {
      throw InconsistentOutcome(ToString(cls) + " drivers at firm " +
                                std::to_string(i + 1) + " without spots");
    }
    const Price& price = prices.Of(cls)[i];
    if (!price) {
      throw InconsistentOutcome(ToString(cls) + " drivers at firm " +
                                std::to_string(i + 1) + " without a price");
    }
    surplus -= params.epsilon * q[i] * q[i] / (2.0 * spots[i]) + *price * q[i];
  }
  return surplus;
}

double Revenue(const PriceProfile& prices, const WardropOutcome& outcome,
               int i) {
  double revenue = 0.0;
  for (DriverClass cls : kDriverClasses) {
    const double q = outcome.Of(cls)[i];
    if (q != 0.0) revenue += *prices.Of(cls)[i] * q;
  }
  return revenue;
}

std::optional<double> ClassAveragePrice(const PricePair& prices,
                                        const FirmPair& q) {
  if (q[0] + q[1] <= 0.0) return std::nullopt;
  return AveragePrice(q[0], q[1], q[0] > 0.0 ? *prices[0] : 0.0,
                      q[1] > 0.0 ? *prices[1] : 0.0);
}

}  // namespace

ConsumerSurplusPair ConsumerSurplus(const MarketParams& params,
                                    const CapacityProfile& capacities,
                                    const PriceProfile& prices,
                                    const WardropOutcome& outcome) {
  return {ClassSurplus(params, DriverClass::kEv, capacities, prices, outcome),
          ClassSurplus(params, DriverClass::kIce, capacities, prices,
                       outcome)};
}

double GovernmentCost(const CapacityProfile& capacities, double subsidy) {
  return subsidy * (capacities.ev[0] + capacities.ev[1]);
}

std::optional<double> Herfindahl(double q1, double q2) {
  const double total = q1 + q2;
  if (total <= 0.0) return std::nullopt;
  const double s1 = q1 / total;
  const double s2 = q2 / total;
  return s1 * s1 + s2 * s2;
}

double AveragePrice(double q1, double q2, double p1, double p2) {
  const double total = q1 + q2;
  if (total <= 0.0) {
    throw InvalidArgument("average price of an empty market");
  }
  return (q1 * p1 + q2 * p2) / total;
}

double TotalCongestion(const MarketParams& params,
                       const WardropOutcome& outcome,
                       const CapacityProfile& capacities) {
  double congestion = 0.0;
  for (DriverClass cls : kDriverClasses) {
    for (int i = 0; i < 2; ++i) {
      const double q = outcome.Of(cls)[i];
      if (q == 0.0) continue;
      const double spots = capacities.Spots(cls)[i];
      if (spots <= 0.0) {
        throw InconsistentOutcome("congestion at a cell without spots");
      }
      congestion += params.epsilon * q / spots;
    }
  }
  return congestion;
}

WelfareReport TotalWelfare(const MarketParams& params,
                           const CapacityProfile& capacities,
                           const PriceProfile& prices,
                           const WardropOutcome& outcome,
                           double effective_cost, double subsidy) {
  WelfareReport report;
  const ConsumerSurplusPair cs =
      ConsumerSurplus(params, capacities, prices, outcome);
  report.cs_ev = cs.ev;
  report.cs_ice = cs.ice;
  report.profit_1 =
      Revenue(prices, outcome, 0) - effective_cost * capacities.ev[0];
  report.profit_2 =
      Revenue(prices, outcome, 1) - effective_cost * capacities.ev[1];
  report.govt_cost = GovernmentCost(capacities, subsidy);
  report.total_welfare = report.cs_ev + report.cs_ice + report.profit_1 +
                         report.profit_2 - report.govt_cost;
  report.hhi_ev = Herfindahl(outcome.ev[0], outcome.ev[1]);
  report.hhi_ice = Herfindahl(outcome.ice[0], outcome.ice[1]);
  report.avg_price_ev = ClassAveragePrice(prices.ev, outcome.ev);
  report.avg_price_ice = ClassAveragePrice(prices.ice, outcome.ice);
  report.total_congestion = TotalCongestion(params, outcome, capacities);
  return report;
}

}  // namespace evpark
