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

#ifndef EVPARK_WELFARE_H_
#define EVPARK_WELFARE_H_

#include <optional>
#include <stdexcept>

#include "evpark/market.h"

namespace evpark {

class InconsistentOutcome : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct ConsumerSurplusPair {
  double ev = 0.0;
  double ice = 0.0;
};

// Surplus with drivers parking one after another, so early arrivals see less
// congestion: W (Q - slope Q^2 / 2) - sum_i (eps q_i^2 / (2 N_i) + p_i q_i).
// Throws InconsistentOutcome when a firm serves drivers it has no spots for.
ConsumerSurplusPair ConsumerSurplus(const MarketParams& params,
                                    const CapacityProfile& capacities,
                                    const PriceProfile& prices,
                                    const WardropOutcome& outcome);

// s (N_e1 + N_e2).
double GovernmentCost(const CapacityProfile& capacities, double subsidy);

// Sum of squared market shares; std::nullopt for an empty market.
std::optional<double> Herfindahl(double q1, double q2);

// Quantity-weighted mean price. Throws InvalidArgument if q1 + q2 == 0.
double AveragePrice(double q1, double q2, double p1, double p2);

// Sum of eps q / N over the occupied firm/class cells.
double TotalCongestion(const MarketParams& params,
                       const WardropOutcome& outcome,
                       const CapacityProfile& capacities);

struct WelfareReport {
  double cs_ev = 0.0;
  double cs_ice = 0.0;
  double profit_1 = 0.0;
  double profit_2 = 0.0;
  double govt_cost = 0.0;
  double total_welfare = 0.0;
  std::optional<double> hhi_ev;
  std::optional<double> hhi_ice;
  std::optional<double> avg_price_ev;
  std::optional<double> avg_price_ice;
  double total_congestion = 0.0;
};

// Assembles every welfare component. Firms pay effective_cost per EV spot;
// the government pays subsidy per EV spot.
WelfareReport TotalWelfare(const MarketParams& params,
                           const CapacityProfile& capacities,
                           const PriceProfile& prices,
                           const WardropOutcome& outcome,
                           double effective_cost, double subsidy);

}  // namespace evpark

#endif  // EVPARK_WELFARE_H_
