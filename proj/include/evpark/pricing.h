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

// Second-stage price competition for fixed spot allocations.

#ifndef EVPARK_PRICING_H_
#define EVPARK_PRICING_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "evpark/market.h"

namespace evpark {

enum class PricingRegime {
  kTwoPrice,            // separate EV and ICE prices
  kOptimalSinglePrice,  // one price per firm, chosen knowing EV demand
  kNaiveSinglePrice,    // one price per firm, frozen at the pre-EV level
};

std::string ToString(PricingRegime regime);
std::optional<PricingRegime> ParsePricingRegime(std::string_view name);

struct FixedPointOptions {
  double damping = 0.5;
  double tolerance = 1e-10;
  int max_iterations = 10000;
  // Defaults to (W_d/2, W_d/2).
  std::optional<FirmPair> initial;
};

class PriceConvergenceError : public std::runtime_error {
 public:
  PriceConvergenceError(const std::string& what, FirmPair last_iterate,
                        double residual)
      : std::runtime_error(what),
        last_iterate_(last_iterate),
        residual_(residual) {}

  const FirmPair& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  FirmPair last_iterate_;
  double residual_;
};

// Revenue-maximizing price for one class given the rival's spots and price:
// W (1 + slope N_opp/eps p_opp) / (2 (slope W N_opp/eps + 1)).
// Returns std::nullopt when the firm has no spots for the class.
Price BestResponsePrice(const MarketParams& params, DriverClass cls,
                        double own_spots, double opp_spots, double opp_price);

// Closed-form two-price equilibrium. A firm without spots for a class gets no
// price for it; a class nobody serves has no prices at all.
PriceProfile TwoPriceEquilibrium(const MarketParams& params,
                                 const CapacityProfile& capacities);

// Best single price of `firm` against the rival's single price.
Price SinglePriceBestResponse(const MarketParams& params,
                              const CapacityProfile& capacities, Firm firm,
                              double opp_price);

struct SinglePriceSolution {
  PriceProfile prices;
  int iterations = 0;
  double residual = 0.0;
};

// Damped fixed-point iteration on SinglePriceBestResponse. Throws
// PriceConvergenceError when the residual does not fall below the tolerance.
SinglePriceSolution SolveOptimalSinglePrice(
    const MarketParams& params, const CapacityProfile& capacities,
    const FixedPointOptions& options = {});

PriceProfile OptimalSinglePriceEquilibrium(
    const MarketParams& params, const CapacityProfile& capacities,
    const FixedPointOptions& options = {});

// ICE-only equilibrium prices for endowments (delta, 1 - delta), charged to
// both classes. Independent of how spots were later converted.
PriceProfile NaiveSinglePrice(const MarketParams& params, double delta);

PriceProfile SolvePrices(const MarketParams& params,
                         const CapacityProfile& capacities,
                         PricingRegime regime,
                         const FixedPointOptions& options = {});

}  // namespace evpark

#endif  // EVPARK_PRICING_H_
