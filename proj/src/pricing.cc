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

#include "evpark/pricing.h"

#include <algorithm>
#include <cmath>

namespace evpark {
namespace {

// Equilibrium of the two linear best-response maps of one class.
PricePair ClassTwoPriceEquilibrium(double intercept, double slope,
                                   double epsilon, const FirmPair& spots) {
  if (spots[0] <= 0.0 && spots[1] <= 0.0) return {std::nullopt, std::nullopt};
  const double w = intercept;
  const FirmPair n = {spots[0] / epsilon, spots[1] / epsilon};
  const double denominator = 3.0 * slope * slope * w * w * n[0] * n[1] +
                             4.0 * slope * w * (n[0] + n[1]) + 4.0;
  PricePair prices;
  for (int i = 0; i < 2; ++i) {
    if (spots[i] <= 0.0) continue;
    const int j = 1 - i;
    prices[i] = (2.0 * slope * w * w * n[i] + slope * w * w * n[j] + 2.0 * w) /
                denominator;
  }
  return prices;
}

// Interior Wardrop quantity of firm i for one class, written as
// weight * (constant - own_factor * p_i). The weight is 0 when N_i = 0.
struct SinglePriceTerms {
  double weight;      // N_i/eps / (1 + slope W (N_i + N_j)/eps)
  double own_factor;  // slope W N_j/eps + 1
  double constant;    // W (1 + slope N_j/eps p_j)
};

SinglePriceTerms ClassSinglePriceTerms(const ClassMarket& market, int i,
                                       double opp_price) {
  const int j = 1 - i;
  const double n_i = market.spots[i] / market.epsilon;
  const double n_j = market.spots[j] / market.epsilon;
  const double sw = market.slope * market.intercept;
  return {n_i / (1.0 + sw * (n_i + n_j)), sw * n_j + 1.0,
          market.intercept * (1.0 + market.slope * n_j * opp_price)};
}

}  // namespace

std::string ToString(PricingRegime regime) {
  switch (regime) {
    case PricingRegime::kTwoPrice:
      return "two-price";
    case PricingRegime::kOptimalSinglePrice:
      return "optimal-single";
    case PricingRegime::kNaiveSinglePrice:
      return "naive-single";
  }
  return "unknown";
}

std::optional<PricingRegime> ParsePricingRegime(std::string_view name) {
  for (PricingRegime regime :
       {PricingRegime::kTwoPrice, PricingRegime::kOptimalSinglePrice,
        PricingRegime::kNaiveSinglePrice}) {
    if (name == ToString(regime)) return regime;
  }
  return std::nullopt;
}

Price BestResponsePrice(const MarketParams& params, DriverClass cls,
                        double own_spots, double opp_spots, double opp_price) {
  if (own_spots <= 0.0) return std::nullopt;
  const double w = params.Intercept(cls);
  const double slope = params.Slope(cls);
  const double n_opp = opp_spots / params.epsilon;
  return w * (1.0 + slope * n_opp * opp_price) /
         (2.0 * (slope * w * n_opp + 1.0));
}

PriceProfile TwoPriceEquilibrium(const MarketParams& params,
                                 const CapacityProfile& capacities) {
  PriceProfile prices;
  for (DriverClass cls : kDriverClasses) {
    prices.Of(cls) =
        ClassTwoPriceEquilibrium(params.Intercept(cls), params.Slope(cls),
                                 params.epsilon, capacities.Spots(cls));
  }
  return prices;
}

Price SinglePriceBestResponse(const MarketParams& params,
                              const CapacityProfile& capacities, Firm firm,
                              double opp_price) {
  const int i = Index(firm);
  double numerator = 0.0;
  double denominator = 0.0;
  for (DriverClass cls : kDriverClasses) {
    const SinglePriceTerms terms = ClassSinglePriceTerms(
        MakeClassMarket(params, capacities, cls), i, opp_price);
    numerator += terms.weight * terms.constant;
    denominator += terms.weight * terms.own_factor;
  }
  if (denominator <= 0.0) return std::nullopt;
  return numerator / (2.0 * denominator);
}

SinglePriceSolution SolveOptimalSinglePrice(const MarketParams& params,
                                            const CapacityProfile& capacities,
                                            const FixedPointOptions& options) {
  const std::array<bool, 2> present = {capacities.Endowment(Firm::kOne) > 0.0,
                                       capacities.Endowment(Firm::kTwo) > 0.0};
  FirmPair price = options.initial.value_or(
      FirmPair{params.w_d / 2.0, params.w_d / 2.0});

  auto residual_at = [&](const FirmPair& x, FirmPair* response) {
    double residual = 0.0;
    for (Firm firm : kFirms) {
      const int i = Index(firm);
      if (!present[i]) continue;
      (*response)[i] =
          *SinglePriceBestResponse(params, capacities, firm, x[1 - i]);
      residual = std::max(residual, std::abs((*response)[i] - x[i]));
    }
    return residual;
  };

  FirmPair response = price;
  double residual = residual_at(price, &response);
  int iteration = 0;
  while (!(residual < options.tolerance)) {
    if (iteration >= options.max_iterations || !std::isfinite(residual)) {
      throw PriceConvergenceError(
          "optimal single price iteration did not converge", price, residual);
    }
    for (int i = 0; i < 2; ++i) {
      price[i] += options.damping * (response[i] - price[i]);
    }
    residual = residual_at(price, &response);
    ++iteration;
  }

  SinglePriceSolution solution;
  solution.iterations = iteration;
  solution.residual = residual;
  for (int i = 0; i < 2; ++i) {
    if (!present[i]) continue;
    solution.prices.ev[i] = price[i];
    solution.prices.ice[i] = price[i];
  }
  return solution;
}

PriceProfile OptimalSinglePriceEquilibrium(const MarketParams& params,
                                           const CapacityProfile& capacities,
                                           const FixedPointOptions& options) {
  return SolveOptimalSinglePrice(params, capacities, options).prices;
}

PriceProfile NaiveSinglePrice(const MarketParams& params, double delta) {
  const PricePair ice = ClassTwoPriceEquilibrium(
      params.w_d, params.beta, params.epsilon, {delta, 1.0 - delta});
  return {ice, ice};
}

PriceProfile SolvePrices(const MarketParams& params,
                         const CapacityProfile& capacities,
                         PricingRegime regime,
                         const FixedPointOptions& options) {
  switch (regime) {
    case PricingRegime::kTwoPrice:
      return TwoPriceEquilibrium(params, capacities);
    case PricingRegime::kOptimalSinglePrice:
      return OptimalSinglePriceEquilibrium(params, capacities, options);
    case PricingRegime::kNaiveSinglePrice:
      return NaiveSinglePrice(params, capacities.delta);
  }
  throw InvalidArgument("unknown pricing regime");
}

}  // namespace evpark
