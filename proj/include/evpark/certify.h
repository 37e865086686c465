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

// Numerical certificates for solved equilibria. None of these reuse the
// solvers' search paths: they only evaluate utilities, best-response maps and
// profits at given points.

#ifndef EVPARK_CERTIFY_H_
#define EVPARK_CERTIFY_H_

#include "evpark/capacity.h"
#include "evpark/market.h"
#include "evpark/pricing.h"

namespace evpark {

// Largest |marginal utility| over cells serving a positive quantity.
double WardropResidual(const MarketParams& params,
                       const CapacityProfile& capacities,
                       const PriceProfile& prices,
                       const WardropOutcome& outcome);

// Largest |p_i - BR_i(p_j)| over firm/class cells with spots, using the
// two-price best-response maps.
double TwoPriceFixedPointResidual(const MarketParams& params,
                                  const CapacityProfile& capacities,
                                  const PriceProfile& prices);

// Same for the single-price best-response map (ICE prices are read as the
// single price).
double SinglePriceFixedPointResidual(const MarketParams& params,
                                     const CapacityProfile& capacities,
                                     const PriceProfile& prices);

// Largest revenue gain any firm finds by moving one of its prices on a grid
// of `points` values spanning [-radius, +radius]. For two prices each class
// price moves alone; for single pricing the shared price moves.
double MaxPriceDeviationGain(const MarketParams& params,
                             const CapacityProfile& capacities,
                             const PriceProfile& prices, PricingRegime regime,
                             double radius = 1e-3, int points = 21);

// Largest profit gain any firm finds by moving its EV spots to one of
// `points` evenly spaced values in [r N_i, N_i] with the rival fixed.
double MaxCapacityDeviationGain(const MarketParams& params,
                                const PolicyConfig& policy,
                                const CapacityProfile& capacities,
                                PricingRegime regime, int points = 101);

}  // namespace evpark

#endif  // EVPARK_CERTIFY_H_
