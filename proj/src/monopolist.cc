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
#include <numeric>

#include "golden_section.h"

namespace evpark::monopolist {
namespace {

constexpr double kProbabilityTolerance = 1e-12;

void CheckTarget(int target, int max_target) {
  if (target < 1 || target > max_target) {
    throw InvalidArgument("target index " + std::to_string(target) +
                          " outside 1.." + std::to_string(max_target));
  }
}

// sum_{i<=t} pi_i q_i and sum_{j>t} pi_j for a 1-based target t.
struct Split {
  double served_mass;
  double tail_probability;
};

Split SplitAt(const DemandDistribution& dist, int target) {
  Split split{0.0, 0.0};
  for (int i = 0; i < dist.size(); ++i) {
    if (i < target) {
      split.served_mass += dist.probabilities[i] * dist.sizes[i];
    } else {
      split.tail_probability += dist.probabilities[i];
    }
  }
  return split;
}

double IceOnlyProfit(const MonopolistParams& params) {
  return IcePriceAndRevenue(params, 0.0).revenue;
}

}  // namespace

void DemandDistribution::Validate() const {
  if (sizes.empty()) throw InvalidArgument("demand distribution is empty");
  if (sizes.size() != probabilities.size()) {
    throw InvalidArgument("q and pi have different lengths");
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!std::isfinite(sizes[i]) || sizes[i] <= 0.0) {
      throw InvalidArgument("market sizes must be finite and > 0");
    }
    if (i > 0 && !(sizes[i] > sizes[i - 1])) {
      throw InvalidArgument("market sizes must be strictly increasing");
    }
    if (!std::isfinite(probabilities[i]) || probabilities[i] <= 0.0) {
      throw InvalidArgument("probabilities must be finite and > 0");
    }
  }
  const double total =
      std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw InvalidArgument("probabilities sum to " + std::to_string(total) +
                          ", not 1");
  }
}

void MonopolistParams::Validate() const {
  for (double v : {w_e, w_d, epsilon}) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw InvalidArgument("W_e, W_d and epsilon must be finite and > 0");
    }
  }
  if (!(w_e > w_d)) throw InvalidArgument("W_e must exceed W_d");
  if (!std::isfinite(conversion_cost) || conversion_cost < 0.0) {
    throw InvalidArgument("conversion cost p must be finite and >= 0");
  }
}

std::string ToString(const PricingCase& pricing_case) {
  switch (pricing_case.kind) {
    case PricingCase::Kind::kCase1:
      return "case1";
    case PricingCase::Kind::kCase2:
      return "case2";
    case PricingCase::Kind::kCase3:
      return "case3";
  }
  return "unknown";
}

std::vector<PricingCase> AllCases(int n) {
  std::vector<PricingCase> cases = {PricingCase::Case3()};
  for (int t = 1; t <= n; ++t) {
    cases.push_back(PricingCase::Case1(t));
    if (t < n) cases.push_back(PricingCase::Case2(t));
  }
  return cases;
}

IcePricing IcePriceAndRevenue(const MonopolistParams& params,
                              double ev_spots) {
  return {params.w_d / 2.0,
          (1.0 - ev_spots) * params.w_d * params.w_d / (4.0 * params.epsilon)};
}

double EvDemand(const MonopolistParams& params, double ev_spots, double price,
                double q_max) {
  return std::min(ev_spots * (params.w_e - price) / params.epsilon, q_max);
}

std::optional<double> Case1Price(const MonopolistParams& params,
                                 const DemandDistribution& dist,
                                 double ev_spots, int target) {
  CheckTarget(target, dist.size());
  if (ev_spots <= 0.0) return std::nullopt;
  const double price =
      params.w_e - params.epsilon * dist.sizes[target - 1] / ev_spots;
  if (price < 0.0) return std::nullopt;
  return price;
}

std::optional<double> Case2Price(const MonopolistParams& params,
                                 const DemandDistribution& dist,
                                 double ev_spots, int target) {
  CheckTarget(target, dist.size() - 1);
  if (ev_spots <= 0.0) return std::nullopt;
  const Split split = SplitAt(dist, target);
  const double price =
      params.w_e / 2.0 + params.epsilon * split.served_mass /
                             (2.0 * split.tail_probability * ev_spots);
  const double served = ev_spots * (params.w_e - price) / params.epsilon;
  if (!(served > dist.sizes[target - 1] && served < dist.sizes[target])) {
    return std::nullopt;
  }
  return price;
}

std::optional<double> Case3Price(const MonopolistParams& params,
                                 const DemandDistribution& dist,
                                 double ev_spots) {
  if (ev_spots <= 0.0) return std::nullopt;
  if (!(ev_spots * params.w_e / (2.0 * params.epsilon) < dist.sizes.front())) {
    return std::nullopt;
  }
  return params.w_e / 2.0;
}

std::optional<double> CasePrice(const MonopolistParams& params,
                                const DemandDistribution& dist,
                                double ev_spots,
                                const PricingCase& pricing_case) {
  switch (pricing_case.kind) {
    case PricingCase::Kind::kCase1:
      return Case1Price(params, dist, ev_spots, pricing_case.target);
    case PricingCase::Kind::kCase2:
      return Case2Price(params, dist, ev_spots, pricing_case.target);
    case PricingCase::Kind::kCase3:
      return Case3Price(params, dist, ev_spots);
  }
  return std::nullopt;
}

double ExpectedProfit(const MonopolistParams& params,
                      const DemandDistribution& dist, double ev_spots,
                      const PricingCase& pricing_case) {
  if (ev_spots == 0.0) return IceOnlyProfit(params);
  const std::optional<double> price =
      CasePrice(params, dist, ev_spots, pricing_case);
  if (!price) {
    throw InfeasibleCase(ToString(pricing_case) + " is infeasible at N_e = " +
                         std::to_string(ev_spots));
  }
  double expected_served = 0.0;
  for (int i = 0; i < dist.size(); ++i) {
    expected_served += dist.probabilities[i] *
                       EvDemand(params, ev_spots, *price, dist.sizes[i]);
  }
  return *price * expected_served +
         IcePriceAndRevenue(params, ev_spots).revenue -
         params.conversion_cost * ev_spots;
}

double OptimalCapacityCase1(const MonopolistParams& params,
                            const DemandDistribution& dist, int target) {
  CheckTarget(target, dist.size());
  const double q_t = dist.sizes[target - 1];
  const Split split = SplitAt(dist, target);
  const double expected_served =
      split.served_mass + split.tail_probability * q_t;
  const double marginal_cost =
      params.w_d * params.w_d / (4.0 * params.epsilon) +
      params.conversion_cost;
  return std::min(
      1.0, std::sqrt(params.epsilon * q_t * expected_served / marginal_cost));
}

TheoremAssumptions VerifyTheoremAssumptions(const MonopolistParams& params,
                                            const DemandDistribution& dist) {
  return {params.w_e / 2.0 > params.epsilon * dist.sizes.front(),
          4.0 / params.epsilon * (params.w_e * params.w_e -
                                  params.w_d * params.w_d) >
              params.conversion_cost};
}

CaseProfit BestCaseAt(const MonopolistParams& params,
                      const DemandDistribution& dist, double ev_spots) {
  if (ev_spots <= 0.0) {
    return {PricingCase::Case3(), params.w_e / 2.0, IceOnlyProfit(params)};
  }
  std::optional<CaseProfit> best;
  for (const PricingCase& pricing_case : AllCases(dist.size())) {
    const std::optional<double> price =
        CasePrice(params, dist, ev_spots, pricing_case);
    if (!price) continue;
    const double profit = ExpectedProfit(params, dist, ev_spots, pricing_case);
    if (!best || profit > best->profit) {
      best = CaseProfit{pricing_case, *price, profit};
    }
  }
  // Case 1 at t = n always has a price when N_e >= eps q_n / W_e, and below
  // that Case 3 or some lower target is feasible, so best is always set.
  if (!best) throw InfeasibleCase("no feasible EV pricing case");
  return *best;
}

GridOptimum GridSearch(const MonopolistParams& params,
                       const DemandDistribution& dist, double step) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw InvalidArgument("grid step must lie in (0, 1]");
  }
  const long points = std::lround(std::ceil(1.0 / step - 1e-9));
  GridOptimum best{0.0, BestCaseAt(params, dist, 0.0)};
  for (long k = 1; k <= points; ++k) {
    const double ev_spots = k == points ? 1.0 : k * step;
    const CaseProfit candidate = BestCaseAt(params, dist, ev_spots);
    if (candidate.profit > best.best.profit) best = {ev_spots, candidate};
  }
  return best;
}

MonopolistSolution SolveMonopolist(const MonopolistParams& params,
                                   const DemandDistribution& dist,
                                   const SolveOptions& options) {
  params.Validate();
  dist.Validate();

  MonopolistSolution solution;
  solution.assumptions = VerifyTheoremAssumptions(params, dist);
  solution.ice_price = IcePriceAndRevenue(params, 0.0).price;

  for (int t = 1; t <= dist.size(); ++t) {
    const double ev_spots = OptimalCapacityCase1(params, dist, t);
    solution.case1_capacities.push_back(ev_spots);
    const std::optional<double> price = Case1Price(params, dist, ev_spots, t);
    solution.case1_candidates.push_back(
        {PricingCase::Case1(t), price.value_or(NAN),
         price ? ExpectedProfit(params, dist, ev_spots, PricingCase::Case1(t))
               : NAN});
  }

  solution.oracle = GridSearch(params, dist, options.grid_step);

  std::optional<int> chosen;
  if (solution.assumptions.all()) {
    for (int t = 0; t < dist.size(); ++t) {
      const CaseProfit& candidate = solution.case1_candidates[t];
      if (std::isnan(candidate.profit)) continue;
      if (!chosen ||
          candidate.profit > solution.case1_candidates[*chosen].profit ||
          (candidate.profit == solution.case1_candidates[*chosen].profit &&
           solution.case1_capacities[t] <
               solution.case1_capacities[*chosen])) {
        chosen = t;
      }
    }
  }

  // The closed form ignores the N_e <= 1 cap: when the cap binds, a Case 2
  // price at N_e = 1 can beat every Case 1 candidate, so defer to the grid.
  if (chosen && solution.case1_candidates[*chosen].profit <
                    solution.oracle.best.profit - options.oracle_tolerance) {
    chosen.reset();
  }

  if (chosen) {
    const CaseProfit& candidate = solution.case1_candidates[*chosen];
    solution.ev_spots = solution.case1_capacities[*chosen];
    solution.pricing_case = candidate.pricing_case;
    solution.ev_price = candidate.price;
    solution.expected_profit = candidate.profit;
  } else {
    solution.used_grid_search = true;
    const double center = solution.oracle.ev_spots;
    auto profit = [&](double x) { return BestCaseAt(params, dist, x).profit; };
    const double refined = internal::GoldenSectionMax(
        profit, std::max(0.0, center - options.grid_step),
        std::min(1.0, center + options.grid_step), options.refine_tolerance);
    const CaseProfit at_refined = BestCaseAt(params, dist, refined);
    const bool use_refined = at_refined.profit > solution.oracle.best.profit;
    solution.ev_spots = use_refined ? refined : solution.oracle.ev_spots;
    const CaseProfit& best =
        use_refined ? at_refined : solution.oracle.best;
    solution.pricing_case = best.pricing_case;
    solution.ev_price = best.price;
    solution.expected_profit = best.profit;
  }

  solution.oracle_gap =
      solution.expected_profit - solution.oracle.best.profit;
  solution.oracle_agrees =
      std::abs(solution.oracle_gap) <= options.oracle_tolerance;
  return solution;
}

}  // namespace evpark::monopolist
