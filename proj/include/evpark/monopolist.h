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

// A single garage owner choosing how many spots to equip with chargers before
// the size of the EV market is known.
//
// Every EV driver values a spot at W_e and every ICE driver at W_d; there are
// unboundedly many ICE drivers but only q_max EV drivers, where q_max takes
// the value q_i with probability pi_i. For a fixed EV capacity the EV price
// falls into one of three quantity patterns:
//
//   Case 1 (target t)  serve min(q_i, q_t) in every state;
//   Case 2 (target t)  serve q_i when q_i <= q_t, else something strictly
//                      between q_t and q_{t+1};
//   Case 3             serve strictly less than q_1 in every state.
//
// Targets are 1-based throughout, matching the usual q_1 < ... < q_n order.

#ifndef EVPARK_MONOPOLIST_H_
#define EVPARK_MONOPOLIST_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evpark/market.h"

namespace evpark::monopolist {

struct DemandDistribution {
  std::vector<double> sizes;          // q_1 < q_2 < ... < q_n, all > 0
  std::vector<double> probabilities;  // pi_i > 0, summing to 1

  int size() const { return static_cast<int>(sizes.size()); }
  void Validate() const;
};

struct MonopolistParams {
  double w_e = 0.0;
  double w_d = 0.0;
  double epsilon = 0.0;
  double conversion_cost = 0.0;  // p, paid per EV spot

  void Validate() const;
};

struct PricingCase {
  enum class Kind { kCase1, kCase2, kCase3 };
  Kind kind = Kind::kCase3;
  int target = 0;  // 1-based; unused for Case 3

  static PricingCase Case1(int t) { return {Kind::kCase1, t}; }
  static PricingCase Case2(int t) { return {Kind::kCase2, t}; }
  static PricingCase Case3() { return {Kind::kCase3, 0}; }

  friend bool operator==(const PricingCase&, const PricingCase&) = default;
};

std::string ToString(const PricingCase& pricing_case);

// Every case available for n realizations, in order of the largest quantity
// ever served: Case 3, Case 1 (1), Case 2 (1), Case 1 (2), ..., Case 1 (n).
std::vector<PricingCase> AllCases(int n);

class InfeasibleCase : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct IcePricing {
  double price;
  double revenue;
};

// m* = W_d / 2 and revenue (1 - N_e) W_d^2 / (4 eps).
IcePricing IcePriceAndRevenue(const MonopolistParams& params, double ev_spots);

// EV drivers served in a state with q_max drivers: min(N_e (W_e - c)/eps,
// q_max).
double EvDemand(const MonopolistParams& params, double ev_spots, double price,
                double q_max);

// Price that serves exactly q_t: W_e - eps q_t / N_e. std::nullopt when
// negative.
std::optional<double> Case1Price(const MonopolistParams& params,
                                 const DemandDistribution& dist,
                                 double ev_spots, int target);

// Interior optimum W_e/2 + eps sum_{i<=t} pi_i q_i / (2 N_e sum_{j>t} pi_j).
// std::nullopt unless it serves strictly between q_t and q_{t+1}.
std::optional<double> Case2Price(const MonopolistParams& params,
                                 const DemandDistribution& dist,
                                 double ev_spots, int target);

// W_e / 2 when that serves strictly less than q_1, else std::nullopt.
std::optional<double> Case3Price(const MonopolistParams& params,
                                 const DemandDistribution& dist,
                                 double ev_spots);

std::optional<double> CasePrice(const MonopolistParams& params,
                                const DemandDistribution& dist,
                                double ev_spots,
                                const PricingCase& pricing_case);

// Expected EV revenue plus ICE revenue minus conversion cost. With no EV
// spots this is the ICE-only profit whatever the case. Throws InfeasibleCase
// when the case has no valid price at ev_spots.
double ExpectedProfit(const MonopolistParams& params,
                      const DemandDistribution& dist, double ev_spots,
                      const PricingCase& pricing_case);

// Concave Case-1 optimum, capped at the unit mass of spots.
double OptimalCapacityCase1(const MonopolistParams& params,
                            const DemandDistribution& dist, int target);

struct TheoremAssumptions {
  bool ev_value_exceeds_congestion;  // W_e / 2 > eps q_1
  bool conversion_pays;              // (4 / eps)(W_e^2 - W_d^2) > p

  bool all() const { return ev_value_exceeds_congestion && conversion_pays; }
};

TheoremAssumptions VerifyTheoremAssumptions(const MonopolistParams& params,
                                            const DemandDistribution& dist);

struct CaseProfit {
  PricingCase pricing_case;
  double price;
  double profit;
};

// Best feasible case at a given capacity. At N_e = 0 no EV price exists and
// the result carries Case 3 with the ICE-only profit and price W_e / 2.
CaseProfit BestCaseAt(const MonopolistParams& params,
                      const DemandDistribution& dist, double ev_spots);

struct GridOptimum {
  double ev_spots;
  CaseProfit best;
};

// Brute-force scan of BestCaseAt over N_e = 0, step, 2 step, ..., 1.
GridOptimum GridSearch(const MonopolistParams& params,
                       const DemandDistribution& dist, double step);

struct SolveOptions {
  double grid_step = 1e-4;
  double refine_tolerance = 1e-8;
  double oracle_tolerance = 1e-6;
};

struct MonopolistSolution {
  double ev_spots = 0.0;
  PricingCase pricing_case;
  double ev_price = 0.0;
  double ice_price = 0.0;
  double expected_profit = 0.0;
  TheoremAssumptions assumptions{};
  bool used_grid_search = false;
  GridOptimum oracle{};
  // Closed-form profit minus grid profit; never below -oracle_tolerance when
  // oracle_agrees.
  double oracle_gap = 0.0;
  bool oracle_agrees = false;
  // Case-1 candidates (N_e, profit) for t = 1..n.
  std::vector<CaseProfit> case1_candidates;
  std::vector<double> case1_capacities;
};

// Enumerates the Case-1 optima when the theorem's assumptions hold and picks
// the most profitable (ties to the smaller capacity); otherwise searches the
// capacity grid and refines locally. The answer is always cross-checked
// against the grid search, and the grid answer wins when the Case-1 pick
// falls short of it (this happens when the spot cap N_e <= 1 binds).
MonopolistSolution SolveMonopolist(const MonopolistParams& params,
                                   const DemandDistribution& dist,
                                   const SolveOptions& options = {});

}  // namespace evpark::monopolist

#endif  // EVPARK_MONOPOLIST_H_
