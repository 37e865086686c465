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

// First stage of the competitive game: how many spots each firm converts to
// EV chargers, anticipating the second-stage price equilibrium.

#ifndef EVPARK_CAPACITY_H_
#define EVPARK_CAPACITY_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evpark/market.h"
#include "evpark/pricing.h"

namespace evpark {

// Government levers. The firms pay effective cost t - s per converted spot.
struct PolicyConfig {
  double mandate = 0.0;         // r: minimum EV share of each firm's spots
  double intrinsic_cost = 0.0;  // t
  double subsidy = 0.0;         // s

  double EffectiveCost() const { return intrinsic_cost - subsidy; }

  // Requires 0 <= r <= 1 and 0 <= s <= t.
  void Validate() const;
};

enum class CapacityRegime { kNaiveMandate, kOptimalCapacity };

std::string ToString(CapacityRegime regime);
std::optional<CapacityRegime> ParseCapacityRegime(std::string_view name);

// Each firm converts exactly the mandated share of its endowment.
CapacityProfile NaiveMandateCapacities(double mandate, double delta);

// Prices and Wardrop quantities induced by a capacity profile.
struct SecondStage {
  PriceProfile prices;
  WardropOutcome quantities;
};

SecondStage SolveSecondStage(const MarketParams& params,
                             const CapacityProfile& capacities,
                             PricingRegime regime,
                             const FixedPointOptions& options = {});

// m_i q_di + c_i q_ei - p N_ei at the regime's price equilibrium.
double FirmProfit(const MarketParams& params,
                  const CapacityProfile& capacities, PricingRegime regime,
                  double effective_cost, Firm firm);

// Same, evaluated on an already solved second stage.
double FirmProfit(const SecondStage& stage, const CapacityProfile& capacities,
                  double effective_cost, Firm firm);

struct CapacitySearchOptions {
  int prescan_points = 1001;
  double capacity_tolerance = 1e-8;
  double profile_tolerance = 1e-7;
  int max_rounds = 500;
  // Optimal capacity under optimal single pricing has no existence result;
  // it runs only when this is set and then carries a warning.
  bool allow_unsupported_theory = false;
  // Starting EV spots; defaults to the mandated minimum for each firm.
  std::optional<FirmPair> initial_ev;
};

struct CapacityEquilibrium {
  CapacityProfile capacities;
  int rounds = 0;
  double last_step = 0.0;
  std::vector<std::string> warnings;
};

class CapacityConvergenceError : public std::runtime_error {
 public:
  CapacityConvergenceError(const std::string& what,
                           std::vector<FirmPair> history)
      : std::runtime_error(what), history_(std::move(history)) {}

  // EV spots (N_e1, N_e2) after every round.
  const std::vector<FirmPair>& history() const { return history_; }

 private:
  std::vector<FirmPair> history_;
};

// Profit-maximizing EV spots of `firm` in [r N_i, N_i] with the rival's
// allocation held fixed. A dense pre-scan seeds a golden-section refinement;
// ties go to the smaller allocation.
double BestResponseCapacity(const MarketParams& params,
                            const CapacityProfile& capacities, Firm firm,
                            const PolicyConfig& policy, PricingRegime regime,
                            const CapacitySearchOptions& options = {});

// Alternating best responses until the EV allocation moves less than
// profile_tolerance in max norm. Throws CapacityConvergenceError after
// max_rounds, and InvalidArgument for the unsupported regime without opt-in.
CapacityEquilibrium OptimalCapacityEquilibrium(
    const MarketParams& params, const PolicyConfig& policy, double delta,
    PricingRegime regime, const CapacitySearchOptions& options = {});

}  // namespace evpark

#endif  // EVPARK_CAPACITY_H_
