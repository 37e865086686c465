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

// Batch runs over a Scenario. Every requested point yields a row; points whose
// solver fails keep their row with a non-"converged" status and empty
// numeric columns.

#ifndef EVPARK_SWEEP_H_
#define EVPARK_SWEEP_H_

#include <optional>
#include <string>
#include <vector>

#include "evpark/csv.h"
#include "evpark/market.h"
#include "evpark/monopolist.h"
#include "evpark/scenario.h"
#include "evpark/welfare.h"

namespace evpark {

inline constexpr char kConverged[] = "converged";

// Random restarts whose answers differ by more than this are flagged.
inline constexpr double kMultistartWarning = 1e-6;
inline constexpr int kMultistartRuns = 3;

struct SweepOptions {
  // Also run the unilateral deviation scans on every row.
  bool oracle = false;
  // Lets optimal capacity run under optimal single pricing.
  bool allow_unsupported_theory = false;
};

struct SolvedPoint {
  CapacityProfile capacities;
  PriceProfile prices;
  WardropOutcome quantities;
  WelfareReport welfare;
};

struct CompetitiveRow {
  double sweep_value = 0.0;
  std::string label;  // pricing regime, or policy cell a..d
  double delta = 0.0;
  PolicyConfig policy;
  PricingRegime pricing = PricingRegime::kTwoPrice;
  std::string status = kConverged;
  int iterations = 0;
  std::optional<double> multistart_spread;
  std::optional<SolvedPoint> point;
  std::optional<double> oracle_gain;
  std::string warning;

  bool converged() const { return status == kConverged; }
};

// Rows for every (r, pricing regime), r ascending then regime name. Needs a
// competitive scenario swept over r or not swept at all.
std::vector<CompetitiveRow> RunMandateSweep(const Scenario& scenario,
                                            const SweepOptions& options = {});

// The four policy cells per delta: (a) nothing, (b) subsidy s, (c) mandate r,
// (d) both, with optimal capacity and two prices. Needs a competitive
// scenario swept over delta or not swept at all.
std::vector<CompetitiveRow> RunDeltaSweep(const Scenario& scenario,
                                          const SweepOptions& options = {});

std::vector<std::string> CompetitiveColumns();
Table ToTable(const std::vector<CompetitiveRow>& rows);

struct MonopolistRow {
  std::string row_type;  // "case1", "solution" or "profile"
  std::optional<monopolist::PricingCase> pricing_case;
  double ev_spots = 0.0;
  std::optional<double> ev_price;
  double ice_price = 0.0;
  std::optional<double> expected_profit;
  std::optional<monopolist::TheoremAssumptions> assumptions;
  std::optional<monopolist::GridOptimum> oracle;
  std::optional<double> oracle_gap;
  std::string status = kConverged;

  // An unservable case 1 target is a finding, not a solver failure.
  bool converged() const {
    return status == kConverged || status == "infeasible";
  }
};

inline constexpr double kProfileStep = 1e-3;

// Case-1 candidates, then the solution row, then (with `profile`) one row per
// feasible case at every N_e on a 1e-3 grid.
std::vector<MonopolistRow> RunMonopolistSuite(const Scenario& scenario,
                                              bool profile = false);

std::vector<std::string> MonopolistColumns();
Table ToTable(const std::vector<MonopolistRow>& rows);

}  // namespace evpark

#endif  // EVPARK_SWEEP_H_
