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

#include "evpark/sweep.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>

#include "evpark/capacity.h"
#include "evpark/certify.h"
#include "evpark/pricing.h"

namespace evpark {
namespace {

constexpr double kOracleGainWarning = 1e-6;

std::string FormatNumber(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3g", value);
  return buffer;
}

void AppendWarning(std::string& warnings, const std::string& warning) {
  if (!warnings.empty()) warnings += "; ";
  warnings += warning;
}

double MaxAbsDifference(const FirmPair& a, const FirmPair& b) {
  return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
}

// One row's solver run. Seeds are derived from the scenario seed and the
// row's position so rows never share a random stream.
class PointSolver {
 public:
  PointSolver(const Scenario& scenario, const SweepOptions& options)
      : scenario_(scenario), options_(options) {}

  void Solve(CompetitiveRow& row, CapacityRegime capacity, int row_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(scenario_.seed),
                      static_cast<std::uint32_t>(scenario_.seed >> 32),
                      static_cast<std::uint32_t>(row_index)};
    std::mt19937_64 rng(seq);
    try {
      row.policy.Validate();
      CapacityProfile capacities;
      if (capacity == CapacityRegime::kNaiveMandate) {
        capacities = NaiveMandateCapacities(row.policy.mandate, row.delta);
      } else {
        capacities = SolveCapacities(row, rng);
      }
      const PriceProfile prices = SolvePricesWithRestarts(row, capacities,
                                                          capacity, rng);
      SolvedPoint point;
      point.capacities = capacities;
      point.prices = prices;
      point.quantities =
          WardropQuantities(scenario_.market, capacities, prices);
      point.welfare =
          TotalWelfare(scenario_.market, capacities, prices, point.quantities,
                       row.policy.EffectiveCost(), row.policy.subsidy);
      row.point = point;
      if (options_.oracle) RunOracle(row, capacity);
    } catch (const PriceConvergenceError& e) {
      row.status = "price-not-converged";
      AppendWarning(row.warning, e.what());
    } catch (const CapacityConvergenceError& e) {
      row.status = "capacity-not-converged";
      AppendWarning(row.warning, e.what());
    } catch (const std::exception& e) {
      row.status = "error";
      AppendWarning(row.warning, e.what());
    }
  }

 private:
  CapacityProfile SolveCapacities(CompetitiveRow& row, std::mt19937_64& rng) {
    CapacitySearchOptions search;
    search.allow_unsupported_theory = options_.allow_unsupported_theory;
    const CapacityEquilibrium primary = OptimalCapacityEquilibrium(
        scenario_.market, row.policy, row.delta, row.pricing, search);
    for (const std::string& warning : primary.warnings) {
      AppendWarning(row.warning, warning);
    }
    row.iterations = primary.rounds;

    double spread = 0.0;
    for (int k = 0; k < kMultistartRuns; ++k) {
      FirmPair start;
      for (Firm firm : kFirms) {
        const double endowment = primary.capacities.Endowment(firm);
        std::uniform_real_distribution<double> uniform(
            row.policy.mandate * endowment, endowment);
        start[Index(firm)] = uniform(rng);
      }
      search.initial_ev = start;
      const CapacityEquilibrium restart = OptimalCapacityEquilibrium(
          scenario_.market, row.policy, row.delta, row.pricing, search);
      spread = std::max(spread, MaxAbsDifference(restart.capacities.ev,
                                                 primary.capacities.ev));
    }
    RecordSpread(row, spread, "capacity");
    return primary.capacities;
  }

  PriceProfile SolvePricesWithRestarts(CompetitiveRow& row,
                                       const CapacityProfile& capacities,
                                       CapacityRegime capacity,
                                       std::mt19937_64& rng) {
    if (row.pricing != PricingRegime::kOptimalSinglePrice) {
      return SolvePrices(scenario_.market, capacities, row.pricing);
    }
    const SinglePriceSolution primary =
        SolveOptimalSinglePrice(scenario_.market, capacities);
    // Capacity rows already report capacity rounds.
    if (capacity == CapacityRegime::kNaiveMandate) {
      row.iterations = primary.iterations;
    }
    std::uniform_real_distribution<double> uniform(0.0, scenario_.market.w_e);
    double spread = 0.0;
    for (int k = 0; k < kMultistartRuns; ++k) {
      FixedPointOptions restart;
      restart.initial = FirmPair{uniform(rng), uniform(rng)};
      const SinglePriceSolution other =
          SolveOptimalSinglePrice(scenario_.market, capacities, restart);
      for (int i = 0; i < 2; ++i) {
        if (primary.prices.ice[i] && other.prices.ice[i]) {
          spread = std::max(
              spread, std::abs(*primary.prices.ice[i] - *other.prices.ice[i]));
        }
      }
    }
    if (row.multistart_spread) {
      spread = std::max(spread, *row.multistart_spread);
    }
    RecordSpread(row, spread, "price");
    return primary.prices;
  }

  void RecordSpread(CompetitiveRow& row, double spread,
                    const std::string& what) {
    row.multistart_spread = spread;
    if (spread > kMultistartWarning) {
      AppendWarning(row.warning, "restarts disagree on " + what + " by " +
                                     FormatNumber(spread) +
                                     " (possible multiple equilibria)");
    }
  }

  void RunOracle(CompetitiveRow& row, CapacityRegime capacity) {
    const SolvedPoint& point = *row.point;
    double gain = MaxPriceDeviationGain(scenario_.market, point.capacities,
                                        point.prices, row.pricing);
    // Frozen naive prices are not a best response by design.
    if (row.pricing == PricingRegime::kNaiveSinglePrice) gain = -INFINITY;
    if (capacity == CapacityRegime::kOptimalCapacity) {
      gain = std::max(gain, MaxCapacityDeviationGain(
                                scenario_.market, row.policy,
                                point.capacities, row.pricing));
    }
    if (std::isinf(gain)) return;
    row.oracle_gain = gain;
    if (gain > kOracleGainWarning) {
      AppendWarning(row.warning,
                    "unilateral deviation gains " + FormatNumber(gain));
    }
  }

  const Scenario& scenario_;
  SweepOptions options_;
};

void RequireCompetitive(const Scenario& scenario) {
  if (scenario.model != ModelKind::kCompetitive) {
    throw InvalidArgument("scenario is not a competitive model");
  }
}

}  // namespace

std::vector<CompetitiveRow> RunMandateSweep(const Scenario& scenario,
                                            const SweepOptions& options) {
  RequireCompetitive(scenario);
  if (scenario.sweep == SweepVariable::kDelta) {
    throw InvalidArgument("mandate sweep needs sweep = r or none");
  }
  const std::vector<double> values =
      scenario.sweep == SweepVariable::kMandate
          ? scenario.grid.Values()
          : std::vector<double>{scenario.policy.mandate};

  std::vector<PricingRegime> regimes = scenario.pricing;
  std::sort(regimes.begin(), regimes.end(),
            [](PricingRegime a, PricingRegime b) {
              return ToString(a) < ToString(b);
            });

  PointSolver solver(scenario, options);
  std::vector<CompetitiveRow> rows;
  for (double r : values) {
    for (PricingRegime regime : regimes) {
      CompetitiveRow row;
      row.sweep_value = r;
      row.label = ToString(regime);
      row.delta = scenario.delta;
      row.policy = scenario.policy;
      row.policy.mandate = r;
      row.pricing = regime;
      for (const std::string& warning : scenario.warnings) {
        AppendWarning(row.warning, warning);
      }
      solver.Solve(row, scenario.capacity, static_cast<int>(rows.size()));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<CompetitiveRow> RunDeltaSweep(const Scenario& scenario,
                                          const SweepOptions& options) {
  RequireCompetitive(scenario);
  if (scenario.sweep == SweepVariable::kMandate) {
    throw InvalidArgument("delta sweep needs sweep = delta or none");
  }
  if (scenario.capacity != CapacityRegime::kOptimalCapacity) {
    throw InvalidArgument("delta sweep needs capacity = optimal");
  }
  if (std::find(scenario.pricing.begin(), scenario.pricing.end(),
                PricingRegime::kTwoPrice) == scenario.pricing.end()) {
    throw InvalidArgument("delta sweep needs pricing = two-price");
  }
  const std::vector<double> values =
      scenario.sweep == SweepVariable::kDelta
          ? scenario.grid.Values()
          : std::vector<double>{scenario.delta};

  struct Cell {
    const char* label;
    bool mandate;
    bool subsidy;
  };
  constexpr Cell kCells[] = {
      {"a", false, false}, {"b", false, true},
      {"c", true, false},  {"d", true, true}};

  PointSolver solver(scenario, options);
  std::vector<CompetitiveRow> rows;
  for (double delta : values) {
    for (const Cell& cell : kCells) {
      CompetitiveRow row;
      row.sweep_value = delta;
      row.label = cell.label;
      row.delta = delta;
      row.policy.intrinsic_cost = scenario.policy.intrinsic_cost;
      row.policy.mandate = cell.mandate ? scenario.policy.mandate : 0.0;
      row.policy.subsidy = cell.subsidy ? scenario.policy.subsidy : 0.0;
      row.pricing = PricingRegime::kTwoPrice;
      for (const std::string& warning : scenario.warnings) {
        AppendWarning(row.warning, warning);
      }
      solver.Solve(row, CapacityRegime::kOptimalCapacity,
                   static_cast<int>(rows.size()));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<std::string> CompetitiveColumns() {
  return {"sweep_value",   "label",         "delta",
          "r",             "s",             "p",
          "status",        "iterations",    "multistart_spread",
          "n_e1",          "n_e2",          "n_d1",
          "n_d2",          "c1",            "c2",
          "m1",            "m2",            "q_e1",
          "q_e2",          "q_d1",          "q_d2",
          "avg_price_ev",  "avg_price_ice", "profit_1",
          "profit_2",      "total_profit",  "cs_ev",
          "cs_ice",        "govt_cost",     "total_welfare",
          "total_congestion", "hhi_ev",     "hhi_ice",
          "oracle_gain",   "warning"};
}

Table ToTable(const std::vector<CompetitiveRow>& rows) {
  Table table;
  table.columns = CompetitiveColumns();
  const size_t solved_columns = 24;  // n_e1 .. hhi_ice
  for (const CompetitiveRow& row : rows) {
    std::vector<Cell> cells = {row.sweep_value,
                               row.label,
                               row.delta,
                               row.policy.mandate,
                               row.policy.subsidy,
                               row.policy.EffectiveCost(),
                               row.status,
                               static_cast<long>(row.iterations),
                               ToCell(row.multistart_spread)};
    if (row.point) {
      const SolvedPoint& p = *row.point;
      const WelfareReport& w = p.welfare;
      const Cell solved[] = {
          p.capacities.ev[0],  p.capacities.ev[1],  p.capacities.ice[0],
          p.capacities.ice[1], ToCell(p.prices.ev[0]),
          ToCell(p.prices.ev[1]), ToCell(p.prices.ice[0]),
          ToCell(p.prices.ice[1]), p.quantities.ev[0], p.quantities.ev[1],
          p.quantities.ice[0], p.quantities.ice[1], ToCell(w.avg_price_ev),
          ToCell(w.avg_price_ice), w.profit_1, w.profit_2,
          w.profit_1 + w.profit_2, w.cs_ev, w.cs_ice, w.govt_cost,
          w.total_welfare, w.total_congestion, ToCell(w.hhi_ev),
          ToCell(w.hhi_ice)};
      cells.insert(cells.end(), std::begin(solved), std::end(solved));
    } else {
      cells.insert(cells.end(), solved_columns, Missing{});
    }
    cells.push_back(ToCell(row.oracle_gain));
    cells.push_back(row.warning);
    table.rows.push_back(std::move(cells));
  }
  return table;
}

std::vector<MonopolistRow> RunMonopolistSuite(const Scenario& scenario,
                                              bool profile) {
  using monopolist::PricingCase;
  if (scenario.model != ModelKind::kMonopolist) {
    throw InvalidArgument("scenario is not a monopolist model");
  }
  const monopolist::MonopolistParams& params = scenario.monopolist;
  const monopolist::DemandDistribution& dist = scenario.demand;
  const monopolist::MonopolistSolution solution =
      monopolist::SolveMonopolist(params, dist);

  std::vector<MonopolistRow> rows;
  for (int t = 0; t < dist.size(); ++t) {
    const monopolist::CaseProfit& candidate = solution.case1_candidates[t];
    MonopolistRow row;
    row.row_type = "case1";
    row.pricing_case = candidate.pricing_case;
    row.ev_spots = solution.case1_capacities[t];
    row.ice_price = solution.ice_price;
    if (!std::isnan(candidate.profit)) {
      row.ev_price = candidate.price;
      row.expected_profit = candidate.profit;
    } else {
      row.status = "infeasible";
    }
    rows.push_back(row);
  }

  MonopolistRow best;
  best.row_type = "solution";
  best.pricing_case = solution.pricing_case;
  best.ev_spots = solution.ev_spots;
  best.ice_price = solution.ice_price;
  if (solution.ev_spots > 0.0) best.ev_price = solution.ev_price;
  best.expected_profit = solution.expected_profit;
  best.assumptions = solution.assumptions;
  best.oracle = solution.oracle;
  best.oracle_gap = solution.oracle_gap;
  if (!solution.oracle_agrees) best.status = "oracle-mismatch";
  rows.push_back(best);

  if (profile) {
    const std::vector<PricingCase> cases = monopolist::AllCases(dist.size());
    const int points = static_cast<int>(std::lround(1.0 / kProfileStep));
    for (int k = 1; k <= points; ++k) {
      const double ev_spots = k == points ? 1.0 : k * kProfileStep;
      for (const PricingCase& pricing_case : cases) {
        const std::optional<double> price =
            monopolist::CasePrice(params, dist, ev_spots, pricing_case);
        if (!price) continue;
        MonopolistRow row;
        row.row_type = "profile";
        row.pricing_case = pricing_case;
        row.ev_spots = ev_spots;
        row.ev_price = price;
        row.ice_price = solution.ice_price;
        row.expected_profit =
            monopolist::ExpectedProfit(params, dist, ev_spots, pricing_case);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<std::string> MonopolistColumns() {
  return {"row_type",        "case",
          "target",          "ev_spots",
          "ev_price",        "ice_price",
          "expected_profit", "assumption_ev_value",
          "assumption_conversion", "oracle_ev_spots",
          "oracle_profit",   "oracle_gap",
          "status"};
}

Table ToTable(const std::vector<MonopolistRow>& rows) {
  using monopolist::PricingCase;
  Table table;
  table.columns = MonopolistColumns();
  for (const MonopolistRow& row : rows) {
    std::vector<Cell> cells;
    cells.push_back(row.row_type);
    if (row.pricing_case) {
      cells.push_back(monopolist::ToString(*row.pricing_case));
      if (row.pricing_case->kind == PricingCase::Kind::kCase3) {
        cells.push_back(Missing{});
      } else {
        cells.push_back(static_cast<long>(row.pricing_case->target));
      }
    } else {
      cells.insert(cells.end(), 2, Missing{});
    }
    cells.push_back(row.ev_spots);
    cells.push_back(ToCell(row.ev_price));
    cells.push_back(row.ice_price);
    cells.push_back(ToCell(row.expected_profit));
    if (row.assumptions) {
      cells.push_back(static_cast<long>(
          row.assumptions->ev_value_exceeds_congestion));
      cells.push_back(static_cast<long>(row.assumptions->conversion_pays));
    } else {
      cells.insert(cells.end(), 2, Missing{});
    }
    if (row.oracle) {
      cells.push_back(row.oracle->ev_spots);
      cells.push_back(row.oracle->best.profit);
    } else {
      cells.insert(cells.end(), 2, Missing{});
    }
    cells.push_back(ToCell(row.oracle_gap));
    cells.push_back(row.status);
    table.rows.push_back(std::move(cells));
  }
  return table;
}

}  // namespace evpark
