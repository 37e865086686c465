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

#ifndef EVPARK_MARKET_H_
#define EVPARK_MARKET_H_

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

namespace evpark {

// Absolute tolerance on marginal utilities at a Wardrop equilibrium.
inline constexpr double kWardropTolerance = 1e-9;

enum class DriverClass { kEv, kIce };
enum class Firm { kOne = 0, kTwo = 1 };

inline constexpr std::array<DriverClass, 2> kDriverClasses = {
    DriverClass::kEv, DriverClass::kIce};
inline constexpr std::array<Firm, 2> kFirms = {Firm::kOne, Firm::kTwo};

inline constexpr int Index(Firm firm) { return static_cast<int>(firm); }
inline constexpr Firm Opponent(Firm firm) {
  return firm == Firm::kOne ? Firm::kTwo : Firm::kOne;
}
std::string ToString(DriverClass cls);

// Per-firm pair, indexed by Index(Firm).
using FirmPair = std::array<double, 2>;

// A price that may be absent: std::nullopt marks a class/firm with no market
// (no capacity on either side, or the firm does not exist).
using Price = std::optional<double>;
using PricePair = std::array<Price, 2>;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a marginal utility is requested at a cell with no spots.
class InfiniteCongestion : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Linear inverse demand for both driver classes plus the congestion scale.
struct MarketParams {
  double w_e = 0.0;      // EV demand intercept
  double w_d = 0.0;      // ICE demand intercept
  double alpha = 0.0;    // EV inverse-demand slope
  double beta = 0.0;     // ICE inverse-demand slope
  double epsilon = 0.0;  // congestion cost at full occupancy

  double Intercept(DriverClass cls) const {
    return cls == DriverClass::kEv ? w_e : w_d;
  }
  double Slope(DriverClass cls) const {
    return cls == DriverClass::kEv ? alpha : beta;
  }

  // Throws InvalidArgument unless every field is finite and positive and
  // w_e > w_d.
  void Validate() const;
};

// Spot allocation of the unit mass of parking. Firm 1 owns delta, firm 2 owns
// 1 - delta; each firm splits its spots between EV chargers and ICE spots.
struct CapacityProfile {
  double delta = 0.5;
  FirmPair ev = {0.0, 0.0};
  FirmPair ice = {0.5, 0.5};

  // Builds the profile whose ICE spots are the remainder of each endowment.
  static CapacityProfile FromEv(double delta, double ev_1, double ev_2);

  double Endowment(Firm firm) const {
    return firm == Firm::kOne ? delta : 1.0 - delta;
  }
  const FirmPair& Spots(DriverClass cls) const {
    return cls == DriverClass::kEv ? ev : ice;
  }
  FirmPair& Spots(DriverClass cls) {
    return cls == DriverClass::kEv ? ev : ice;
  }

  // Throws InvalidArgument when masses leave [0, 1] or do not add up to the
  // endowments (within 1e-12).
  void Validate() const;
};

struct PriceProfile {
  PricePair ev;   // c1, c2
  PricePair ice;  // m1, m2

  const PricePair& Of(DriverClass cls) const {
    return cls == DriverClass::kEv ? ev : ice;
  }
  PricePair& Of(DriverClass cls) {
    return cls == DriverClass::kEv ? ev : ice;
  }
};

// Equilibrium masses of drivers parked at each firm. Quantities may exceed
// capacity (drivers cruising for a spot).
struct WardropOutcome {
  FirmPair ev = {0.0, 0.0};
  FirmPair ice = {0.0, 0.0};

  const FirmPair& Of(DriverClass cls) const {
    return cls == DriverClass::kEv ? ev : ice;
  }
  FirmPair& Of(DriverClass cls) { return cls == DriverClass::kEv ? ev : ice; }
};

// Inputs for one class in isolation: everything the Wardrop and pricing
// formulas need.
struct ClassMarket {
  double intercept;
  double slope;
  double epsilon;
  FirmPair spots;
};

ClassMarket MakeClassMarket(const MarketParams& params,
                            const CapacityProfile& capacities,
                            DriverClass cls);

// W (1 - slope (q_1 + q_2)) - eps q_i / N_i - price_i. Throws
// InfiniteCongestion when N_i == 0 and InvalidArgument when the price is
// absent.
double MarginalUtility(const MarketParams& params, DriverClass cls, Firm firm,
                       const WardropOutcome& quantities,
                       const CapacityProfile& capacities,
                       const PriceProfile& prices);

// Wardrop quantities for one class. Firms with zero spots serve nothing and
// their price is ignored; a firm whose price is too high to attract anyone is
// dropped and the other firm is solved as a monopolist.
FirmPair ClassWardropQuantities(const ClassMarket& market,
                                const PricePair& prices);

WardropOutcome WardropQuantities(const MarketParams& params,
                                 const CapacityProfile& capacities,
                                 const PriceProfile& prices);

// Certificate that neither firm could profitably push its
// rival out of a class: every opponent price is at most
// W/2 + eps q_i / N_i at the Wardrop point. Classes in which a firm has no
// spots carry no competition and are skipped.
bool CheckNoProfitableUndercut(const MarketParams& params,
                               const CapacityProfile& capacities,
                               const PriceProfile& prices);

}  // namespace evpark

#endif  // EVPARK_MARKET_H_
