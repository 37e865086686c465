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

// Batch scenario configuration.
//
// The format is one `key = value` pair per line. `#` starts a comment that
// runs to the end of the line, blank lines are ignored, and sequences are
// comma separated (`q = 0.1, 0.15, 0.3`). Every key may appear once; keys
// that do not belong to the selected model are rejected.

#ifndef EVPARK_SCENARIO_H_
#define EVPARK_SCENARIO_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evpark/capacity.h"
#include "evpark/market.h"
#include "evpark/monopolist.h"
#include "evpark/pricing.h"

namespace evpark {

enum class ModelKind { kCompetitive, kMonopolist };
enum class SweepVariable { kNone, kMandate, kDelta };

std::string ToString(SweepVariable sweep);

// Inclusive grid min, min + step, ..., built as min + k step.
struct SweepGrid {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  std::vector<double> Values() const;
};

struct Scenario {
  ModelKind model = ModelKind::kCompetitive;

  // Competitive model.
  MarketParams market;
  double delta = 0.5;
  PolicyConfig policy;
  std::vector<PricingRegime> pricing;  // sorted by name, no duplicates
  CapacityRegime capacity = CapacityRegime::kNaiveMandate;
  SweepVariable sweep = SweepVariable::kNone;
  SweepGrid grid;
  std::uint64_t seed = 1;

  // Monopolist model.
  monopolist::MonopolistParams monopolist;
  monopolist::DemandDistribution demand;

  std::string output;  // empty when not given
  std::vector<std::string> warnings;
};

enum class ConfigErrorKind {
  kSyntax,              // a line that is not `key = value`
  kUnknownKey,
  kDuplicateKey,
  kMissingKey,
  kMalformedNumber,
  kInvalidValue,        // not one of the allowed names
  kInvariantViolation,  // well-formed values that break a model invariant
};

std::string ToString(ConfigErrorKind kind);

class ConfigError : public std::runtime_error {
 public:
  // line is 1-based; 0 when the problem is not tied to a line.
  ConfigError(ConfigErrorKind kind, std::string key, int line,
              const std::string& message);

  ConfigErrorKind kind() const { return kind_; }
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  ConfigErrorKind kind_;
  std::string key_;
  int line_;
};

// Parses and validates a scenario. Throws ConfigError.
Scenario LoadScenario(std::string_view text);

// Reads the file and parses it. Throws ConfigError, or std::runtime_error
// when the file cannot be read.
Scenario LoadScenarioFile(const std::string& path);

}  // namespace evpark

#endif  // EVPARK_SCENARIO_H_
