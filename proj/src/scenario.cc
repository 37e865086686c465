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

#include "evpark/scenario.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace evpark {
namespace {

constexpr double kGridSlack = 1e-9;

struct Entry {
  std::string value;
  int line;
};

std::string_view Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

const std::set<std::string, std::less<>> kCompetitiveKeys = {
    "model",  "W_e",   "W_d",      "alpha",     "beta",
    "epsilon", "delta", "r",       "t",         "s",
    "pricing", "capacity", "sweep", "sweep_min", "sweep_max",
    "sweep_step", "seed", "output"};

const std::set<std::string, std::less<>> kMonopolistKeys = {
    "model", "W_e", "W_d", "epsilon", "p", "t", "s", "q", "pi", "output"};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry, std::less<>> entries)
      : entries_(std::move(entries)) {}

  bool Has(std::string_view key) const {
    return entries_.find(key) != entries_.end();
  }

  int Line(std::string_view key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  const Entry& Require(std::string_view key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw ConfigError(ConfigErrorKind::kMissingKey, std::string(key), 0,
                        "required key is missing");
    }
    return it->second;
  }

  double Number(std::string_view key) const {
    const Entry& entry = Require(key);
    return ParseNumber(key, entry.value, entry.line);
  }

  double NumberOr(std::string_view key, double fallback) const {
    return Has(key) ? Number(key) : fallback;
  }

  std::vector<double> Numbers(std::string_view key) const {
    const Entry& entry = Require(key);
    std::vector<double> values;
    for (std::string_view rest = entry.value;;) {
      const auto comma = rest.find(',');
      values.push_back(
          ParseNumber(key, Trim(rest.substr(0, comma)), entry.line));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return values;
  }

  std::vector<std::string> Names(std::string_view key) const {
    const Entry& entry = Require(key);
    std::vector<std::string> names;
    for (std::string_view rest = entry.value;;) {
      const auto comma = rest.find(',');
      names.emplace_back(Trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return names;
  }

  void CheckKnown(const std::set<std::string, std::less<>>& allowed,
                  std::string_view model) const {
    // Report the earliest offending line.
    const std::pair<const std::string, Entry>* first = nullptr;
    for (const auto& item : entries_) {
      if (allowed.count(item.first)) continue;
      if (!first || item.second.line < first->second.line) first = &item;
    }
    if (first) {
      throw ConfigError(ConfigErrorKind::kUnknownKey, first->first,
                        first->second.line,
                        "not a key of the " + std::string(model) + " model");
    }
  }

  [[noreturn]] void Invariant(std::string_view key,
                              const std::string& message) const {
    throw ConfigError(ConfigErrorKind::kInvariantViolation, std::string(key),
                      Line(key), message);
  }

 private:
  static double ParseNumber(std::string_view key, std::string_view text,
                            int line) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (!text.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (text.empty() || ec != std::errc() || ptr != end ||
        !std::isfinite(value)) {
      throw ConfigError(ConfigErrorKind::kMalformedNumber, std::string(key),
                        line, "'" + std::string(text) + "' is not a number");
    }
    return value;
  }

  std::map<std::string, Entry, std::less<>> entries_;
};

std::map<std::string, Entry, std::less<>> Tokenize(std::string_view text) {
  std::map<std::string, Entry, std::less<>> entries;
  int line_number = 0;
  while (!text.empty()) {
    ++line_number;
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{}
                                             : text.substr(newline + 1);
    line = Trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto equals = line.find('=');
    if (equals == std::string_view::npos) {
      throw ConfigError(ConfigErrorKind::kSyntax, "", line_number,
                        "expected 'key = value'");
    }
    const std::string key(Trim(line.substr(0, equals)));
    if (key.empty()) {
      throw ConfigError(ConfigErrorKind::kSyntax, "", line_number,
                        "empty key");
    }
    const auto [it, inserted] = entries.emplace(
        key, Entry{std::string(Trim(line.substr(equals + 1))), line_number});
    if (!inserted) {
      throw ConfigError(ConfigErrorKind::kDuplicateKey, key, line_number,
                        "first set on line " +
                            std::to_string(it->second.line));
    }
  }
  return entries;
}

void LoadCompetitive(const Reader& reader, Scenario& scenario) {
  reader.CheckKnown(kCompetitiveKeys, "competitive");

  MarketParams& market = scenario.market;
  market.w_e = reader.Number("W_e");
  market.w_d = reader.Number("W_d");
  market.alpha = reader.Number("alpha");
  market.beta = reader.Number("beta");
  market.epsilon = reader.Number("epsilon");
  for (const char* key : {"W_e", "W_d", "alpha", "beta", "epsilon"}) {
    if (!(reader.Number(key) > 0.0)) reader.Invariant(key, "must be > 0");
  }
  if (!(market.w_e > market.w_d)) reader.Invariant("W_e", "must exceed W_d");

  const auto& sweep_entry = reader.Require("sweep");
  if (sweep_entry.value == "r") {
    scenario.sweep = SweepVariable::kMandate;
  } else if (sweep_entry.value == "delta") {
    scenario.sweep = SweepVariable::kDelta;
  } else if (sweep_entry.value == "none") {
    scenario.sweep = SweepVariable::kNone;
  } else {
    throw ConfigError(ConfigErrorKind::kInvalidValue, "sweep",
                      sweep_entry.line, "expected r, delta or none");
  }

  if (scenario.sweep != SweepVariable::kDelta || reader.Has("delta")) {
    scenario.delta = reader.Number("delta");
    if (!(scenario.delta >= 0.0 && scenario.delta <= 1.0)) {
      reader.Invariant("delta", "must lie in [0, 1]");
    }
  }

  PolicyConfig& policy = scenario.policy;
  policy.mandate = reader.NumberOr("r", 0.0);
  policy.intrinsic_cost = reader.NumberOr("t", 0.0);
  policy.subsidy = reader.NumberOr("s", 0.0);
  if (!(policy.mandate >= 0.0 && policy.mandate <= 1.0)) {
    reader.Invariant("r", "must lie in [0, 1]");
  }
  if (!(policy.intrinsic_cost >= 0.0)) reader.Invariant("t", "must be >= 0");
  if (!(policy.subsidy >= 0.0 && policy.subsidy <= policy.intrinsic_cost)) {
    reader.Invariant("s", "must lie in [0, t]");
  }

  for (const std::string& name : reader.Names("pricing")) {
    const std::optional<PricingRegime> regime = ParsePricingRegime(name);
    if (!regime) {
      throw ConfigError(ConfigErrorKind::kInvalidValue, "pricing",
                        reader.Line("pricing"),
                        "'" + name +
                            "' is not two-price, optimal-single or "
                            "naive-single");
    }
    if (std::find(scenario.pricing.begin(), scenario.pricing.end(),
                  *regime) == scenario.pricing.end()) {
      scenario.pricing.push_back(*regime);
    }
  }
  std::sort(scenario.pricing.begin(), scenario.pricing.end(),
            [](PricingRegime a, PricingRegime b) {
              return ToString(a) < ToString(b);
            });

  const auto& capacity_entry = reader.Require("capacity");
  const std::optional<CapacityRegime> capacity =
      ParseCapacityRegime(capacity_entry.value);
  if (!capacity) {
    throw ConfigError(ConfigErrorKind::kInvalidValue, "capacity",
                      capacity_entry.line,
                      "expected naive-mandate or optimal");
  }
  scenario.capacity = *capacity;

  if (scenario.sweep != SweepVariable::kNone) {
    SweepGrid& grid = scenario.grid;
    grid.min = reader.Number("sweep_min");
    grid.max = reader.Number("sweep_max");
    grid.step = reader.Number("sweep_step");
    if (!(grid.step > 0.0)) reader.Invariant("sweep_step", "must be > 0");
    if (!(grid.min <= grid.max)) {
      reader.Invariant("sweep_min", "must not exceed sweep_max");
    }
    if (!(grid.min >= 0.0 && grid.max <= 1.0)) {
      reader.Invariant("sweep_min", "sweep range must lie in [0, 1]");
    }
  } else {
    for (const char* key : {"sweep_min", "sweep_max", "sweep_step"}) {
      if (reader.Has(key)) {
        reader.Invariant(key, "given without a sweep variable");
      }
    }
  }

  if (reader.Has("seed")) {
    const Entry& entry = reader.Require("seed");
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(
        entry.value.data(), entry.value.data() + entry.value.size(), seed);
    if (entry.value.empty() || ec != std::errc() ||
        ptr != entry.value.data() + entry.value.size()) {
      throw ConfigError(ConfigErrorKind::kMalformedNumber, "seed", entry.line,
                        "expected a non-negative integer");
    }
    scenario.seed = seed;
  }

  const bool has_optimal_single =
      std::find(scenario.pricing.begin(), scenario.pricing.end(),
                PricingRegime::kOptimalSinglePrice) != scenario.pricing.end();
  if (scenario.capacity == CapacityRegime::kOptimalCapacity &&
      has_optimal_single) {
    scenario.warnings.push_back(
        "optimal capacity with optimal-single pricing has no existence "
        "result; rows carry an unsupported-theory warning");
  }
}

void LoadMonopolist(const Reader& reader, Scenario& scenario) {
  reader.CheckKnown(kMonopolistKeys, "monopolist");

  monopolist::MonopolistParams& params = scenario.monopolist;
  params.w_e = reader.Number("W_e");
  params.w_d = reader.Number("W_d");
  params.epsilon = reader.Number("epsilon");
  for (const char* key : {"W_e", "W_d", "epsilon"}) {
    if (!(reader.Number(key) > 0.0)) reader.Invariant(key, "must be > 0");
  }
  if (!(params.w_e > params.w_d)) reader.Invariant("W_e", "must exceed W_d");

  if (reader.Has("p")) {
    if (reader.Has("t") || reader.Has("s")) {
      reader.Invariant("p", "give either p or (t, s), not both");
    }
    params.conversion_cost = reader.Number("p");
    if (!(params.conversion_cost >= 0.0)) reader.Invariant("p", "must be >= 0");
  } else {
    const double t = reader.Number("t");
    const double s = reader.NumberOr("s", 0.0);
    if (!(t >= 0.0)) reader.Invariant("t", "must be >= 0");
    if (!(s >= 0.0 && s <= t)) reader.Invariant("s", "must lie in [0, t]");
    params.conversion_cost = t - s;
  }

  monopolist::DemandDistribution& demand = scenario.demand;
  demand.sizes = reader.Numbers("q");
  demand.probabilities = reader.Numbers("pi");
  if (demand.sizes.size() != demand.probabilities.size()) {
    reader.Invariant("pi", "must have as many entries as q");
  }
  try {
    demand.Validate();
  } catch (const InvalidArgument& e) {
    const std::string message = e.what();
    reader.Invariant(message.find("probabilit") != std::string::npos ? "pi"
                                                                      : "q",
                     message);
  }
}

}  // namespace

std::string ToString(SweepVariable sweep) {
  switch (sweep) {
    case SweepVariable::kNone:
      return "none";
    case SweepVariable::kMandate:
      return "r";
    case SweepVariable::kDelta:
      return "delta";
  }
  return "unknown";
}

std::vector<double> SweepGrid::Values() const {
  const long count =
      static_cast<long>(std::floor((max - min) / step + kGridSlack));
  std::vector<double> values;
  values.reserve(count + 1);
  for (long k = 0; k <= count; ++k) {
    values.push_back(std::min(min + static_cast<double>(k) * step, max));
  }
  return values;
}

std::string ToString(ConfigErrorKind kind) {
  switch (kind) {
    case ConfigErrorKind::kSyntax:
      return "syntax";
    case ConfigErrorKind::kUnknownKey:
      return "unknown-key";
    case ConfigErrorKind::kDuplicateKey:
      return "duplicate-key";
    case ConfigErrorKind::kMissingKey:
      return "missing-key";
    case ConfigErrorKind::kMalformedNumber:
      return "malformed-number";
    case ConfigErrorKind::kInvalidValue:
      return "invalid-value";
    case ConfigErrorKind::kInvariantViolation:
      return "invariant-violation";
  }
  return "unknown";
}

ConfigError::ConfigError(ConfigErrorKind kind, std::string key, int line,
                         const std::string& message)
    : std::runtime_error(
          ToString(kind) + (line > 0 ? " at line " + std::to_string(line)
                                     : std::string()) +
          (key.empty() ? std::string() : " (key '" + key + "')") + ": " +
          message),
      kind_(kind),
      key_(std::move(key)),
      line_(line) {}

Scenario LoadScenario(std::string_view text) {
  const Reader reader(Tokenize(text));
  Scenario scenario;
  const Entry& model = reader.Require("model");
  if (model.value == "competitive") {
    scenario.model = ModelKind::kCompetitive;
    LoadCompetitive(reader, scenario);
  } else if (model.value == "monopolist") {
    scenario.model = ModelKind::kMonopolist;
    LoadMonopolist(reader, scenario);
  } else {
    throw ConfigError(ConfigErrorKind::kInvalidValue, "model", model.line,
                      "expected competitive or monopolist");
  }
  if (reader.Has("output")) scenario.output = reader.Require("output").value;
  return scenario;
}

Scenario LoadScenarioFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return LoadScenario(buffer.str());
}

}  // namespace evpark
