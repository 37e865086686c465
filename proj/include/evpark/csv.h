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

#ifndef EVPARK_CSV_H_
#define EVPARK_CSV_H_

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace evpark {

// Written as "NA".
struct Missing {
  friend bool operator==(Missing, Missing) { return true; }
};

using Cell = std::variant<Missing, double, long, std::string>;

Cell ToCell(const std::optional<double>& value);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// Numbers use 12 significant digits and '.' as the decimal separator.
std::string FormatCell(const Cell& cell);

// RFC 4180 text with a header row and LF line endings. Fields holding a
// comma, quote or line break are quoted.
std::string FormatCsv(const Table& table);

// Throws std::runtime_error when the file cannot be written.
void EmitCsv(const Table& table, const std::string& path);

}  // namespace evpark

#endif  // EVPARK_CSV_H_
