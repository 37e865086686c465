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

#include "evpark/csv.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace evpark {
namespace {

std::string Quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

struct CellFormatter {
  std::string operator()(Missing) const { return "NA"; }
  std::string operator()(double value) const {
    if (std::isnan(value)) return "NA";
    if (value == 0.0) return "0";  // no "-0"
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
  }
  std::string operator()(long value) const { return std::to_string(value); }
  std::string operator()(const std::string& value) const { return value; }
};

}  // namespace

Cell ToCell(const std::optional<double>& value) {
  if (!value) return Missing{};
  return *value;
}

std::string FormatCell(const Cell& cell) {
  return std::visit(CellFormatter{}, cell);
}

std::string FormatCsv(const Table& table) {
  std::string out;
  auto append_row = [&out](const auto& fields, auto&& format) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += Quote(format(fields[i]));
    }
    out += '\n';
  };
  append_row(table.columns, [](const std::string& s) { return s; });
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::logic_error("row width does not match the header");
    }
    append_row(row, [](const Cell& c) { return FormatCell(c); });
  }
  return out;
}

void EmitCsv(const Table& table, const std::string& path) {
  const std::string text = FormatCsv(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace evpark
