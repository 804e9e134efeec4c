// SPDX-License-Identifier: Apache-2.0
//
// fdjcas: full-duplex joint communications and sensing with a reconfigurable surface
// Copyright (C) 2026 The fdjcas authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fdjcas/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "fdjcas/common.hpp"

namespace fdjcas::csv {

std::string format(double value) {
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format(const std::optional<double> &value) { return value ? format(*value) : std::string(); }

void write_row(std::ostream &out, const std::vector<std::string> &cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0)
      out << ',';
    out << cells[i];
  }
  out << '\n';
}

std::vector<std::string> split_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r')
    line.remove_suffix(1);
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return cells;
}

std::optional<double> parse(std::string_view cell) {
  if (cell.empty())
    return std::nullopt;
  if (cell == "inf")
    return INFINITY;
  if (cell == "-inf")
    return -INFINITY;
  if (cell == "nan")
    return NAN;
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw Error("csv: not a number: " + std::string(cell));
  return v;
}

} // namespace fdjcas::csv
