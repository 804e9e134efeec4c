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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fdjcas::csv {

/// Shortest decimal text that parses back to the same double; "inf", "-inf", "nan" otherwise.
std::string format(double value);

/// Empty cell for a missing value.
std::string format(const std::optional<double> &value);

/// Writes one comma-separated line. Cells are written verbatim.
void write_row(std::ostream &out, const std::vector<std::string> &cells);

/// Splits one line on commas (no quoting is ever produced by this library).
std::vector<std::string> split_row(std::string_view line);

/// Parses a cell written by format(); empty cells give nullopt.
std::optional<double> parse(std::string_view cell);

} // namespace fdjcas::csv
