// Copyright 2026 The Telechan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TELECHAN_RECORDS_IO_HPP
#define TELECHAN_RECORDS_IO_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "telechan/explab.hpp"

namespace telechan {

/// Shortest decimal that parses back to the same double ("nan", "inf", "-inf" for non-finite).
std::string format_double(double v);
/// Strict inverse of format_double; throws std::invalid_argument on trailing junk.
double parse_double(std::string_view s);

/// Column names for the selected quantities; delta and t always lead and
/// engine_disagreement trails when the engine is Both.
std::vector<std::string> csv_columns(const std::vector<Quantity>& quantities, Engine engine);

/// Header plus one row per record, '\n' terminated.
std::string records_to_csv(const std::vector<SweepRecord>& records, const std::vector<Quantity>& quantities,
                           Engine engine);

class CsvParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads CSV written by records_to_csv. Absent real-valued columns come back
/// as NaN and an absent m_star as -1.
std::vector<SweepRecord> records_from_csv(std::string_view text);

/// {"meta": resolved sweep settings, "records": [...]} with two-space indentation.
std::string records_to_json(const SweepSpec& spec, const std::vector<SweepRecord>& records);

}  // namespace telechan

#endif  // TELECHAN_RECORDS_IO_HPP
