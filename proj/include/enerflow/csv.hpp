// Copyright 2026 The enerflow Authors
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

#ifndef ENERFLOW_CSV_HPP_
#define ENERFLOW_CSV_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace enerflow {

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

// RFC 4180 reader; accepts LF or CRLF record separators and skips blank
// lines. Throws Error(kParseError) on an unterminated quote.
std::vector<CsvRecord> parse_csv(std::string_view text);

// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view raw);

}  // namespace enerflow

#endif  // ENERFLOW_CSV_HPP_
