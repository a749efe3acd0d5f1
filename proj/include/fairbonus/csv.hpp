// Copyright 2026 The fairbonus Authors.
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

#ifndef FAIRBONUS_CSV_HPP_
#define FAIRBONUS_CSV_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fairbonus::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

struct Document {
  std::vector<std::string> header;
  std::vector<Row> rows;

  // Index of the first header cell equal to `name`, or npos.
  std::size_t column(std::string_view name) const;
};

// RFC 4180: comma separated, double-quote quoting with "" escapes, fields may
// span lines, CRLF or LF line endings. A UTF-8 byte-order mark is skipped.
// Throws DataError on malformed quoting or ragged rows.
Document parse(std::string_view text);
Document read_file(const std::string& path);

// Quotes a field when it contains a comma, quote or line break.
std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace fairbonus::csv

#endif  // FAIRBONUS_CSV_HPP_
