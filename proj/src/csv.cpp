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

#include "fairbonus/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fairbonus/error.hpp"

namespace fairbonus::csv {

std::size_t Document::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::string::npos;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
  }

  bool done() const { return pos_ >= text_.size(); }

  // Reads one record; returns false at end of input.
  bool next(Row& row) {
    if (done()) return false;
    row.line = line_;
    row.fields.clear();
    std::string field;
    bool quoted = false;
    bool after_quote = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (quoted) {
        if (c == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            field.push_back('"');
            ++pos_;
          } else {
            quoted = false;
            after_quote = true;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(c);
        }
        continue;
      }
      if (c == ',') {
        row.fields.push_back(std::move(field));
        field.clear();
        after_quote = false;
      } else if (c == '\r' || c == '\n') {
        if (c == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
        ++line_;
        row.fields.push_back(std::move(field));
        return true;
      } else if (c == '"') {
        if (!field.empty() || after_quote) fail("unexpected quote inside a field");
        quoted = true;
      } else {
        if (after_quote) fail("characters after a closing quote");
        field.push_back(c);
      }
    }
    if (quoted) fail("unterminated quoted field");
    row.fields.push_back(std::move(field));
    return true;
  }

 private:
  [[noreturn]] void fail(const char* what) const {
    throw DataError("csv line " + std::to_string(line_) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

bool blank(const Row& row) {
  return row.fields.size() == 1 && row.fields[0].empty();
}

}  // namespace

Document parse(std::string_view text) {
  Parser parser(text);
  Document doc;
  Row row;
  if (!parser.next(row) || blank(row)) throw DataError("csv input has no header row");
  doc.header = std::move(row.fields);
  while (parser.next(row)) {
    if (blank(row)) continue;
    if (row.fields.size() != doc.header.size()) {
      std::ostringstream msg;
      msg << "csv line " << row.line << ": expected " << doc.header.size()
          << " fields, found " << row.fields.size();
      throw DataError(msg.str());
    }
    doc.rows.push_back(row);
  }
  return doc;
}

Document read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open data file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace fairbonus::csv
