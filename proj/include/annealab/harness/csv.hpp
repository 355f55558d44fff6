// Copyright 2026 The annealab Authors
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

#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "annealab/errors.hpp"
#include "annealab/format.hpp"

namespace annealab::harness {

// Header row, comma separated, '.' decimal separator (format_real is locale free).
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path), path_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path);
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
    out_ << '\n';
  }

  const std::string& path() const noexcept { return path_; }

 private:
  std::ofstream out_;
  std::string path_;
};

inline std::string cell(double x) { return format_real(x); }
inline std::string cell(std::uint64_t x) { return std::to_string(x); }
inline std::string cell(std::int64_t x) { return std::to_string(x); }
inline std::string cell(int x) { return std::to_string(x); }
inline std::string cell(const std::string& s) { return s; }

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return k;
    throw InputError("csv: missing column '" + name + "'");
  }
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  CsvTable table;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string c;
    std::istringstream ss(l);
    while (std::getline(ss, c, ',')) cells.push_back(c);
    return cells;
  };
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header.size()) throw InputError(path + ": ragged row");
    table.rows.push_back(std::move(cells));
  }
  return table;
}

}  // namespace annealab::harness
