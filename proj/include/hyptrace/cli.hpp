/*
   Copyright 2026 The hyptrace Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hyptrace::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIdentity = 2;
inline constexpr int kExitInvalid = 3;

struct RunConfig {
  std::string command;
  std::uint64_t q = 3;
  int g = 1;
  std::optional<int> n_max;
  std::optional<int> m;
  std::optional<int> n;
  std::string poly;
  std::string fhat = "triangle:1.9";
  std::uint64_t sample = 0;  // 0 means exhaustive
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string format = "auto";
  std::string out;
  std::string cache_dir;
  std::uint64_t budget = 10'000'000;
  double warn_ratio = 10.0;
};

/// Key/value pairs recorded in every output header. Threads are left out so
/// that runs differing only in parallelism produce identical files.
std::vector<std::pair<std::string, std::string>> config_fields(const RunConfig& config);

/// A cell is empty, an integer, a real, or text. Big integers and rationals
/// travel as text so JSON keeps them exact.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Document {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> notes;
  double wall_time_s = 0.0;
  std::vector<Table> tables;
};

std::string csv_escape(const std::string& field);
void write_csv(std::ostream& os, const Document& doc);
void write_json(std::ostream& os, const Document& doc);

/// Parses args (without the program name), dispatches and writes the result to
/// --out or to out. Logs and errors go to err. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyptrace::cli
