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

#include "hyptrace/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <sstream>

namespace hyptrace {

namespace {

std::atomic<int> g_level{static_cast<int>(LogLevel::info)};

const char* level_name(LogLevel level) {
  switch (level) {
    case LogLevel::debug: return "debug";
    case LogLevel::info: return "info";
    case LogLevel::warn: return "warn";
    case LogLevel::error: return "error";
    default: return "off";
  }
}

void put_value(std::ostream& os, std::string_view v) {
  if (!v.empty() && v.find_first_of(" \"=") == std::string_view::npos) {
    os << v;
    return;
  }
  os << '"';
  for (char c : v) {
    if (c == '"' || c == '\\') os << '\\';
    os << c;
  }
  os << '"';
}

}  // namespace

void set_log_level(LogLevel level) { g_level = static_cast<int>(level); }
LogLevel log_level() { return static_cast<LogLevel>(g_level.load()); }

void log_event(LogLevel level, std::string_view event,
               std::initializer_list<std::pair<std::string_view, std::string>> fields) {
  if (static_cast<int>(level) < g_level.load() || level == LogLevel::off) return;
  std::ostringstream line;
  line << "level=" << level_name(level) << " event=" << event;
  for (const auto& [k, v] : fields) {
    line << ' ' << k << '=';
    put_value(line, v);
  }
  line << '\n';
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  std::cerr << line.str();
}

}  // namespace hyptrace
