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

#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>

namespace hyptrace {

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

/// Messages below this level are dropped. Defaults to info.
void set_log_level(LogLevel level);
LogLevel log_level();

/// One line on stderr: level=... event=... key=value ... Values with spaces are quoted.
void log_event(LogLevel level, std::string_view event,
               std::initializer_list<std::pair<std::string_view, std::string>> fields = {});

}  // namespace hyptrace
