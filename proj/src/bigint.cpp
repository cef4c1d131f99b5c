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

#include "hyptrace/bigint.hpp"

#include <limits>
#include <stdexcept>

namespace hyptrace {

std::uint64_t checked_pow(std::uint64_t base, unsigned exponent) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    if (base != 0 && r > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) / base)
      throw std::overflow_error("integer power overflows 63 bits");
    r *= base;
  }
  return r;
}

}  // namespace hyptrace
