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
#include <functional>

#include "hyptrace/bigint.hpp"

namespace hyptrace {

/// 1 for even n, 0 for odd n (negative n included).
constexpr int eta(int n) noexcept { return n % 2 == 0 ? 1 : 0; }

/// Average of tr U^n over USp(2g).
std::int64_t usp_trace_moment(int n, int g);

/// Average of tr U^m tr U^n over USp(2g), m, n >= 1 in either order.
std::int64_t usp_pair_moment(int m, int n, int g);

/// Average of Z_f over USp(2g): fhat(0) - (1/g) sum_{m=1}^{g} fhat(m/g).
double usp_one_level(const std::function<double(double)>& fhat, int g);

/// The same average assembled term by term from the trace moments,
/// sum over |n| <= n_limit of usp_trace_moment(n, g) fhat(n/2g) / 2g.
double usp_one_level_fourier(const std::function<double(double)>& fhat, int g, int n_limit);

/// Exact counterparts for test functions with rational samples.
Rational usp_one_level_exact(const std::function<Rational(const Rational&)>& fhat, int g);
Rational usp_one_level_fourier_exact(const std::function<Rational(const Rational&)>& fhat, int g, int n_limit);

}  // namespace hyptrace
