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

#include "hyptrace/rmt.hpp"

#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace hyptrace {

std::int64_t usp_trace_moment(int n, int g) {
  if (g < 1) throw std::invalid_argument("g must be >= 1");
  const int a = std::abs(n);
  if (a == 0) return 2 * g;
  if (a <= 2 * g) return -eta(a);
  return 0;
}

std::int64_t usp_pair_moment(int m, int n, int g) {
  if (g < 1 || m < 1 || n < 1) throw std::invalid_argument("usp_pair_moment needs m, n, g >= 1");
  if (m > n) std::swap(m, n);
  if (m == n) {
    if (n <= g) return n + eta(n);
    if (n <= 2 * g) return n - 1 + eta(n);
    return 2 * g;
  }
  if (m + n <= 2 * g) return eta(m) * eta(n);
  if (n <= 2 * g) return eta(m) * eta(n) - eta(m + n);
  if (n - m <= 2 * g) return -eta(m + n);
  return 0;
}

double usp_one_level(const std::function<double(double)>& fhat, int g) {
  if (g < 1) throw std::invalid_argument("g must be >= 1");
  double sum = 0.0;
  for (int m = 1; m <= g; ++m) sum += fhat(static_cast<double>(m) / g);
  return fhat(0.0) - sum / g;
}

double usp_one_level_fourier(const std::function<double(double)>& fhat, int g, int n_limit) {
  if (g < 1) throw std::invalid_argument("g must be >= 1");
  const double N = 2.0 * g;
  double total = 0.0;
  for (int n = -n_limit; n <= n_limit; ++n) total += static_cast<double>(usp_trace_moment(n, g)) * fhat(n / N) / N;
  return total;
}

Rational usp_one_level_exact(const std::function<Rational(const Rational&)>& fhat, int g) {
  if (g < 1) throw std::invalid_argument("g must be >= 1");
  Rational sum = 0;
  for (int m = 1; m <= g; ++m) sum += fhat(Rational(m, g));
  return fhat(Rational(0)) - sum / g;
}

Rational usp_one_level_fourier_exact(const std::function<Rational(const Rational&)>& fhat, int g, int n_limit) {
  if (g < 1) throw std::invalid_argument("g must be >= 1");
  Rational total = 0;
  for (int n = -n_limit; n <= n_limit; ++n) total += usp_trace_moment(n, g) * fhat(Rational(n, 2 * g)) / (2 * g);
  return total;
}

}  // namespace hyptrace
