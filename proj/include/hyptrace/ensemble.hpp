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
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hyptrace/bigint.hpp"
#include "hyptrace/lfunction.hpp"
#include "hyptrace/poly.hpp"

namespace hyptrace {

enum class EnsembleMode { exhaustive, sample };

struct EnsembleSpec {
  const Field* field;
  int g;
  EnsembleMode mode = EnsembleMode::exhaustive;
  std::uint64_t sample_count = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = 10'000'000;  // curves
};

/// #H_{2g+1} = (q - 1) q^{2g}.
std::uint64_t ensemble_size(std::uint32_t q, int g);

/// Checks the spec; throws std::invalid_argument or BudgetExceeded.
void validate(const EnsembleSpec& spec);

/// Curves handed out in blocks of this many so that sampling streams and
/// partial sums depend only on the block index.
inline constexpr std::uint64_t kCurveBlock = 4096;

std::uint64_t curve_block_count(const EnsembleSpec& spec);

/// The curves of one block, in a fixed order. Exhaustive blocks cover monic
/// indices [b * kCurveBlock, (b + 1) * kCurveBlock) of degree 2g+1 and keep the
/// squarefree ones; sample blocks draw from a mt19937_64 seeded by
/// (seed, block) until the block quota of squarefree draws is met.
std::vector<Poly> curve_block(const EnsembleSpec& spec, std::uint64_t block);

/// Every curve of the spec, block by block.
void for_each_curve(const EnsembleSpec& spec, const std::function<void(const Poly&)>& visit);

/// Per-curve quantities. Decomposition parts are q^{n/2} times the prime,
/// prime-square and higher odd prime power contributions to tr Theta^n.
struct CurveAnalysis {
  FrobeniusData frob;
  std::vector<BigInt> explicit_sum;  // lambda + sum Lambda chi, index n
  std::vector<std::int64_t> prime_chi_sum;
  std::vector<BigInt> prime_part;
  std::vector<BigInt> square_part;
  std::vector<BigInt> higher_part;
};

enum class LRoute { full, half };

/// Full route: every A_Q(beta) by direct summation and the functional equation
/// checked. Half route: beta <= delta only. Both check s_n = -explicit sum and
/// the decomposition for n <= n_max; failures throw IdentityFailure.
CurveAnalysis analyze_curve(const Poly& Q, int n_max, LRoute route = LRoute::full);

struct EnsembleAccumulator {
  std::uint32_t q = 0;
  int g = 0;
  int n_max = 0;
  bool exhaustive = true;
  std::uint64_t curve_count = 0;
  std::vector<BigInt> sum_s;     // sum_Q s_n(Q)
  std::vector<BigInt> sum_s_sq;  // sum_Q s_n(Q)^2
  std::map<std::pair<int, int>, BigInt> pair_sums;
  std::vector<BigInt> prime_part;
  std::vector<BigInt> square_part;
  std::vector<BigInt> higher_part;
  std::vector<BigInt> prime_chi_sum;  // sum_Q sum_{deg P = n} chi_Q(P)

  EnsembleAccumulator() = default;
  EnsembleAccumulator(std::uint32_t q, int g, int n_max, const std::vector<std::pair<int, int>>& pairs);

  void add(const CurveAnalysis& curve);
  void merge(const EnsembleAccumulator& other);

  /// q^{n/2} <tr Theta^n> = (sum s_n) / count, exact.
  Rational scaled_average(int n) const;
  double average_trace(int n) const;
  /// Sample standard error of <tr Theta^n>.
  double standard_error(int n) const;
  double pair_average(int m, int n) const;
};

/// Exact sums over the spec. Pairs are (m, n) with 1 <= m <= n <= n_max.
/// Exhaustive runs also check the curve count against (q - 1) q^{2g}.
EnsembleAccumulator accumulate(const EnsembleSpec& spec, int n_max, const std::vector<std::pair<int, int>>& pairs = {},
                               unsigned threads = 1);

struct PrimeIdentityResult {
  int n;
  BigInt enumerated;  // sum_Q sum_{deg P = n} chi_Q(P)
  BigInt formula;     // sum_{beta + 2 alpha = 2g+1} sigma_n(alpha) S(beta; n)
  std::optional<BigInt> two_term;  // S(2g+1; n) - q S(2g-1; n), n > g
  Rational prime_average_scaled;   // q^{n/2} <P_n>
};

/// Exact equality of the enumerated prime part with the Moebius / double
/// character sum formula. Needs an exhaustive accumulator. Throws IdentityFailure.
PrimeIdentityResult avg_prime_identity_check(const EnsembleAccumulator& acc, const Field& field, int n);

struct Prediction {
  int n;
  Rational main_term;
  Rational correction;
  double error_scale;

  Rational total() const { return main_term + correction; }
};

Prediction trace_prediction(std::uint32_t q, int n, int g);

/// Asymptotic value of <tr Theta^m tr Theta^n> by the case table; nullopt
/// outside every case (including m + n >= 4g).
std::optional<Rational> pair_prediction(std::uint32_t q, int m, int n, int g);

struct ReportRow {
  int n;
  BigInt numerator;  // sum_Q s_n
  double average;
  double std_error;  // sample mode only, else 0
  Rational prediction;
  std::int64_t usp_moment;
  double residual;
  double error_scale;
  double ratio;
  BigInt prime_part;
  BigInt square_part;
  BigInt higher_part;
};

struct PairReportRow {
  int m;
  int n;
  BigInt numerator;  // sum_Q s_m s_n
  double average;
  std::optional<Rational> prediction;
  std::int64_t usp_moment;
  std::optional<double> residual;
};

struct EnsembleReport {
  std::uint32_t q;
  int g;
  bool exhaustive;
  std::uint64_t curve_count;
  std::vector<ReportRow> rows;
  std::vector<PairReportRow> pair_rows;
};

/// Rows for n = 1 .. n_max and every accumulated pair. Ratios above
/// warn_threshold are logged as warnings.
EnsembleReport report(const EnsembleAccumulator& acc, double warn_threshold = 10.0);

}  // namespace hyptrace
