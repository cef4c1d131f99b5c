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
#include <optional>
#include <string>
#include <vector>

#include "hyptrace/bigint.hpp"
#include "hyptrace/poly.hpp"

namespace hyptrace {

/// Moebius sum over monic A of degree alpha coprime to a fixed prime of degree n,
/// in closed form.
std::int64_t sigma(std::uint32_t q, int n, int alpha);

/// The same sum evaluated directly for the given prime.
std::int64_t sigma_direct(const Poly& prime, int alpha);

/// S(beta; n) = sum_{deg P = n} sum_{deg B = beta} (B/P) for beta = 0 .. beta_max.
struct STable {
  std::uint32_t q;
  int n;
  std::vector<BigInt> values;
};

/**
 * One pass over the primes of degree n. For each prime the symbol on monic
 * B of degree < n comes from its values on primes of degree < n through a
 * cached smallest-factor sieve; for beta >= n every residue class mod P is hit
 * q^{beta-n} times, so those rows are q^{beta-n} times the full residue sum.
 * Memoized per process.
 */
STable s_table(const Field& field, int n, int beta_max);

BigInt s_beta_n(const Field& field, int beta, int n);

/// (-1)^{((q-1)/2) beta n} sum_{deg P = n} A_P(beta), with A_P by direct summation.
BigInt s_beta_n_via_lfunctions(const Field& field, int beta, int n);

/// Plain double loop of Euclidean symbol evaluations; a test oracle.
BigInt s_beta_n_brute(const Field& field, int beta, int n);

struct DualityRow {
  std::string relation;  // "odd", "even", "boundary_odd", "boundary_even", "vanishing"
  int beta;
  BigInt lhs;
  BigInt rhs;  // both sides scaled to integers
};

struct DualityReport {
  std::uint32_t q;
  int n;
  std::vector<DualityRow> rows;
};

/// Checks every duality relation for the given n and the vanishing rows
/// beta = n, n+1, n+2. Throws IdentityFailure on the first violation.
DualityReport duality_check(const Field& field, int n);

struct BoundRow {
  int beta;
  BigInt s_value;
  double crude_ratio;                     // |S - eta_beta pi q^{beta/2}| / ((beta/n) q^{n/2+beta})
  std::optional<double> bootstrap_ratio;  // |S + eta_n pi q^{beta-n/2}| / q^n, odd beta
  bool warn;
};

struct BoundReport {
  std::uint32_t q;
  int n;
  double threshold;
  std::vector<BoundRow> rows;
};

/// Residual ratios for 1 <= beta < n. Ratios above the threshold set warn and
/// are logged; they never fail.
BoundReport bound_monitor(const Field& field, int n, double threshold = 10.0);

struct ChiSquareAverage {
  Rational value;     // fraction of Q in the ensemble with P not dividing Q
  Rational expected;  // |P| / (|P| + 1)
  double constant;    // |value - expected| q^{2g}
  std::uint64_t curves;
};

/// Exact ensemble average by enumeration of squarefree monic Q of degree 2g+1.
/// Throws BudgetExceeded when q^{2g+1} > budget.
ChiSquareAverage avg_chi_p_squared(const Poly& prime, int g, std::uint64_t budget = 50'000'000);

}  // namespace hyptrace
