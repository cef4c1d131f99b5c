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
#include <vector>

#include "json.hpp"

#include "hyptrace/bigint.hpp"
#include "hyptrace/poly.hpp"
#include "hyptrace/quadchar.hpp"

namespace hyptrace {

/// Completed L*(u, chi_D) = sum_{b <= 2 delta} coeffs[b] u^b.
struct LPolynomial {
  Poly D;
  std::uint32_t q;
  int lambda;  // 1 iff deg D is even
  int delta;   // 2 delta = deg D - 1 - lambda
  std::vector<BigInt> coeffs;
};

/// s[n] = sum of n-th powers of the inverse roots of L*, s[0] = 2 delta.
struct FrobeniusData {
  LPolynomial L;
  std::vector<BigInt> s;
};

/// A_D(b) = sum over monic B of degree b of chi_D(B), for b < deg D, by direct
/// summation. D must be monic of positive degree and not a perfect square.
std::vector<std::int64_t> a_coeffs(const Poly& D);

/// A_D(b) for a single b >= 0 (zero for b >= deg D when D is not a square).
std::int64_t a_coeff(const Poly& D, int beta);

/// Divides out the trivial zero for even deg D and validates the leading
/// coefficient and the functional equation. Throws IdentityFailure when the
/// division is inexact or an invariant fails.
LPolynomial complete(const std::vector<std::int64_t>& raw, const Poly& D);

/// L* for squarefree D: every A_D(b) by direct summation, then complete().
LPolynomial l_function(const Poly& D);

/// L* for squarefree D from the coefficients of degree <= delta only, the upper
/// half filled in by the functional equation. Roughly q^{deg D / 2} symbols.
LPolynomial l_function_half(const Poly& D);

/// Newton's identities up to n_max. Throws IdentityFailure if some s_n breaks
/// the Weil bound s_n^2 <= (2 delta)^2 q^n.
FrobeniusData power_sums(const LPolynomial& L, int n_max);

/// Per-degree prime data: chi_sum[d] = sum_{deg P = d} chi(P) and
/// coprime[d] = #{P : deg P = d, chi(P) != 0}. Index 0 unused.
struct PrimeCharacterSums {
  std::vector<std::int64_t> chi_sum;
  std::vector<std::int64_t> coprime;
};

PrimeCharacterSums prime_character_sums(const QuadraticCharacter& chi, int n_max);

/// lambda + sum_{deg f = n} Lambda(f) chi_D(f) assembled from per-degree prime sums.
BigInt explicit_formula_value(const PrimeCharacterSums& sums, int lambda, int n);

/// c_n = lambda + sum_{deg f = n} Lambda(f) chi_D(f). Equals -s_n.
BigInt explicit_formula_sum(const Poly& D, int n);

/// c_1 .. c_{n_max}; index 0 unused.
std::vector<BigInt> explicit_formula_sums(const Poly& D, int n_max);

/// Eigenphases theta_j in (-pi, pi] with zeros u_j = q^{-1/2} e^{-i theta_j},
/// ascending, with multiplicity. Throws std::runtime_error if a root misses
/// |u| sqrt(q) = 1 by more than 1e-9 relative.
std::vector<double> eigenangles(const LPolynomial& L);

/// Number of points on y^2 = Q(x) over F_{q^n} including the point at
/// infinity (deg Q odd). Throws BudgetExceeded when q^n > cap.
std::uint64_t point_count(const Poly& Q, int n, std::uint64_t cap = std::uint64_t{1} << 22);

/// {"q", "D", "lambda", "delta", "Lstar", "s"}; s holds s_1 .. s_{n_max}.
nlohmann::json to_json(const FrobeniusData& data);

}  // namespace hyptrace
