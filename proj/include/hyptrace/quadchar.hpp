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
#include <vector>

#include "hyptrace/poly.hpp"

namespace hyptrace {

/// (f/P) for a prime P by Euler's criterion f^{(|P|-1)/2} mod P.
/// The caller guarantees that P is monic irreducible.
int legendre(const Poly& f, const Poly& prime);

/**
 * Residue symbol (a/m) = prod over primes P | m of (a/P)^{v_P(m)}, for any a and
 * monic m. Evaluated by Euclidean reduction with reciprocity; a non-monic
 * remainder with leading coefficient c contributes quad_char(c)^{deg m}.
 * (a/1) = +1.
 */
int residue_symbol(const Poly& a, const Poly& modulus);

/// (b/f) for monic b and monic f. Throws std::invalid_argument otherwise.
int jacobi(const Poly& b, const Poly& f);

/// Same symbol as a product of Euler evaluations over factorize(f).
int jacobi_by_factorization(const Poly& b, const Poly& f);

/// (-1)^{((q-1)/2) deg_a deg_b}.
inline int reciprocity_sign(std::uint32_t q, int deg_a, int deg_b) {
  return ((q - 1) / 2) % 2 == 1 && deg_a % 2 == 1 && deg_b % 2 == 1 ? -1 : 1;
}

struct ReciprocityResult {
  bool holds;
  int sign;
  bool degenerate;  // a and b share a factor, both symbols vanish
  int lhs;          // (a/b)
  int rhs;          // (b/a)
};

/// Checks (a/b) = sign * (b/a) with both symbols evaluated by factorization.
ReciprocityResult reciprocity_check(const Poly& a, const Poly& b);

namespace detail {

// (a/m) on raw coefficient vectors; m monic. Consumes its arguments.
int residue_symbol_raw(const Field& field, Poly::Coeffs a, Poly::Coeffs m);

}  // namespace detail

/**
 * Table of r -> (r/m) over every residue r mod a fixed monic m, indexed by the
 * base-q code of r. Lookups reduce the argument mod m first.
 */
class CharacterTable {
 public:
  explicit CharacterTable(const Poly& modulus);

  const Poly& modulus() const noexcept { return modulus_; }
  /// (r/m) for code(r) < q^{deg m}.
  int at(std::uint64_t code) const noexcept { return values_[code]; }
  /// (a/m) for any a.
  int operator()(const Poly& a) const;
  int lookup(const Poly::Coeffs& a, Poly::Coeffs& scratch) const;

 private:
  Poly modulus_;
  std::vector<std::int8_t> values_;
};

/**
 * chi_D(f) = (D/f) for monic f, with D monic and nonzero.
 *
 * With tabulate set the values come from (f mod D / D) and the reciprocity
 * sign; the table costs q^{deg D} symbol evaluations up front.
 */
class QuadraticCharacter {
 public:
  explicit QuadraticCharacter(Poly modulus, bool tabulate = false);

  const Poly& modulus() const noexcept { return modulus_; }
  bool tabulated() const noexcept { return table_.has_value(); }

  int operator()(const Poly& f) const;
  int of_monic(const Poly::Coeffs& f, Poly::Coeffs& scratch) const;

 private:
  Poly modulus_;
  std::optional<CharacterTable> table_;
};

}  // namespace hyptrace
