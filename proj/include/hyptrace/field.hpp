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
#include <utility>
#include <vector>

namespace hyptrace {

class Field;

/// A value in some F_q together with the field it belongs to.
class FieldElement {
 public:
  FieldElement(const Field& field, std::uint32_t code);

  const Field& field() const noexcept { return *field_; }
  std::uint32_t code() const noexcept { return code_; }
  bool is_zero() const noexcept { return code_ == 0; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b) noexcept {
    return a.field_ == b.field_ && a.code_ == b.code_;
  }

 private:
  const Field* field_;
  std::uint32_t code_;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& a);

/// Kronecker-style character of F_q: 0 at zero, +1 on nonzero squares, -1 otherwise.
int quad_char(const FieldElement& c);

/**
 * The finite field F_q with q = p^e, p an odd prime.
 *
 * Elements are addressed by an integer code in [0, q): the coefficient vector
 * over F_p of the element's representative modulo `modulus()`, read as base-p
 * digits with the constant term least significant. For prime fields the code is
 * the residue itself.
 *
 * Fields are interned by field_make() and never destroyed, so references and
 * pointers to them may be freely shared across threads.
 */
class Field {
 public:
  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  std::uint32_t p() const noexcept { return p_; }
  int e() const noexcept { return e_; }
  std::uint32_t q() const noexcept { return q_; }
  bool is_prime_field() const noexcept { return e_ == 1; }

  /// Monic irreducible of degree e over F_p, ascending coefficients. Empty when e == 1.
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    if (e_ == 1) {
      const std::uint32_t s = a + b;
      return s >= p_ ? s - p_ : s;
    }
    return add_ext(a, b);
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept {
    if (e_ == 1) return a >= b ? a - b : a + p_ - b;
    return sub_ext(a, b);
  }
  std::uint32_t neg(std::uint32_t a) const noexcept { return sub(0, a); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    if (e_ == 1) return static_cast<std::uint32_t>(std::uint64_t{a} * b % p_);
    return mul_ext(a, b);
  }
  /// Throws std::domain_error for a == 0.
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }
  std::uint32_t pow(std::uint32_t a, std::uint64_t k) const noexcept;

  /// c^((q-1)/2) as an integer in {-1, 0, +1}.
  int quad_char(std::uint32_t c) const noexcept;

  /// Image of an integer under Z -> F_p -> F_q.
  std::uint32_t from_integer(std::int64_t v) const noexcept;

  FieldElement element(std::uint32_t code) const;
  FieldElement zero() const { return element(0); }
  FieldElement one() const { return element(1); }

 private:
  friend const Field& field_make(std::uint32_t p, int e);

  Field(std::uint32_t p, int e, std::vector<std::uint32_t> modulus);

  std::uint32_t add_ext(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t sub_ext(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t mul_ext(std::uint32_t a, std::uint32_t b) const noexcept;

  std::uint32_t p_;
  int e_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  // Prime fields with small p: inverse and quadratic character tables.
  std::vector<std::uint32_t> inverse_;
  std::vector<std::int8_t> quad_;
  // Extension fields: discrete log / antilog against a primitive element.
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;
};

/**
 * Returns the interned field F_{p^e}.
 *
 * For e > 1 the modulus is the lexicographically smallest monic irreducible of
 * degree e over F_p, comparing coefficients from the constant term upwards.
 * Throws std::invalid_argument when p is not an odd prime, e < 1, or p^e
 * exceeds 2^24 for extension fields.
 */
const Field& field_make(std::uint32_t p, int e = 1);

/// Splits q into (p, e) with q = p^e, p an odd prime. Throws std::invalid_argument otherwise.
std::pair<std::uint32_t, int> split_prime_power(std::uint64_t q);

bool is_prime(std::uint64_t n) noexcept;

}  // namespace hyptrace
