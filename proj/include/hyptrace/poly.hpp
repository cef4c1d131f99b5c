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
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>

#include <boost/container/small_vector.hpp>

#include "hyptrace/field.hpp"

namespace hyptrace {

/**
 * Polynomial over F_q with ascending coefficients stored as field codes.
 *
 * The coefficient vector never has a zero leading entry; the zero polynomial
 * has no coefficients and degree kZeroDegree. Values are immutable: every
 * operation returns a new polynomial.
 */
class Poly {
 public:
  using Coeffs = boost::container::small_vector<std::uint32_t, 16>;

  /// Degree reported for the zero polynomial (stands in for -infinity).
  static constexpr int kZeroDegree = -1;

  explicit Poly(const Field& field) noexcept : field_(&field) {}
  Poly(const Field& field, Coeffs coeffs);
  Poly(const Field& field, std::initializer_list<std::uint32_t> coeffs);
  Poly(const Field& field, std::span<const std::uint32_t> coeffs);

  static Poly constant(const Field& field, std::uint32_t c);
  static Poly monomial(const Field& field, int degree, std::uint32_t c = 1);
  static Poly x(const Field& field) { return monomial(field, 1); }

  /// The index-th monic polynomial of the given degree: lower coefficients are
  /// the base-q digits of index, constant term least significant.
  static Poly monic_from_index(const Field& field, int degree, std::uint64_t index);
  /// Polynomial whose coefficients are the base-q digits of code (any degree).
  static Poly from_code(const Field& field, std::uint64_t code);

  /// Inverse of monic_from_index. Requires a monic polynomial.
  std::uint64_t monic_index() const;
  /// Inverse of from_code.
  std::uint64_t code() const;

  const Field& field() const noexcept { return *field_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
  bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }

  /// Coefficient code of x^i; zero beyond the degree.
  std::uint32_t operator[](int i) const noexcept {
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0;
  }
  FieldElement coefficient(int i) const { return field_->element((*this)[i]); }
  std::uint32_t leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
  std::span<const std::uint32_t> coeffs() const noexcept { return {c_.data(), c_.size()}; }

  /// |f| = q^deg f. Throws std::overflow_error past 2^63, std::domain_error for zero.
  std::uint64_t norm() const;

  std::uint32_t evaluate(std::uint32_t x) const noexcept;
  Poly monic() const;
  Poly scaled(std::uint32_t c) const;
  Poly derivative() const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;

  friend bool operator==(const Poly& a, const Poly& b) noexcept {
    return a.field_ == b.field_ && a.c_ == b.c_;
  }

 private:
  friend struct PolyAccess;
  void normalize() noexcept;

  const Field* field_;
  Coeffs c_;
};

struct DivMod {
  Poly quotient;
  Poly remainder;
};

/// f = quotient * g + remainder with deg remainder < deg g. Throws std::domain_error for g == 0.
DivMod poly_divmod(const Poly& f, const Poly& g);
Poly operator/(const Poly& f, const Poly& g);
Poly operator%(const Poly& f, const Poly& g);

/// Monic gcd. Throws std::domain_error when both arguments are zero.
Poly poly_gcd(const Poly& f, const Poly& g);

Poly mul_mod(const Poly& a, const Poly& b, const Poly& modulus);
Poly pow_mod(const Poly& base, std::uint64_t exponent, const Poly& modulus);

std::string to_string(const Poly& f);
std::ostream& operator<<(std::ostream& os, const Poly& f);

/// Parses ascending comma-separated integer coefficients, e.g. "0,1,0,1" for x^3 + x.
Poly parse_poly(const Field& field, const std::string& text);

namespace detail {

// In-place kernels shared by the hot loops. All operate on trimmed vectors.
void trim(Poly::Coeffs& a) noexcept;
// a <- a mod m, m nonzero with leading coefficient lead_inv^{-1}.
void rem_inplace(const Field& f, Poly::Coeffs& a, const Poly::Coeffs& m, std::uint32_t lead_inv) noexcept;
void mul_into(const Field& f, const Poly::Coeffs& a, const Poly::Coeffs& b, Poly::Coeffs& out);

}  // namespace detail

/// Grants the in-place kernels access to the coefficient storage.
struct PolyAccess {
  static const Poly::Coeffs& coeffs(const Poly& p) noexcept { return p.c_; }
  static Poly adopt(const Field& f, Poly::Coeffs c) noexcept {
    Poly r(f);
    r.c_ = std::move(c);
    return r;
  }
};

}  // namespace hyptrace
