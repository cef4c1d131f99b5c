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

#include "hyptrace/quadchar.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "hyptrace/arith.hpp"

namespace hyptrace {

namespace {

int quad_char_pow(const Field& F, std::uint32_t c, int exponent) {
  if (exponent % 2 == 0) return 1;
  return F.quad_char(c);
}

std::uint64_t code_of(std::uint32_t q, const Poly::Coeffs& a) {
  std::uint64_t code = 0;
  for (std::size_t i = a.size(); i-- > 0;) code = code * q + a[i];
  return code;
}

}  // namespace

namespace detail {

int residue_symbol_raw(const Field& F, Poly::Coeffs a, Poly::Coeffs m) {
  const bool odd_half = ((F.q() - 1) / 2) % 2 == 1;
  int sign = 1;
  for (;;) {
    if (m.size() == 1) return sign;
    rem_inplace(F, a, m, 1);
    if (a.empty()) return 0;
    const std::size_t dm = m.size() - 1;
    const std::size_t da = a.size() - 1;
    const std::uint32_t c = a.back();
    if (c != 1) {
      if (dm % 2 == 1 && F.quad_char(c) < 0) sign = -sign;
      const std::uint32_t ci = F.inv(c);
      for (auto& v : a) v = F.mul(v, ci);
    }
    if (odd_half && (da & dm & 1)) sign = -sign;
    std::swap(a, m);
  }
}

}  // namespace detail

int legendre(const Poly& f, const Poly& prime) {
  if (prime.degree() < 1 || !prime.is_monic()) throw std::invalid_argument("legendre needs a monic prime");
  const Field& F = prime.field();
  const std::uint64_t norm = prime.norm();
  const Poly r = pow_mod(f % prime, (norm - 1) / 2, prime);
  if (r.is_zero()) return 0;
  if (r.is_one()) return 1;
  if (r.degree() == 0 && r[0] == F.neg(1)) return -1;
  throw std::logic_error("Euler criterion produced a non-unit; modulus is not prime");
}

int residue_symbol(const Poly& a, const Poly& modulus) {
  if (!modulus.is_monic()) throw std::invalid_argument("residue symbol needs a monic modulus");
  if (&a.field() != &modulus.field()) throw std::invalid_argument("mixed fields");
  return detail::residue_symbol_raw(a.field(), PolyAccess::coeffs(a), PolyAccess::coeffs(modulus));
}

int jacobi(const Poly& b, const Poly& f) {
  if (!b.is_monic() || !f.is_monic()) throw std::invalid_argument("jacobi needs monic arguments");
  return residue_symbol(b, f);
}

int jacobi_by_factorization(const Poly& b, const Poly& f) {
  if (!b.is_monic() || !f.is_monic()) throw std::invalid_argument("jacobi needs monic arguments");
  int value = 1;
  for (const auto& [prime, mult] : factorize(f).factors) {
    const int l = legendre(b, prime);
    if (l == 0) return 0;
    if (mult % 2 == 1) value *= l;
  }
  return value;
}

ReciprocityResult reciprocity_check(const Poly& a, const Poly& b) {
  if (!a.is_monic() || !b.is_monic()) throw std::invalid_argument("reciprocity needs monic arguments");
  const int sign = reciprocity_sign(a.field().q(), a.degree(), b.degree());
  const int lhs = jacobi_by_factorization(a, b);
  const int rhs = jacobi_by_factorization(b, a);
  const bool degenerate = poly_gcd(a, b).degree() > 0;
  return {lhs == sign * rhs, sign, degenerate, lhs, rhs};
}

CharacterTable::CharacterTable(const Poly& modulus) : modulus_(modulus) {
  if (!modulus.is_monic()) throw std::invalid_argument("character table needs a monic modulus");
  const Field& F = modulus.field();
  const int k = modulus.degree();
  const std::uint64_t size = checked_pow(F.q(), static_cast<unsigned>(k));
  if (size > (std::uint64_t{1} << 28)) throw std::overflow_error("character table too large");
  values_.assign(size, 0);
  const auto& mc = PolyAccess::coeffs(modulus_);
  // Monic residues by Euclid, the rest by scaling with quad_char(c)^k.
  std::vector<int> unit(F.q(), 0);
  for (std::uint32_t c = 1; c < F.q(); ++c) unit[c] = quad_char_pow(F, c, k);
  for (int d = 0; d < k; ++d) {
    const std::uint64_t count = checked_pow(F.q(), static_cast<unsigned>(d));
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      const Poly m = Poly::monic_from_index(F, d, idx);
      const int v = detail::residue_symbol_raw(F, PolyAccess::coeffs(m), mc);
      if (v == 0) continue;
      Poly::Coeffs scaled = PolyAccess::coeffs(m);
      for (std::uint32_t c = 1; c < F.q(); ++c) {
        for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = F.mul(PolyAccess::coeffs(m)[i], c);
        values_[code_of(F.q(), scaled)] = static_cast<std::int8_t>(v * unit[c]);
      }
    }
  }
}

int CharacterTable::lookup(const Poly::Coeffs& a, Poly::Coeffs& scratch) const {
  const Field& F = modulus_.field();
  const auto& m = PolyAccess::coeffs(modulus_);
  const std::size_t k = m.size() - 1;
  if (F.is_prime_field() && a.size() <= 64 && F.p() < (1u << 12)) {
    // Deferred reduction: entries stay below 64 p^2 < 2^32, so one
    // multiply-high remainder per digit suffices.
    const std::uint32_t p = F.p();
    const std::uint64_t magic = ~std::uint64_t{0} / p + 1;
    auto mod = [&](std::uint32_t x) {
      return static_cast<std::uint32_t>((static_cast<unsigned __int128>(magic * x) * p) >> 64);
    };
    std::uint32_t buf[64];
    for (std::size_t i = 0; i < a.size(); ++i) buf[i] = a[i];
    for (std::size_t top = a.size(); top-- > k;) {
      const std::uint32_t c = mod(buf[top]);
      if (c == 0) continue;
      const std::uint32_t negc = p - c;
      const std::size_t shift = top - k;
      for (std::size_t j = 0; j < k; ++j) buf[shift + j] += negc * m[j];
    }
    std::uint64_t code = 0;
    for (std::size_t i = std::min(k, a.size()); i-- > 0;) code = code * p + mod(buf[i]);
    return values_[code];
  }
  scratch = a;
  detail::rem_inplace(modulus_.field(), scratch, PolyAccess::coeffs(modulus_), 1);
  return values_[code_of(modulus_.field().q(), scratch)];
}

int CharacterTable::operator()(const Poly& a) const {
  Poly::Coeffs scratch;
  return lookup(PolyAccess::coeffs(a), scratch);
}

QuadraticCharacter::QuadraticCharacter(Poly modulus, bool tabulate) : modulus_(std::move(modulus)) {
  if (!modulus_.is_monic()) throw std::invalid_argument("quadratic character needs a monic modulus");
  if (tabulate) table_.emplace(modulus_);
}

int QuadraticCharacter::of_monic(const Poly::Coeffs& f, Poly::Coeffs& scratch) const {
  const Field& F = modulus_.field();
  if (table_) {
    const int deg_f = static_cast<int>(f.size()) - 1;
    return reciprocity_sign(F.q(), modulus_.degree(), deg_f) * table_->lookup(f, scratch);
  }
  return detail::residue_symbol_raw(F, PolyAccess::coeffs(modulus_), f);
}

int QuadraticCharacter::operator()(const Poly& f) const {
  if (!f.is_monic()) throw std::invalid_argument("chi_D is evaluated on monic polynomials");
  Poly::Coeffs scratch;
  return of_monic(PolyAccess::coeffs(f), scratch);
}

}  // namespace hyptrace
