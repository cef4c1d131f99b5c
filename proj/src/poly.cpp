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

#include "hyptrace/poly.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hyptrace/bigint.hpp"

namespace hyptrace {

namespace detail {

void trim(Poly::Coeffs& a) noexcept {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

void rem_inplace(const Field& f, Poly::Coeffs& a, const Poly::Coeffs& m, std::uint32_t lead_inv) noexcept {
  const std::size_t dm = m.size() - 1;
  if (f.is_prime_field()) {
    const std::uint64_t p = f.p();
    while (a.size() > dm) {
      const std::size_t shift = a.size() - 1 - dm;
      const std::uint64_t c = std::uint64_t{a.back()} * lead_inv % p;
      if (c != 0) {
        const std::uint64_t negc = p - c;
        for (std::size_t j = 0; j < dm; ++j) {
          std::uint32_t& slot = a[shift + j];
          slot = static_cast<std::uint32_t>((slot + negc * m[j]) % p);
        }
      }
      a.pop_back();
      trim(a);
    }
    return;
  }
  while (a.size() > dm) {
    const std::size_t shift = a.size() - 1 - dm;
    const std::uint32_t c = f.mul(a.back(), lead_inv);
    for (std::size_t j = 0; j < dm; ++j) a[shift + j] = f.sub(a[shift + j], f.mul(c, m[j]));
    a.pop_back();
    trim(a);
  }
}

void mul_into(const Field& f, const Poly::Coeffs& a, const Poly::Coeffs& b, Poly::Coeffs& out) {
  out.clear();
  if (a.empty() || b.empty()) return;
  out.assign(a.size() + b.size() - 1, 0);
  if (f.is_prime_field()) {
    const std::uint64_t p = f.p();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j)
        out[i + j] = static_cast<std::uint32_t>((out[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    }
  } else {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
  }
  trim(out);
}

}  // namespace detail

Poly::Poly(const Field& field, Coeffs coeffs) : field_(&field), c_(std::move(coeffs)) {
  for (auto c : c_)
    if (c >= field.q()) throw std::out_of_range("polynomial coefficient out of field range");
  normalize();
}

Poly::Poly(const Field& field, std::initializer_list<std::uint32_t> coeffs)
    : Poly(field, Coeffs(coeffs.begin(), coeffs.end())) {}

Poly::Poly(const Field& field, std::span<const std::uint32_t> coeffs)
    : Poly(field, Coeffs(coeffs.begin(), coeffs.end())) {}

void Poly::normalize() noexcept { detail::trim(c_); }

Poly Poly::constant(const Field& field, std::uint32_t c) { return Poly(field, {c}); }

Poly Poly::monomial(const Field& field, int degree, std::uint32_t c) {
  if (degree < 0) throw std::invalid_argument("negative monomial degree");
  Coeffs v(degree + 1, 0);
  v[degree] = c;
  return Poly(field, std::move(v));
}

Poly Poly::monic_from_index(const Field& field, int degree, std::uint64_t index) {
  if (degree < 0) throw std::invalid_argument("negative degree");
  Coeffs v(degree + 1, 0);
  const std::uint64_t q = field.q();
  for (int i = 0; i < degree; ++i) {
    v[i] = static_cast<std::uint32_t>(index % q);
    index /= q;
  }
  if (index != 0) throw std::out_of_range("monic index out of range for degree");
  v[degree] = 1;
  return PolyAccess::adopt(field, std::move(v));
}

Poly Poly::from_code(const Field& field, std::uint64_t code) {
  Coeffs v;
  const std::uint64_t q = field.q();
  while (code) {
    v.push_back(static_cast<std::uint32_t>(code % q));
    code /= q;
  }
  return PolyAccess::adopt(field, std::move(v));
}

std::uint64_t Poly::monic_index() const {
  if (!is_monic()) throw std::invalid_argument("monic_index of non-monic polynomial");
  std::uint64_t index = 0;
  const std::uint64_t q = field_->q();
  for (int i = degree() - 1; i >= 0; --i) index = index * q + c_[i];
  return index;
}

std::uint64_t Poly::code() const {
  std::uint64_t code = 0;
  const std::uint64_t q = field_->q();
  for (int i = degree(); i >= 0; --i) code = code * q + c_[i];
  return code;
}

std::uint64_t Poly::norm() const {
  if (is_zero()) throw std::domain_error("norm of the zero polynomial");
  return checked_pow(field_->q(), static_cast<unsigned>(degree()));
}

std::uint32_t Poly::evaluate(std::uint32_t x) const noexcept {
  std::uint32_t acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = field_->add(field_->mul(acc, x), *it);
  return acc;
}

Poly Poly::monic() const {
  if (is_zero()) throw std::domain_error("monic of the zero polynomial");
  return scaled(field_->inv(leading()));
}

Poly Poly::scaled(std::uint32_t c) const {
  Coeffs v(c_);
  for (auto& x : v) x = field_->mul(x, c);
  return Poly(*field_, std::move(v));
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly(*field_);
  Coeffs v(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i)
    v[i - 1] = field_->mul(c_[i], field_->from_integer(static_cast<std::int64_t>(i)));
  return Poly(*field_, std::move(v));
}

namespace {
const Field& same_field(const Poly& a, const Poly& b) {
  if (&a.field() != &b.field()) throw std::invalid_argument("polynomials over different fields");
  return a.field();
}
}  // namespace

Poly operator+(const Poly& a, const Poly& b) {
  const Field& f = same_field(a, b);
  Poly::Coeffs v(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.add(a[static_cast<int>(i)], b[static_cast<int>(i)]);
  return Poly(f, std::move(v));
}

Poly operator-(const Poly& a, const Poly& b) {
  const Field& f = same_field(a, b);
  Poly::Coeffs v(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f.sub(a[static_cast<int>(i)], b[static_cast<int>(i)]);
  return Poly(f, std::move(v));
}

Poly operator*(const Poly& a, const Poly& b) {
  const Field& f = same_field(a, b);
  Poly::Coeffs out;
  detail::mul_into(f, a.c_, b.c_, out);
  return PolyAccess::adopt(f, std::move(out));
}

Poly Poly::operator-() const {
  Coeffs v(c_);
  for (auto& x : v) x = field_->neg(x);
  return PolyAccess::adopt(*field_, std::move(v));
}

DivMod poly_divmod(const Poly& f, const Poly& g) {
  const Field& F = same_field(f, g);
  if (g.is_zero()) throw std::domain_error("division by the zero polynomial");
  const auto& gc = PolyAccess::coeffs(g);
  const std::uint32_t lead_inv = F.inv(g.leading());
  Poly::Coeffs r = PolyAccess::coeffs(f);
  const int dg = g.degree();
  if (f.degree() < dg) return {Poly(F), f};
  Poly::Coeffs quot(f.degree() - dg + 1, 0);
  while (static_cast<int>(r.size()) - 1 >= dg) {
    const int shift = static_cast<int>(r.size()) - 1 - dg;
    const std::uint32_t c = F.mul(r.back(), lead_inv);
    quot[shift] = c;
    for (int j = 0; j < dg; ++j) r[shift + j] = F.sub(r[shift + j], F.mul(c, gc[j]));
    r.pop_back();
    detail::trim(r);
  }
  return {Poly(F, std::move(quot)), PolyAccess::adopt(F, std::move(r))};
}

Poly operator/(const Poly& f, const Poly& g) { return poly_divmod(f, g).quotient; }

Poly operator%(const Poly& f, const Poly& g) {
  const Field& F = same_field(f, g);
  if (g.is_zero()) throw std::domain_error("division by the zero polynomial");
  Poly::Coeffs r = PolyAccess::coeffs(f);
  detail::rem_inplace(F, r, PolyAccess::coeffs(g), F.inv(g.leading()));
  return PolyAccess::adopt(F, std::move(r));
}

Poly poly_gcd(const Poly& f, const Poly& g) {
  const Field& F = same_field(f, g);
  if (f.is_zero() && g.is_zero()) throw std::domain_error("gcd(0, 0) is undefined");
  Poly::Coeffs a = PolyAccess::coeffs(f);
  Poly::Coeffs b = PolyAccess::coeffs(g);
  while (!b.empty()) {
    detail::rem_inplace(F, a, b, F.inv(b.back()));
    std::swap(a, b);
  }
  return PolyAccess::adopt(F, std::move(a)).monic();
}

Poly mul_mod(const Poly& a, const Poly& b, const Poly& modulus) {
  const Field& F = same_field(a, b);
  Poly::Coeffs out;
  detail::mul_into(F, PolyAccess::coeffs(a), PolyAccess::coeffs(b), out);
  detail::rem_inplace(F, out, PolyAccess::coeffs(modulus), F.inv(modulus.leading()));
  return PolyAccess::adopt(F, std::move(out));
}

Poly pow_mod(const Poly& base, std::uint64_t exponent, const Poly& modulus) {
  const Field& F = same_field(base, modulus);
  if (modulus.is_zero()) throw std::domain_error("pow_mod with zero modulus");
  const auto& m = PolyAccess::coeffs(modulus);
  const std::uint32_t lead_inv = F.inv(modulus.leading());
  Poly::Coeffs result{1};
  detail::rem_inplace(F, result, m, lead_inv);
  Poly::Coeffs b = PolyAccess::coeffs(base);
  detail::rem_inplace(F, b, m, lead_inv);
  Poly::Coeffs tmp;
  while (exponent) {
    if (exponent & 1) {
      detail::mul_into(F, result, b, tmp);
      detail::rem_inplace(F, tmp, m, lead_inv);
      std::swap(result, tmp);
    }
    exponent >>= 1;
    if (exponent) {
      detail::mul_into(F, b, b, tmp);
      detail::rem_inplace(F, tmp, m, lead_inv);
      std::swap(b, tmp);
    }
  }
  return PolyAccess::adopt(F, std::move(result));
}

std::string to_string(const Poly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = f.degree(); i >= 0; --i) {
    const std::uint32_t c = f[i];
    if (c == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << c;
      continue;
    }
    if (c != 1) os << c << '*';
    os << 'x';
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poly& f) { return os << to_string(f); }

Poly parse_poly(const Field& field, const std::string& text) {
  Poly::Coeffs v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad polynomial coefficient '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw std::invalid_argument("bad polynomial coefficient '" + item + "'");
    if (field.is_prime_field()) {
      v.push_back(field.from_integer(value));
    } else {
      if (value < 0 || value >= static_cast<long long>(field.q()))
        throw std::invalid_argument("coefficient code out of range: " + item);
      v.push_back(static_cast<std::uint32_t>(value));
    }
  }
  return Poly(field, std::move(v));
}

}  // namespace hyptrace
