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

#include "hyptrace/field.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>

namespace hyptrace {

namespace {

constexpr std::uint32_t kMaxExtensionOrder = 1u << 24;
constexpr std::uint32_t kSmallPrimeTable = 1u << 16;

using Digits = std::vector<std::uint32_t>;

Digits to_digits(std::uint32_t code, std::uint32_t p, int e) {
  Digits d(e);
  for (int i = 0; i < e; ++i) {
    d[i] = code % p;
    code /= p;
  }
  return d;
}

std::uint32_t from_digits(const Digits& d, std::uint32_t p) {
  std::uint32_t code = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it) code = code * p + *it;
  return code;
}

// Remainder of a modulo monic m over F_p, both ascending.
Digits rem_monic(Digits a, const Digits& m, std::uint32_t p) {
  const std::size_t dm = m.size() - 1;
  for (std::size_t i = a.size(); i-- > dm;) {
    const std::uint64_t c = a[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dm; ++j) {
      const std::uint64_t t = c * m[j] % p;
      std::uint32_t& slot = a[i - dm + j];
      slot = static_cast<std::uint32_t>((slot + p - t) % p);
    }
  }
  a.resize(std::min(a.size(), dm));
  return a;
}

bool divides_monic(const Digits& m, const Digits& f, std::uint32_t p) {
  const Digits r = rem_monic(f, m, p);
  for (auto c : r)
    if (c != 0) return false;
  return true;
}

// Trial division by every monic polynomial of degree 1..deg/2.
bool is_irreducible_small(const Digits& f, std::uint32_t p) {
  const int n = static_cast<int>(f.size()) - 1;
  for (int d = 1; 2 * d <= n; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    Digits m(d + 1);
    m[d] = 1;
    for (std::uint64_t k = 0; k < count; ++k) {
      std::uint64_t t = k;
      for (int i = 0; i < d; ++i) {
        m[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      if (divides_monic(m, f, p)) return false;
    }
  }
  return n >= 1;
}

Digits smallest_irreducible(std::uint32_t p, int e) {
  std::uint64_t count = 1;
  for (int i = 0; i < e; ++i) count *= p;
  Digits f(e + 1);
  f[e] = 1;
  for (std::uint64_t t = 0; t < count; ++t) {
    // Constant term is the most significant digit of t.
    std::uint64_t r = t;
    for (int i = e - 1; i >= 0; --i) {
      f[i] = static_cast<std::uint32_t>(r % p);
      r /= p;
    }
    if (is_irreducible_small(f, p)) return f;
  }
  throw std::logic_error("no irreducible polynomial of degree " + std::to_string(e));
}

std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, std::uint32_t p, int e, const Digits& m) {
  const Digits da = to_digits(a, p, e);
  const Digits db = to_digits(b, p, e);
  Digits prod(2 * e - 1, 0);
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < e; ++j)
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{da[i]} * db[j]) % p);
  Digits r = rem_monic(std::move(prod), m, p);
  r.resize(e, 0);
  return from_digits(r, p);
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::pair<std::uint32_t, int> split_prime_power(std::uint64_t q) {
  if (q < 3 || q % 2 == 0) throw std::invalid_argument("odd q required, got " + std::to_string(q));
  std::uint64_t p = 3;
  while (q % p != 0) p += 2;
  if (!is_prime(p)) throw std::invalid_argument("q is not a prime power");
  int e = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  if (r != 1) throw std::invalid_argument("q = " + std::to_string(q) + " is not a prime power");
  return {static_cast<std::uint32_t>(p), e};
}

Field::Field(std::uint32_t p, int e, std::vector<std::uint32_t> modulus)
    : p_(p), e_(e), q_(1), modulus_(std::move(modulus)) {
  for (int i = 0; i < e; ++i) q_ *= p;
  if (e_ == 1) {
    if (p_ <= kSmallPrimeTable) {
      inverse_.assign(p_, 0);
      for (std::uint32_t a = 1; a < p_; ++a)
        inverse_[a] = pow(a, p_ - 2);
      quad_.assign(p_, -1);
      quad_[0] = 0;
      for (std::uint64_t a = 1; a < p_; ++a) quad_[a * a % p_] = 1;
    }
    return;
  }
  // Find a primitive element, then tabulate its powers.
  const auto factors = prime_factors(q_ - 1);
  auto slow_pow = [&](std::uint32_t a, std::uint64_t k) {
    std::uint32_t r = 1;
    while (k) {
      if (k & 1) r = slow_mul(r, a, p_, e_, modulus_);
      a = slow_mul(a, a, p_, e_, modulus_);
      k >>= 1;
    }
    return r;
  };
  std::uint32_t gen = 0;
  for (std::uint32_t c = 2; c < q_ && gen == 0; ++c) {
    bool primitive = true;
    for (auto r : factors)
      if (slow_pow(c, (q_ - 1) / r) == 1) {
        primitive = false;
        break;
      }
    if (primitive) gen = c;
  }
  if (gen == 0) throw std::logic_error("no primitive element found");
  exp_.assign(2 * (q_ - 1), 0);
  log_.assign(q_, 0);
  std::uint32_t x = 1;
  for (std::uint32_t k = 0; k < q_ - 1; ++k) {
    exp_[k] = x;
    exp_[k + q_ - 1] = x;
    log_[x] = k;
    x = slow_mul(x, gen, p_, e_, modulus_);
  }
}

std::uint32_t Field::add_ext(std::uint32_t a, std::uint32_t b) const noexcept {
  std::uint32_t r = 0, scale = 1;
  for (int i = 0; i < e_; ++i) {
    std::uint32_t s = a % p_ + b % p_;
    if (s >= p_) s -= p_;
    r += s * scale;
    scale *= p_;
    a /= p_;
    b /= p_;
  }
  return r;
}

std::uint32_t Field::sub_ext(std::uint32_t a, std::uint32_t b) const noexcept {
  std::uint32_t r = 0, scale = 1;
  for (int i = 0; i < e_; ++i) {
    const std::uint32_t da = a % p_, db = b % p_;
    r += (da >= db ? da - db : da + p_ - db) * scale;
    scale *= p_;
    a /= p_;
    b /= p_;
  }
  return r;
}

std::uint32_t Field::mul_ext(std::uint32_t a, std::uint32_t b) const noexcept {
  if (a == 0 || b == 0) return 0;
  return exp_[log_[a] + log_[b]];
}

std::uint32_t Field::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("division by zero in F_" + std::to_string(q_));
  if (e_ == 1) {
    if (!inverse_.empty()) return inverse_[a];
    return pow(a, p_ - 2);
  }
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

std::uint32_t Field::pow(std::uint32_t a, std::uint64_t k) const noexcept {
  if (k == 0) return 1;
  if (a == 0) return 0;
  if (e_ > 1) return exp_[static_cast<std::uint64_t>(log_[a]) * (k % (q_ - 1)) % (q_ - 1)];
  std::uint32_t r = 1;
  while (k) {
    if (k & 1) r = mul(r, a);
    a = mul(a, a);
    k >>= 1;
  }
  return r;
}

int Field::quad_char(std::uint32_t c) const noexcept {
  if (c == 0) return 0;
  if (e_ > 1) return (log_[c] & 1u) ? -1 : 1;
  if (!quad_.empty()) return quad_[c];
  return pow(c, (p_ - 1) / 2) == 1 ? 1 : -1;
}

std::uint32_t Field::from_integer(std::int64_t v) const noexcept {
  const std::int64_t p = p_;
  return static_cast<std::uint32_t>(((v % p) + p) % p);
}

FieldElement Field::element(std::uint32_t code) const {
  if (code >= q_) throw std::out_of_range("field element code out of range");
  return FieldElement(*this, code);
}

const Field& field_make(std::uint32_t p, int e) {
  if (p % 2 == 0 || !is_prime(p)) throw std::invalid_argument("odd prime characteristic required, got " + std::to_string(p));
  if (e < 1) throw std::invalid_argument("extension degree must be >= 1");
  std::uint64_t q = 1;
  for (int i = 0; i < e; ++i) {
    q *= p;
    if (q > (e == 1 ? (1ull << 31) : kMaxExtensionOrder))
      throw std::invalid_argument("field order too large for this implementation");
  }

  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, int>, std::unique_ptr<Field>> registry;

  std::lock_guard lock(mutex);
  auto& slot = registry[{p, e}];
  if (!slot) {
    std::vector<std::uint32_t> modulus;
    if (e > 1) modulus = smallest_irreducible(p, e);
    slot.reset(new Field(p, e, std::move(modulus)));
  }
  return *slot;
}

FieldElement::FieldElement(const Field& field, std::uint32_t code) : field_(&field), code_(code) {}

namespace {
const Field& common_field(const FieldElement& a, const FieldElement& b) {
  if (&a.field() != &b.field()) throw std::invalid_argument("field elements from different fields");
  return a.field();
}
}  // namespace

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  const Field& f = common_field(a, b);
  return FieldElement(f, f.add(a.code(), b.code()));
}
FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  const Field& f = common_field(a, b);
  return FieldElement(f, f.sub(a.code(), b.code()));
}
FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  const Field& f = common_field(a, b);
  return FieldElement(f, f.mul(a.code(), b.code()));
}
FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  const Field& f = common_field(a, b);
  return FieldElement(f, f.div(a.code(), b.code()));
}
FieldElement FieldElement::operator-() const { return FieldElement(*field_, field_->neg(code_)); }

std::ostream& operator<<(std::ostream& os, const FieldElement& a) { return os << a.code(); }

int quad_char(const FieldElement& c) { return c.field().quad_char(c.code()); }

}  // namespace hyptrace
