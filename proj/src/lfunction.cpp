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

#include "hyptrace/lfunction.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

#include "hyptrace/arith.hpp"
#include "hyptrace/errors.hpp"

namespace hyptrace {

namespace {

void require_positive_monic(const Poly& D) {
  if (!D.is_monic() || D.degree() < 1) throw std::invalid_argument("D must be monic of positive degree");
}

bool is_perfect_square(const Poly& D) {
  for (const auto& pp : factorize(D).factors)
    if (pp.multiplicity % 2 != 0) return false;
  return true;
}

std::int64_t a_coeff_unchecked(const Poly& D, int beta) {
  const Field& F = D.field();
  const auto& dc = PolyAccess::coeffs(D);
  std::int64_t sum = 0;
  const std::uint64_t count = monic_count(F, beta);
  for (std::uint64_t k = 0; k < count; ++k) {
    const Poly B = Poly::monic_from_index(F, beta, k);
    sum += detail::residue_symbol_raw(F, dc, PolyAccess::coeffs(B));
  }
  return sum;
}

void check_invariants(const LPolynomial& L) {
  const BigInt qd = big_pow(L.q, static_cast<unsigned>(L.delta));
  if (L.coeffs.front() != 1) throw IdentityFailure("A*(0) != 1 for D = " + to_string(L.D));
  if (L.coeffs.back() != qd)
    throw IdentityFailure("leading coefficient of L* is " + L.coeffs.back().str() + ", expected q^delta for D = " +
                          to_string(L.D));
  const int top = 2 * L.delta;
  for (int b = 0; b <= top; ++b) {
    if (L.coeffs[b] * qd != big_pow(L.q, static_cast<unsigned>(b)) * L.coeffs[top - b])
      throw IdentityFailure("functional equation fails at beta = " + std::to_string(b) + " for D = " + to_string(L.D));
  }
}

nlohmann::json big_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return v.convert_to<std::int64_t>();
  return v.str();
}

// Dense polynomials over Q for the squarefree split ahead of root finding.
using RPoly = std::vector<Rational>;

void rtrim(RPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

RPoly rderiv(const RPoly& a) {
  RPoly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<int>(i));
  rtrim(d);
  return d;
}

std::pair<RPoly, RPoly> rdivmod(RPoly a, const RPoly& b) {
  RPoly quot(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  while (a.size() >= b.size() && !a.empty()) {
    const std::size_t shift = a.size() - b.size();
    const Rational c = a.back() / b.back();
    quot[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    a.pop_back();
    rtrim(a);
  }
  rtrim(quot);
  return {quot, a};
}

RPoly rmonic(RPoly a) {
  const Rational lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

RPoly rgcd(RPoly a, RPoly b) {
  while (!b.empty()) {
    RPoly r = rdivmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return rmonic(a);
}

RPoly rsub(RPoly a, const RPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  rtrim(a);
  return a;
}

// Yun's algorithm: f = prod a_i^i with the a_i squarefree and coprime.
std::vector<std::pair<RPoly, int>> squarefree_split(const RPoly& f) {
  std::vector<std::pair<RPoly, int>> out;
  const RPoly df = rderiv(f);
  const RPoly a0 = rgcd(f, df);
  RPoly b = rdivmod(f, a0).first;
  RPoly c = rdivmod(df, a0).first;
  RPoly d = rsub(c, rderiv(b));
  for (int i = 1; b.size() > 1; ++i) {
    const RPoly a = d.empty() ? rmonic(b) : rgcd(b, d);
    b = rdivmod(b, a).first;
    c = rdivmod(d, a).first;
    d = rsub(c, rderiv(b));
    if (a.size() > 1) out.emplace_back(a, i);
  }
  return out;
}

using CLD = std::complex<long double>;

CLD polish(const std::vector<long double>& coef, CLD z) {
  for (int it = 0; it < 50; ++it) {
    CLD v = 0, dv = 0;
    for (std::size_t i = coef.size(); i-- > 0;) {
      dv = dv * z + v;
      v = v * z + coef[i];
    }
    if (dv == CLD(0)) break;
    const CLD step = v / dv;
    z -= step;
    if (std::abs(step) <= 1e-19L * std::abs(z)) break;
  }
  return z;
}

}  // namespace

std::vector<std::int64_t> a_coeffs(const Poly& D) {
  require_positive_monic(D);
  if (is_perfect_square(D)) throw std::invalid_argument("D is a perfect square: " + to_string(D));
  std::vector<std::int64_t> out;
  for (int b = 0; b < D.degree(); ++b) out.push_back(a_coeff_unchecked(D, b));
  return out;
}

std::int64_t a_coeff(const Poly& D, int beta) {
  require_positive_monic(D);
  if (beta < 0) throw std::invalid_argument("beta must be >= 0");
  return a_coeff_unchecked(D, beta);
}

LPolynomial complete(const std::vector<std::int64_t>& raw, const Poly& D) {
  require_positive_monic(D);
  if (!is_squarefree(D)) throw std::invalid_argument("completion needs squarefree D");
  const int k = D.degree();
  if (static_cast<int>(raw.size()) != k) throw std::invalid_argument("coefficient vector must have length deg D");
  LPolynomial L{D, D.field().q(), k % 2 == 0 ? 1 : 0, 0, {}};
  L.delta = (k - 1 - L.lambda) / 2;
  if (L.lambda == 0) {
    for (auto a : raw) L.coeffs.emplace_back(a);
  } else {
    // L = (1 - u) L*, so A* is the running sum of A and the total must vanish.
    BigInt run = 0;
    for (int b = 0; b < k; ++b) {
      run += raw[b];
      if (b < k - 1) L.coeffs.push_back(run);
    }
    if (run != 0) throw IdentityFailure("L(1) != 0 for even degree D = " + to_string(D));
  }
  check_invariants(L);
  return L;
}

LPolynomial l_function(const Poly& D) {
  require_positive_monic(D);
  std::vector<std::int64_t> raw;
  for (int b = 0; b < D.degree(); ++b) raw.push_back(a_coeff_unchecked(D, b));
  return complete(raw, D);
}

LPolynomial l_function_half(const Poly& D) {
  require_positive_monic(D);
  const int k = D.degree();
  LPolynomial L{D, D.field().q(), k % 2 == 0 ? 1 : 0, 0, {}};
  L.delta = (k - 1 - L.lambda) / 2;
  L.coeffs.resize(2 * L.delta + 1);
  BigInt run = 0;
  for (int b = 0; b <= L.delta; ++b) {
    const std::int64_t a = a_coeff_unchecked(D, b);
    run += a;
    L.coeffs[b] = L.lambda ? run : BigInt(a);
  }
  for (int b = L.delta + 1; b <= 2 * L.delta; ++b)
    L.coeffs[b] = big_pow(L.q, static_cast<unsigned>(b - L.delta)) * L.coeffs[2 * L.delta - b];
  return L;
}

FrobeniusData power_sums(const LPolynomial& L, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  FrobeniusData out{L, std::vector<BigInt>(n_max + 1)};
  auto& s = out.s;
  const int top = 2 * L.delta;
  s[0] = top;
  const BigInt bound_sq = BigInt(top) * top;
  for (int n = 1; n <= n_max; ++n) {
    BigInt v = n <= top ? BigInt(L.coeffs[n] * -n) : BigInt(0);
    for (int j = 1; j < n && j <= top; ++j) v -= L.coeffs[j] * s[n - j];
    if (v * v > bound_sq * big_pow(L.q, static_cast<unsigned>(n)))
      throw IdentityFailure("Weil bound violated at n = " + std::to_string(n) + " for D = " + to_string(L.D));
    s[n] = std::move(v);
  }
  return out;
}

PrimeCharacterSums prime_character_sums(const QuadraticCharacter& chi, int n_max) {
  PrimeCharacterSums out{std::vector<std::int64_t>(n_max + 1, 0), std::vector<std::int64_t>(n_max + 1, 0)};
  const Field& F = chi.modulus().field();
  Poly::Coeffs scratch;
  for (int d = 1; d <= n_max; ++d) {
    for (const Poly& P : irreducibles(F, d)) {
      const int v = chi.of_monic(PolyAccess::coeffs(P), scratch);
      out.chi_sum[d] += v;
      out.coprime[d] += v != 0;
    }
  }
  return out;
}

BigInt explicit_formula_value(const PrimeCharacterSums& sums, int lambda, int n) {
  BigInt c = lambda;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    c += BigInt(d) * ((n / d) % 2 == 1 ? sums.chi_sum[d] : sums.coprime[d]);
  }
  return c;
}

BigInt explicit_formula_sum(const Poly& D, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return explicit_formula_sums(D, n)[n];
}

std::vector<BigInt> explicit_formula_sums(const Poly& D, int n_max) {
  require_positive_monic(D);
  const QuadraticCharacter chi(D);
  const PrimeCharacterSums sums = prime_character_sums(chi, n_max);
  const int lambda = D.degree() % 2 == 0 ? 1 : 0;
  std::vector<BigInt> out(n_max + 1);
  for (int n = 1; n <= n_max; ++n) out[n] = explicit_formula_value(sums, lambda, n);
  return out;
}

std::vector<double> eigenangles(const LPolynomial& L) {
  std::vector<double> angles;
  if (L.delta == 0) return angles;
  RPoly f;
  for (const auto& c : L.coeffs) f.emplace_back(c);
  const long double sqrt_q = std::sqrt(static_cast<long double>(L.q));
  for (const auto& [factor, mult] : squarefree_split(f)) {
    const int deg = static_cast<int>(factor.size()) - 1;
    Eigen::VectorXd coef(deg + 1);
    std::vector<long double> lcoef(deg + 1);
    for (int i = 0; i <= deg; ++i) {
      coef[i] = factor[i].convert_to<double>();
      lcoef[i] = factor[i].convert_to<long double>();
    }
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coef);
    for (Eigen::Index r = 0; r < solver.roots().size(); ++r) {
      const std::complex<double> z0 = solver.roots()[r];
      const CLD z = polish(lcoef, CLD(z0.real(), z0.imag()));
      const long double radius = std::abs(z) * sqrt_q;
      if (!(std::fabs(radius - 1.0L) <= 1e-9L))
        throw std::runtime_error("root of L* off the circle |u| = q^{-1/2} for D = " + to_string(L.D) +
                                 " (|u| sqrt q = " + std::to_string(static_cast<double>(radius)) + ")");
      double theta = -static_cast<double>(std::arg(z));
      if (theta <= -std::numbers::pi) theta = std::numbers::pi;
      for (int m = 0; m < mult; ++m) angles.push_back(theta);
    }
  }
  if (static_cast<int>(angles.size()) != 2 * L.delta)
    throw std::runtime_error("root finder returned " + std::to_string(angles.size()) + " roots, expected " +
                             std::to_string(2 * L.delta));
  std::sort(angles.begin(), angles.end());
  return angles;
}

std::uint64_t point_count(const Poly& Q, int n, std::uint64_t cap) {
  if (Q.is_zero() || Q.degree() % 2 == 0) throw std::invalid_argument("point_count needs odd degree Q");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const Field& F = Q.field();
  std::uint64_t size = 1;
  for (int i = 0; i < n; ++i) {
    size *= F.q();
    if (size > cap) throw BudgetExceeded("F_{q^n} too large to enumerate: q^n exceeds cap " + std::to_string(cap));
  }
  const Field& K = field_make(F.p(), F.e() * n);
  // Image of a base-field generator inside K.
  std::uint32_t gen = 0;
  if (F.e() > 1) {
    const auto& m = F.modulus();
    for (std::uint32_t r = 0; r < K.q(); ++r) {
      std::uint32_t v = 0;
      for (std::size_t i = m.size(); i-- > 0;) v = K.add(K.mul(v, r), K.from_integer(m[i]));
      if (v == 0) {
        gen = r;
        break;
      }
    }
  }
  auto embed = [&](std::uint32_t c) {
    if (F.e() == 1) return K.from_integer(c);
    std::uint32_t v = 0, power = 1;
    for (int i = 0; i < F.e(); ++i) {
      v = K.add(v, K.mul(K.from_integer(c % F.p()), power));
      c /= F.p();
      power = K.mul(power, gen);
    }
    return v;
  };
  std::vector<std::uint32_t> coef;
  for (auto c : Q.coeffs()) coef.push_back(embed(c));
  std::uint64_t count = 1;
  for (std::uint32_t x = 0; x < K.q(); ++x) {
    std::uint32_t y = 0;
    for (std::size_t i = coef.size(); i-- > 0;) y = K.add(K.mul(y, x), coef[i]);
    count += static_cast<std::uint64_t>(1 + K.quad_char(y));
  }
  return count;
}

nlohmann::json to_json(const FrobeniusData& data) {
  const LPolynomial& L = data.L;
  nlohmann::json j;
  j["q"] = L.q;
  j["D"] = nlohmann::json::array();
  for (auto c : L.D.coeffs()) j["D"].push_back(c);
  j["lambda"] = L.lambda;
  j["delta"] = L.delta;
  j["Lstar"] = nlohmann::json::array();
  for (const auto& c : L.coeffs) j["Lstar"].push_back(big_json(c));
  j["s"] = nlohmann::json::array();
  for (std::size_t n = 1; n < data.s.size(); ++n) j["s"].push_back(big_json(data.s[n]));
  return j;
}

}  // namespace hyptrace
