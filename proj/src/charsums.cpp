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

#include "hyptrace/charsums.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "hyptrace/arith.hpp"
#include "hyptrace/errors.hpp"
#include "hyptrace/lfunction.hpp"
#include "hyptrace/log.hpp"
#include "hyptrace/quadchar.hpp"

namespace hyptrace {

std::int64_t sigma(std::uint32_t q, int n, int alpha) {
  if (n < 1 || alpha < 0) throw std::invalid_argument("sigma needs n >= 1 and alpha >= 0");
  const std::int64_t qq = q;
  if (n == 1) return alpha == 0 ? 1 : 1 - qq;
  if (alpha % n == 0) return 1;
  if (alpha % n == 1) return -qq;
  return 0;
}

std::int64_t sigma_direct(const Poly& prime, int alpha) {
  if (alpha < 0) throw std::invalid_argument("alpha must be >= 0");
  std::int64_t sum = 0;
  for (const Poly& A : monic_polys(prime.field(), alpha)) {
    if (A.degree() >= prime.degree() && (A % prime).is_zero()) continue;
    sum += mobius(A);
  }
  return sum;
}

namespace {

// Every monic B of degree 1..max_degree as (some prime factor R) * (cofactor).
struct FactorSieve {
  std::vector<const Poly*> primes;
  std::vector<int> prime_degree;
  std::vector<std::vector<std::int32_t>> prime_of;
  std::vector<std::vector<std::uint32_t>> cofactor_of;
};

FactorSieve build_factor_sieve(const Field& F, int max_degree) {
  FactorSieve s;
  const std::uint64_t q = F.q();
  for (int d = 1; d <= max_degree; ++d)
    for (const Poly& R : irreducibles(F, d)) {
      s.primes.push_back(&R);
      s.prime_degree.push_back(d);
    }
  s.prime_of.resize(max_degree + 1);
  s.cofactor_of.resize(max_degree + 1);
  Poly::Coeffs prod;
  for (int beta = 1; beta <= max_degree; ++beta) {
    const std::uint64_t count = monic_count(F, beta);
    s.prime_of[beta].assign(count, -1);
    s.cofactor_of[beta].assign(count, 0);
    for (std::size_t pid = 0; pid < s.primes.size(); ++pid) {
      const int d = s.prime_degree[pid];
      if (d > beta) break;
      const std::uint64_t cofactors = monic_count(F, beta - d);
      for (std::uint64_t m = 0; m < cofactors; ++m) {
        const Poly M = Poly::monic_from_index(F, beta - d, m);
        detail::mul_into(F, PolyAccess::coeffs(*s.primes[pid]), PolyAccess::coeffs(M), prod);
        std::uint64_t index = 0;
        for (int i = beta - 1; i >= 0; --i) index = index * q + prod[i];
        s.prime_of[beta][index] = static_cast<std::int32_t>(pid);
        s.cofactor_of[beta][index] = static_cast<std::uint32_t>(m);
      }
    }
  }
  return s;
}

struct STableCache {
  std::mutex mutex;
  std::map<std::pair<const Field*, int>, std::unique_ptr<FactorSieve>> sieves;
  std::map<std::pair<const Field*, int>, std::vector<BigInt>> below;  // S(beta; n), beta < n
};

STableCache& s_cache() {
  static STableCache cache;
  return cache;
}

std::vector<BigInt> compute_below(const Field& F, int n, const FactorSieve& sieve) {
  std::vector<BigInt> totals(n, 0);
  std::vector<std::int64_t> per_beta(n, 0);
  std::vector<std::int8_t> chi_prime(sieve.primes.size());
  std::vector<std::vector<std::int8_t>> chi(n);
  chi[0] = {1};
  for (const Poly& P : irreducibles(F, n)) {
    const auto& pc = PolyAccess::coeffs(P);
    for (std::size_t pid = 0; pid < sieve.primes.size(); ++pid)
      chi_prime[pid] =
          static_cast<std::int8_t>(detail::residue_symbol_raw(F, PolyAccess::coeffs(*sieve.primes[pid]), pc));
    per_beta[0] += 1;
    for (int beta = 1; beta < n; ++beta) {
      auto& row = chi[beta];
      const auto& pof = sieve.prime_of[beta];
      const auto& cof = sieve.cofactor_of[beta];
      row.resize(pof.size());
      std::int64_t sum = 0;
      for (std::size_t k = 0; k < pof.size(); ++k) {
        const std::int32_t pid = pof[k];
        const std::int8_t v = static_cast<std::int8_t>(chi_prime[pid] * chi[beta - sieve.prime_degree[pid]][cof[k]]);
        row[k] = v;
        sum += v;
      }
      per_beta[beta] += sum;
    }
  }
  for (int beta = 0; beta < n; ++beta) totals[beta] = per_beta[beta];
  return totals;
}

const std::vector<BigInt>& below_table(const Field& F, int n) {
  STableCache& cache = s_cache();
  std::lock_guard lock(cache.mutex);
  auto it = cache.below.find({&F, n});
  if (it != cache.below.end()) return it->second;
  auto& sieve = cache.sieves[{&F, n - 1}];
  if (!sieve) sieve = std::make_unique<FactorSieve>(build_factor_sieve(F, n - 1));
  return cache.below.emplace(std::pair{&F, n}, compute_below(F, n, *sieve)).first->second;
}

// q^e * x as an exact integer when e >= 0, else x stays and the other side is scaled.
BigInt scaled(std::uint32_t q, int e, const BigInt& x) { return e >= 0 ? big_pow(q, e) * x : x; }

}  // namespace

STable s_table(const Field& field, int n, int beta_max) {
  if (n < 1 || beta_max < 0) throw std::invalid_argument("s_table needs n >= 1 and beta_max >= 0");
  const auto& below = below_table(field, n);
  STable out{field.q(), n, {}};
  BigInt below_total = 0;
  for (const auto& v : below) below_total += v;
  // sum over c in F_q^* of quad_char(c)^n
  const BigInt unit_sum = n % 2 == 0 ? BigInt(field.q() - 1) : BigInt(0);
  const BigInt residue_total = unit_sum * below_total;
  for (int beta = 0; beta <= beta_max; ++beta)
    out.values.push_back(beta < n ? below[beta] : big_pow(field.q(), beta - n) * residue_total);
  return out;
}

BigInt s_beta_n(const Field& field, int beta, int n) { return s_table(field, n, beta).values[beta]; }

BigInt s_beta_n_via_lfunctions(const Field& field, int beta, int n) {
  BigInt total = 0;
  for (const Poly& P : irreducibles(field, n)) total += a_coeff(P, beta);
  return reciprocity_sign(field.q(), beta, n) * total;
}

BigInt s_beta_n_brute(const Field& field, int beta, int n) {
  BigInt total = 0;
  for (const Poly& P : irreducibles(field, n))
    for (const Poly& B : monic_polys(field, beta)) total += residue_symbol(B, P);
  return total;
}

DualityReport duality_check(const Field& field, int n) {
  if (n < 1) throw std::invalid_argument("duality_check needs n >= 1");
  const std::uint32_t q = field.q();
  const STable t = s_table(field, n, n + 2);
  const auto& S = t.values;
  const BigInt pi = pi_q(field, n);
  DualityReport report{q, n, {}};
  auto record = [&](std::string relation, int beta, BigInt lhs, BigInt rhs) {
    if (lhs != rhs)
      throw IdentityFailure(relation + " relation fails for q = " + std::to_string(q) + ", n = " + std::to_string(n) +
                            ", beta = " + std::to_string(beta) + ": " + lhs.str() + " != " + rhs.str());
    report.rows.push_back({std::move(relation), beta, std::move(lhs), std::move(rhs)});
  };
  if (n % 2 == 1) {
    for (int beta = 0; beta <= n - 1; ++beta) {
      const int e = beta - (n - 1) / 2;
      record("odd", beta, scaled(q, -e, S[beta]), scaled(q, e, S[n - 1 - beta]));
    }
    record("boundary_odd", n - 1, S[n - 1], pi * big_pow(q, (n - 1) / 2));
  } else {
    for (int beta = 1; beta <= n - 2; ++beta) {
      BigInt inner = -S[n - 1 - beta];
      BigInt tail = 0;
      for (int j = 0; j <= n - beta - 2; ++j) tail += S[j];
      inner += BigInt(q - 1) * tail;
      const int e = beta - n / 2;
      record("even", beta, scaled(q, -e, S[beta]), scaled(q, e, inner));
    }
    record("boundary_even", n - 1, S[n - 1], -pi * big_pow(q, (n - 2) / 2));
  }
  for (int beta = n; beta <= n + 2; ++beta) record("vanishing", beta, S[beta], 0);
  return report;
}

BoundReport bound_monitor(const Field& field, int n, double threshold) {
  if (n < 2) throw std::invalid_argument("bound_monitor needs n >= 2");
  const double q = field.q();
  const STable t = s_table(field, n, n - 1);
  const double pi = static_cast<double>(pi_q(field, n));
  const int eta_n = n % 2 == 0;
  BoundReport report{field.q(), n, threshold, {}};
  for (int beta = 1; beta < n; ++beta) {
    const double s = to_double(t.values[beta]);
    const int eta_b = beta % 2 == 0;
    BoundRow row{beta, t.values[beta], 0.0, std::nullopt, false};
    row.crude_ratio = std::fabs(s - eta_b * pi * std::pow(q, beta / 2.0)) /
                      ((static_cast<double>(beta) / n) * std::pow(q, n / 2.0 + beta));
    if (beta % 2 == 1) row.bootstrap_ratio = std::fabs(s + eta_n * pi * std::pow(q, beta - n / 2.0)) / std::pow(q, n);
    row.warn = row.crude_ratio > threshold || (row.bootstrap_ratio && *row.bootstrap_ratio > threshold);
    if (row.warn)
      log_event(LogLevel::warn, "bound_ratio_high",
                {{"q", std::to_string(field.q())}, {"n", std::to_string(n)}, {"beta", std::to_string(beta)},
                 {"crude_ratio", std::to_string(row.crude_ratio)}});
    report.rows.push_back(std::move(row));
  }
  return report;
}

ChiSquareAverage avg_chi_p_squared(const Poly& prime, int g, std::uint64_t budget) {
  if (g < 1) throw std::invalid_argument("g must be >= 1");
  if (!is_irreducible(prime) || !prime.is_monic()) throw std::invalid_argument("P must be a monic prime");
  const Field& F = prime.field();
  const int d = 2 * g + 1;
  const std::uint64_t total = monic_count(F, d);
  if (total > budget) throw BudgetExceeded("ensemble enumeration exceeds budget");
  std::uint64_t curves = 0, coprime = 0;
  for (const Poly& Q : monic_polys(F, d)) {
    if (!is_squarefree(Q)) continue;
    ++curves;
    if (!(Q % prime).is_zero()) ++coprime;
  }
  const BigInt norm = big_pow(F.q(), prime.degree());
  ChiSquareAverage out{Rational(coprime, curves), Rational(norm, norm + 1), 0.0, curves};
  const Rational diff = abs(out.value - out.expected);
  out.constant = to_double(diff * big_pow(F.q(), 2 * g));
  return out;
}

}  // namespace hyptrace
