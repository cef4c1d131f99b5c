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
#include <filesystem>
#include <ranges>
#include <vector>

#include "hyptrace/bigint.hpp"
#include "hyptrace/poly.hpp"

namespace hyptrace {

struct PrimePower {
  Poly prime;
  int multiplicity;
};

/// f = unit * prod prime^multiplicity, primes monic irreducible and distinct.
struct FactoredPoly {
  FieldElement unit;
  std::vector<PrimePower> factors;

  Poly expand() const;
};

/// gcd(f, f') == 1 test. Constants are squarefree; f' == 0 at positive degree is not.
bool is_squarefree(const Poly& f);

/// Rabin's test. Constants and zero are not irreducible.
bool is_irreducible(const Poly& f);

/// Trial division against the irreducible tables, smallest degree first.
/// Factors come out sorted by (degree, monic index).
FactoredPoly factorize(const Poly& f);

/// mu(f) for monic f, via a squarefree test and a distinct-degree factor count.
int mobius(const Poly& f);

/// Lambda(P^k) = deg P, zero otherwise. Requires monic f.
int von_mangoldt(const Poly& f);

/// Number of monic irreducible factors of a monic squarefree polynomial.
int count_prime_factors_squarefree(const Poly& f);

inline std::uint64_t monic_count(const Field& field, int degree) {
  return checked_pow(field.q(), static_cast<unsigned>(degree));
}

/// All q^d monic polynomials of degree d, in index order.
inline auto monic_polys(const Field& field, int degree) {
  return std::views::iota(std::uint64_t{0}, monic_count(field, degree)) |
         std::views::transform([&field, degree](std::uint64_t k) { return Poly::monic_from_index(field, degree, k); });
}

/**
 * Monic irreducibles of degree d in index order.
 *
 * Tables are built once per process with a multiplicative sieve over the
 * monic polynomials of degree d, and optionally persisted to the directory
 * given to set_irreducible_cache_dir(). Thread safe.
 */
const std::vector<Poly>& irreducibles(const Field& field, int degree);

/// Number of primes of degree d, read off the sieve.
std::uint64_t pi_q(const Field& field, int degree);

/// Number of primes of degree d by the necklace formula (1/d) sum_{e|d} mu(e) q^{d/e}.
BigInt pi_q_formula(std::uint64_t q, int degree);

/// Directory for persistent irreducible tables; an empty path disables the disk cache.
void set_irreducible_cache_dir(const std::filesystem::path& dir);

/// Writes a table in the FQIRR1 format: magic, then p, e, d, count as
/// little-endian u64, then for every entry its d lower coefficients, each in
/// the smallest of 1, 2 or 4 little-endian bytes that holds q - 1.
void save_irreducible_table(const std::filesystem::path& file, const Field& field, int degree,
                            const std::vector<Poly>& table);

/// Reads an FQIRR1 table and re-tests 16 pseudo-random entries for
/// irreducibility. Throws std::runtime_error on any mismatch or corruption.
std::vector<Poly> load_irreducible_table(const std::filesystem::path& file, const Field& field, int degree);

struct ZetaIdentityRow {
  int degree;
  BigInt sum_von_mangoldt;  // sum over monic f of degree d of Lambda(f)
  BigInt sum_mobius;        // sum over monic f of degree d of mu(f)
  BigInt expected_von_mangoldt;
  BigInt expected_mobius;
};

struct ZetaIdentityReport {
  std::vector<ZetaIdentityRow> rows;
};

/// Checks sum Lambda = q^d and sum mu = (1, -q, 0, 0, ...) for 1 <= d <= d_max
/// by direct summation. Throws IdentityFailure on any mismatch.
ZetaIdentityReport zeta_identity_check(const Field& field, int d_max);

}  // namespace hyptrace
