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

#include "hyptrace/arith.hpp"

#include <array>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>

#include "hyptrace/errors.hpp"

namespace hyptrace {

Poly FactoredPoly::expand() const {
  Poly r = Poly::constant(unit.field(), unit.code());
  for (const auto& [prime, mult] : factors)
    for (int i = 0; i < mult; ++i) r = r * prime;
  return r;
}

bool is_squarefree(const Poly& f) {
  if (f.is_zero()) throw std::domain_error("is_squarefree of the zero polynomial");
  if (f.degree() <= 0) return true;
  const Poly df = f.derivative();
  if (df.is_zero()) return false;
  return poly_gcd(f, df).degree() == 0;
}

bool is_irreducible(const Poly& f) {
  if (f.degree() < 1) return false;
  if (f.degree() == 1) return true;
  const Field& F = f.field();
  const Poly g = f.monic();
  const int n = g.degree();
  const Poly x = Poly::x(F);
  // frob[i] = x^(q^i) mod g
  std::vector<Poly> frob{x % g};
  for (int i = 1; i <= n; ++i) frob.push_back(pow_mod(frob.back(), F.q(), g));
  if (!(frob[n] == x % g)) return false;
  int m = n;
  for (int r = 2; r <= m; ++r) {
    if (m % r != 0) continue;
    while (m % r == 0) m /= r;
    if (poly_gcd(frob[n / r] - x, g).degree() != 0) return false;
  }
  return true;
}

FactoredPoly factorize(const Poly& f) {
  if (f.is_zero()) throw std::domain_error("factorize of the zero polynomial");
  const Field& F = f.field();
  FactoredPoly out{F.element(f.leading()), {}};
  Poly g = f.monic();
  for (int d = 1; 2 * d <= g.degree(); ++d) {
    for (const Poly& prime : irreducibles(F, d)) {
      if (2 * d > g.degree()) break;
      int mult = 0;
      for (;;) {
        DivMod qr = poly_divmod(g, prime);
        if (!qr.remainder.is_zero()) break;
        g = std::move(qr.quotient);
        ++mult;
      }
      if (mult > 0) out.factors.push_back({prime, mult});
    }
  }
  if (g.degree() >= 1) out.factors.push_back({g, 1});
  return out;
}

int count_prime_factors_squarefree(const Poly& f) {
  const Field& F = f.field();
  const Poly x = Poly::x(F);
  Poly g = f.monic();
  if (g.degree() <= 0) return 0;
  Poly h = x % g;
  int count = 0;
  for (int i = 1; 2 * i <= g.degree(); ++i) {
    h = pow_mod(h, F.q(), g);
    const Poly d = poly_gcd(h - x, g);
    if (d.degree() > 0) {
      count += d.degree() / i;
      g = g / d;
      h = h % g;
    }
  }
  if (g.degree() > 0) ++count;
  return count;
}

int mobius(const Poly& f) {
  if (!f.is_monic()) throw std::invalid_argument("mobius requires a monic polynomial");
  if (f.degree() == 0) return 1;
  if (!is_squarefree(f)) return 0;
  return count_prime_factors_squarefree(f) % 2 == 0 ? 1 : -1;
}

int von_mangoldt(const Poly& f) {
  if (!f.is_monic()) throw std::invalid_argument("von_mangoldt requires a monic polynomial");
  if (f.degree() == 0) return 0;
  const FactoredPoly fp = factorize(f);
  return fp.factors.size() == 1 ? fp.factors.front().prime.degree() : 0;
}

namespace {

constexpr std::uint64_t kMaxSieveEntries = std::uint64_t{1} << 32;
constexpr std::array<char, 6> kMagic{'F', 'Q', 'I', 'R', 'R', '1'};

std::vector<Poly> sieve_irreducibles(const Field& field, int degree) {
  std::vector<Poly> out;
  const std::uint64_t q = field.q();
  if (degree == 1) {
    for (std::uint64_t k = 0; k < q; ++k) out.push_back(Poly::monic_from_index(field, 1, k));
    return out;
  }
  const std::uint64_t total = monic_count(field, degree);
  if (total > kMaxSieveEntries)
    throw BudgetExceeded("irreducible sieve of degree " + std::to_string(degree) + " over F_" + std::to_string(q) +
                         " is too large");
  std::vector<std::uint64_t> composite((total + 63) / 64, 0);
  Poly::Coeffs prod;
  for (int k = 1; 2 * k <= degree; ++k) {
    const std::uint64_t cofactors = monic_count(field, degree - k);
    for (const Poly& prime : irreducibles(field, k)) {
      const auto& pc = PolyAccess::coeffs(prime);
      for (std::uint64_t m = 0; m < cofactors; ++m) {
        const Poly cof = Poly::monic_from_index(field, degree - k, m);
        detail::mul_into(field, pc, PolyAccess::coeffs(cof), prod);
        std::uint64_t index = 0;
        for (int i = degree - 1; i >= 0; --i) index = index * q + prod[i];
        composite[index >> 6] |= std::uint64_t{1} << (index & 63);
      }
    }
  }
  for (std::uint64_t k = 0; k < total; ++k)
    if (!(composite[k >> 6] >> (k & 63) & 1)) out.push_back(Poly::monic_from_index(field, degree, k));
  return out;
}

int digit_width(std::uint32_t q) { return q <= 256 ? 1 : (q <= 65536 ? 2 : 4); }

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& is) {
  std::array<unsigned char, 8> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 8)) throw std::runtime_error("truncated irreducible table header");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = v << 8 | b[i];
  return v;
}

struct TableCache {
  std::recursive_mutex mutex;
  std::map<std::pair<const Field*, int>, std::unique_ptr<const std::vector<Poly>>> tables;
  std::filesystem::path dir;
};

TableCache& table_cache() {
  static TableCache cache;
  return cache;
}

std::filesystem::path table_file(const std::filesystem::path& dir, const Field& field, int degree) {
  return dir / ("fqirr_p" + std::to_string(field.p()) + "_e" + std::to_string(field.e()) + "_d" +
                std::to_string(degree) + ".bin");
}

}  // namespace

void save_irreducible_table(const std::filesystem::path& file, const Field& field, int degree,
                            const std::vector<Poly>& table) {
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os.write(kMagic.data(), kMagic.size());
  put_u64(os, field.p());
  put_u64(os, static_cast<std::uint64_t>(field.e()));
  put_u64(os, static_cast<std::uint64_t>(degree));
  put_u64(os, table.size());
  const int width = digit_width(field.q());
  for (const Poly& f : table) {
    if (f.degree() != degree || !f.is_monic()) throw std::invalid_argument("table entry has wrong shape");
    for (int i = 0; i < degree; ++i) {
      const std::uint32_t c = f[i];
      for (int b = 0; b < width; ++b) os.put(static_cast<char>((c >> (8 * b)) & 0xff));
    }
  }
  if (!os) throw std::runtime_error("write failed for " + file.string());
}

std::vector<Poly> load_irreducible_table(const std::filesystem::path& file, const Field& field, int degree) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  std::array<char, 6> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw std::runtime_error("bad magic in " + file.string());
  const std::uint64_t p = get_u64(is), e = get_u64(is), d = get_u64(is), count = get_u64(is);
  if (p != field.p() || e != static_cast<std::uint64_t>(field.e()) || d != static_cast<std::uint64_t>(degree))
    throw std::runtime_error("irreducible table parameters do not match request");
  if (count > monic_count(field, degree)) throw std::runtime_error("irreducible table count out of range");
  const int width = digit_width(field.q());
  std::vector<Poly> table;
  table.reserve(count);
  std::vector<unsigned char> buf(static_cast<std::size_t>(width) * degree);
  for (std::uint64_t k = 0; k < count; ++k) {
    if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
      throw std::runtime_error("truncated irreducible table body");
    Poly::Coeffs c(degree + 1);
    for (int i = 0; i < degree; ++i) {
      std::uint32_t v = 0;
      for (int b = width - 1; b >= 0; --b) v = v << 8 | buf[static_cast<std::size_t>(i) * width + b];
      if (v >= field.q()) throw std::runtime_error("coefficient out of range in irreducible table");
      c[i] = v;
    }
    c[degree] = 1;
    table.emplace_back(field, std::move(c));
    if (k > 0 && table[k - 1].monic_index() >= table[k].monic_index())
      throw std::runtime_error("irreducible table is not sorted");
  }
  if (is.peek() != std::char_traits<char>::eof()) throw std::runtime_error("trailing bytes in irreducible table");
  if (!table.empty()) {
    std::mt19937_64 rng(0x46514952523131ull ^ (p << 16) ^ (e << 8) ^ d);
    std::uniform_int_distribution<std::size_t> pick(0, table.size() - 1);
    for (int i = 0; i < 16; ++i) {
      const Poly& f = table[pick(rng)];
      if (!is_irreducible(f)) throw std::runtime_error("reducible entry in irreducible table " + file.string());
    }
  }
  return table;
}

void set_irreducible_cache_dir(const std::filesystem::path& dir) {
  TableCache& cache = table_cache();
  std::lock_guard lock(cache.mutex);
  cache.dir = dir;
}

const std::vector<Poly>& irreducibles(const Field& field, int degree) {
  if (degree < 1) throw std::invalid_argument("irreducibles need degree >= 1");
  TableCache& cache = table_cache();
  std::lock_guard lock(cache.mutex);
  auto& slot = cache.tables[{&field, degree}];
  if (slot) return *slot;

  std::vector<Poly> table;
  bool loaded = false;
  std::filesystem::path file;
  if (!cache.dir.empty()) {
    file = table_file(cache.dir, field, degree);
    if (std::filesystem::exists(file)) {
      try {
        table = load_irreducible_table(file, field, degree);
        loaded = true;
      } catch (const std::runtime_error&) {
        loaded = false;  // corrupt or stale: rebuild and overwrite below
      }
    }
  }
  if (!loaded) {
    table = sieve_irreducibles(field, degree);
    if (!file.empty()) {
      std::filesystem::create_directories(cache.dir);
      save_irreducible_table(file, field, degree, table);
    }
  }
  // std::map references survive the recursive inserts made by the sieve.
  slot = std::make_unique<const std::vector<Poly>>(std::move(table));
  return *slot;
}

std::uint64_t pi_q(const Field& field, int degree) { return irreducibles(field, degree).size(); }

BigInt pi_q_formula(std::uint64_t q, int degree) {
  if (degree < 1) throw std::invalid_argument("pi_q needs degree >= 1");
  BigInt total = 0;
  for (int e = 1; e <= degree; ++e) {
    if (degree % e != 0) continue;
    // integer Mobius of e
    int mu = 1, m = e;
    for (int r = 2; r * r <= m; ++r) {
      if (m % r != 0) continue;
      m /= r;
      if (m % r == 0) {
        mu = 0;
        break;
      }
      mu = -mu;
    }
    if (mu != 0 && m > 1) mu = -mu;
    if (mu != 0) total += mu * big_pow(q, static_cast<unsigned>(degree / e));
  }
  return total / degree;
}

ZetaIdentityReport zeta_identity_check(const Field& field, int d_max) {
  if (d_max < 1) throw std::invalid_argument("zeta_identity_check needs d_max >= 1");
  ZetaIdentityReport report;
  for (int d = 1; d <= d_max; ++d) {
    ZetaIdentityRow row{d, 0, 0, big_pow(field.q(), static_cast<unsigned>(d)), d == 1 ? -BigInt(field.q()) : BigInt(0)};
    for (const Poly& f : monic_polys(field, d)) {
      row.sum_von_mangoldt += von_mangoldt(f);
      row.sum_mobius += mobius(f);
    }
    if (row.sum_von_mangoldt != row.expected_von_mangoldt || row.sum_mobius != row.expected_mobius)
      throw IdentityFailure("zeta identity failed at degree " + std::to_string(d) + ": sum Lambda = " +
                            row.sum_von_mangoldt.str() + ", sum mu = " + row.sum_mobius.str());
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace hyptrace
