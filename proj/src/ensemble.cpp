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

#include "hyptrace/ensemble.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "hyptrace/arith.hpp"
#include "hyptrace/charsums.hpp"
#include "hyptrace/errors.hpp"
#include "hyptrace/log.hpp"
#include "hyptrace/parallel.hpp"
#include "hyptrace/quadchar.hpp"
#include "hyptrace/rmt.hpp"

namespace hyptrace {

std::uint64_t ensemble_size(std::uint32_t q, int g) {
  return (q - 1) * checked_pow(q, static_cast<unsigned>(2 * g));
}

void validate(const EnsembleSpec& spec) {
  if (spec.field == nullptr) throw std::invalid_argument("ensemble needs a field");
  if (spec.g < 1) throw std::invalid_argument("g must be >= 1");
  if (spec.mode == EnsembleMode::exhaustive) {
    const std::uint64_t size = ensemble_size(spec.field->q(), spec.g);
    if (size > spec.budget)
      throw BudgetExceeded("exhaustive ensemble has " + std::to_string(size) + " curves, budget is " +
                           std::to_string(spec.budget));
  } else {
    if (spec.sample_count < 2) throw std::invalid_argument("sampling needs at least 2 draws");
    if (spec.sample_count > spec.budget)
      throw BudgetExceeded("sample count " + std::to_string(spec.sample_count) + " exceeds budget " +
                           std::to_string(spec.budget));
  }
}

std::uint64_t curve_block_count(const EnsembleSpec& spec) {
  if (spec.mode == EnsembleMode::sample) return (spec.sample_count + kCurveBlock - 1) / kCurveBlock;
  return (monic_count(*spec.field, 2 * spec.g + 1) + kCurveBlock - 1) / kCurveBlock;
}

std::vector<Poly> curve_block(const EnsembleSpec& spec, std::uint64_t block) {
  const Field& F = *spec.field;
  const int d = 2 * spec.g + 1;
  const std::uint64_t total = monic_count(F, d);
  std::vector<Poly> out;
  if (spec.mode == EnsembleMode::exhaustive) {
    const std::uint64_t lo = block * kCurveBlock;
    const std::uint64_t hi = std::min(total, lo + kCurveBlock);
    for (std::uint64_t k = lo; k < hi; ++k) {
      Poly Q = Poly::monic_from_index(F, d, k);
      if (is_squarefree(Q)) out.push_back(std::move(Q));
    }
    return out;
  }
  const std::uint64_t start = block * kCurveBlock;
  if (start >= spec.sample_count) return out;
  const std::uint64_t quota = std::min(kCurveBlock, spec.sample_count - start);
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
  while (out.size() < quota) {
    Poly Q = Poly::monic_from_index(F, d, pick(rng));
    if (is_squarefree(Q)) out.push_back(std::move(Q));
  }
  return out;
}

void for_each_curve(const EnsembleSpec& spec, const std::function<void(const Poly&)>& visit) {
  validate(spec);
  const std::uint64_t blocks = curve_block_count(spec);
  for (std::uint64_t b = 0; b < blocks; ++b)
    for (const Poly& Q : curve_block(spec, b)) visit(Q);
}

CurveAnalysis analyze_curve(const Poly& Q, int n_max, LRoute route) {
  if (!Q.is_monic() || Q.degree() < 1) throw std::invalid_argument("curve polynomial must be monic");
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  const Field& F = Q.field();
  CurveAnalysis out{power_sums(route == LRoute::full ? l_function(Q) : l_function_half(Q), n_max), {}, {}, {}, {}, {}};
  const int lambda = out.frob.L.lambda;

  std::uint64_t prime_count = 0;
  for (int d = 1; d <= n_max; ++d) prime_count += irreducibles(F, d).size();
  const bool tabulate = prime_count > 2 * monic_count(F, Q.degree()) / (F.q() - 1);
  const QuadraticCharacter chi(Q, tabulate);
  const PrimeCharacterSums sums = prime_character_sums(chi, n_max);
  out.prime_chi_sum = sums.chi_sum;

  out.explicit_sum.resize(n_max + 1);
  out.prime_part.resize(n_max + 1);
  out.square_part.resize(n_max + 1);
  out.higher_part.resize(n_max + 1);
  for (int n = 1; n <= n_max; ++n) {
    out.explicit_sum[n] = explicit_formula_value(sums, lambda, n);
    const BigInt& s = out.frob.s[n];
    if (s + out.explicit_sum[n] != 0)
      throw IdentityFailure("Newton and explicit formula disagree at n = " + std::to_string(n) + " for Q = " +
                            to_string(Q) + ": s_n = " + s.str() + ", c_n = " + out.explicit_sum[n].str());
    BigInt prime = BigInt(-n) * sums.chi_sum[n];
    BigInt square = 0, higher = 0;
    for (int d = 1; d < n; ++d) {
      if (n % d != 0) continue;
      const int k = n / d;
      if (k % 2 == 0)
        square -= BigInt(d) * sums.coprime[d];
      else
        higher -= BigInt(d) * sums.chi_sum[d];
    }
    if (prime + square + higher - lambda != s)
      throw IdentityFailure("decomposition does not reproduce s_n at n = " + std::to_string(n) + " for Q = " +
                            to_string(Q));
    out.prime_part[n] = std::move(prime);
    out.square_part[n] = std::move(square);
    out.higher_part[n] = std::move(higher);
  }
  return out;
}

EnsembleAccumulator::EnsembleAccumulator(std::uint32_t q_, int g_, int n_max_,
                                         const std::vector<std::pair<int, int>>& pairs)
    : q(q_),
      g(g_),
      n_max(n_max_),
      sum_s(n_max_ + 1),
      sum_s_sq(n_max_ + 1),
      prime_part(n_max_ + 1),
      square_part(n_max_ + 1),
      higher_part(n_max_ + 1),
      prime_chi_sum(n_max_ + 1) {
  for (auto [m, n] : pairs) {
    if (m > n) std::swap(m, n);
    if (m < 1 || n > n_max_) throw std::invalid_argument("pair index outside 1..n_max");
    pair_sums.emplace(std::pair{m, n}, BigInt(0));
  }
}

void EnsembleAccumulator::add(const CurveAnalysis& c) {
  ++curve_count;
  const auto& s = c.frob.s;
  for (int n = 1; n <= n_max; ++n) {
    sum_s[n] += s[n];
    sum_s_sq[n] += s[n] * s[n];
    prime_part[n] += c.prime_part[n];
    square_part[n] += c.square_part[n];
    higher_part[n] += c.higher_part[n];
    prime_chi_sum[n] += c.prime_chi_sum[n];
  }
  for (auto& [key, total] : pair_sums) total += s[key.first] * s[key.second];
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& o) {
  if (o.q != q || o.g != g || o.n_max != n_max || o.pair_sums.size() != pair_sums.size())
    throw std::invalid_argument("merging accumulators of different shape");
  curve_count += o.curve_count;
  for (int n = 1; n <= n_max; ++n) {
    sum_s[n] += o.sum_s[n];
    sum_s_sq[n] += o.sum_s_sq[n];
    prime_part[n] += o.prime_part[n];
    square_part[n] += o.square_part[n];
    higher_part[n] += o.higher_part[n];
    prime_chi_sum[n] += o.prime_chi_sum[n];
  }
  for (auto& [key, total] : pair_sums) total += o.pair_sums.at(key);
}

Rational EnsembleAccumulator::scaled_average(int n) const {
  if (curve_count == 0) throw std::domain_error("empty ensemble");
  return Rational(sum_s.at(n), curve_count);
}

double EnsembleAccumulator::average_trace(int n) const {
  return to_double(scaled_average(n)) / std::pow(static_cast<double>(q), n / 2.0);
}

double EnsembleAccumulator::standard_error(int n) const {
  if (curve_count < 2) return 0.0;
  const Rational N(curve_count);
  const Rational mean = Rational(sum_s.at(n)) / N;
  const Rational var = (Rational(sum_s_sq.at(n)) - N * mean * mean) / (N - 1);
  return std::sqrt(to_double(var) / static_cast<double>(curve_count)) / std::pow(static_cast<double>(q), n / 2.0);
}

double EnsembleAccumulator::pair_average(int m, int n) const {
  if (m > n) std::swap(m, n);
  return to_double(Rational(pair_sums.at({m, n}), curve_count)) / std::pow(static_cast<double>(q), (m + n) / 2.0);
}

EnsembleAccumulator accumulate(const EnsembleSpec& spec, int n_max, const std::vector<std::pair<int, int>>& pairs,
                               unsigned threads) {
  validate(spec);
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  const Field& F = *spec.field;
  for (int d = 1; d <= n_max; ++d) irreducibles(F, d);

  const LRoute route = spec.mode == EnsembleMode::exhaustive ? LRoute::full : LRoute::half;
  const std::uint64_t blocks = curve_block_count(spec);
  std::vector<EnsembleAccumulator> partial(blocks, EnsembleAccumulator(F.q(), spec.g, n_max, pairs));
  parallel_for_blocks(blocks, threads, [&](std::size_t b) {
    for (const Poly& Q : curve_block(spec, b)) partial[b].add(analyze_curve(Q, n_max, route));
  });
  EnsembleAccumulator acc(F.q(), spec.g, n_max, pairs);
  acc.exhaustive = spec.mode == EnsembleMode::exhaustive;
  for (const auto& p : partial) acc.merge(p);

  if (acc.exhaustive && acc.curve_count != ensemble_size(F.q(), spec.g))
    throw IdentityFailure("enumerated " + std::to_string(acc.curve_count) + " curves, expected (q-1)q^{2g} = " +
                          std::to_string(ensemble_size(F.q(), spec.g)));
  log_event(LogLevel::info, "ensemble_accumulated",
            {{"q", std::to_string(F.q())},
             {"g", std::to_string(spec.g)},
             {"mode", acc.exhaustive ? "exhaustive" : "sample"},
             {"curves", std::to_string(acc.curve_count)},
             {"n_max", std::to_string(n_max)}});
  return acc;
}

PrimeIdentityResult avg_prime_identity_check(const EnsembleAccumulator& acc, const Field& field, int n) {
  if (!acc.exhaustive) throw std::invalid_argument("prime identity needs an exhaustive accumulator");
  if (n < 1 || n > acc.n_max) throw std::invalid_argument("n outside the accumulated range");
  if (field.q() != acc.q) throw std::invalid_argument("field does not match accumulator");
  const int g = acc.g;
  const STable S = s_table(field, n, 2 * g + 1);
  PrimeIdentityResult r{n, acc.prime_chi_sum[n], 0, std::nullopt, 0};
  for (int alpha = 0; 2 * alpha <= 2 * g + 1; ++alpha)
    r.formula += sigma(field.q(), n, alpha) * S.values[2 * g + 1 - 2 * alpha];
  if (r.enumerated != r.formula)
    throw IdentityFailure("average prime identity fails at n = " + std::to_string(n) + ": " + r.enumerated.str() +
                          " != " + r.formula.str());
  if (n > g) {
    r.two_term = S.values[2 * g + 1] - BigInt(field.q()) * S.values[2 * g - 1];
    if (*r.two_term != r.formula)
      throw IdentityFailure("two-term form of the prime identity fails at n = " + std::to_string(n));
  }
  r.prime_average_scaled = Rational(BigInt(-n) * r.enumerated, acc.curve_count);
  return r;
}

Prediction trace_prediction(std::uint32_t q, int n, int g) {
  if (n < 1 || g < 1) throw std::invalid_argument("trace_prediction needs n, g >= 1");
  Prediction p{n, 0, 0, 0.0};
  if (n < 2 * g)
    p.main_term = -eta(n);
  else if (n == 2 * g)
    p.main_term = Rational(-1) - Rational(1, q - 1);
  if (eta(n)) {
    Rational inner = 0;
    for (int d = 1; d <= n / 2; ++d) {
      if ((n / 2) % d != 0) continue;
      const BigInt norm = big_pow(q, d);
      inner += Rational(pi_q_formula(q, d) * d, norm + 1);
    }
    p.correction = inner / Rational(big_pow(q, n / 2));
  }
  const double qd = q;
  p.error_scale = n * std::pow(qd, n / 2.0 - 2 * g) + g * std::pow(qd, -g);
  return p;
}

std::optional<Rational> pair_prediction(std::uint32_t q, int m, int n, int g) {
  if (m < 1 || n < 1 || g < 1) throw std::invalid_argument("pair_prediction needs m, n, g >= 1");
  if (m > n) std::swap(m, n);
  if (m + n >= 4 * g) return std::nullopt;
  const Rational inv = Rational(1, q - 1);
  const int em = eta(m), en = eta(n), emn = eta(m + n);
  if (m == n) {
    if (n < g) return Rational(n + en);
    if (n == g) return Rational(n + en) + inv;
    if (n < 2 * g) return Rational(n - 1 + en);
    return std::nullopt;
  }
  if (m + n == 2 * g) return Rational(em * en) + inv;
  if (n == 2 * g) return Rational(em * en - emn) + em * inv;
  if (n - m == 2 * g) return -Rational(q, q - 1) * emn;
  if (m + n < 2 * g) return Rational(em * en);
  if (n < 2 * g) return Rational(em * en - emn);
  if (n - m < 2 * g) return Rational(-emn);
  return Rational(0);
}

EnsembleReport report(const EnsembleAccumulator& acc, double warn_threshold) {
  EnsembleReport out{acc.q, acc.g, acc.exhaustive, acc.curve_count, {}, {}};
  for (int n = 1; n <= acc.n_max; ++n) {
    const Prediction p = trace_prediction(acc.q, n, acc.g);
    ReportRow row;
    row.n = n;
    row.numerator = acc.sum_s[n];
    row.average = acc.average_trace(n);
    row.std_error = acc.exhaustive ? 0.0 : acc.standard_error(n);
    row.prediction = p.total();
    row.usp_moment = usp_trace_moment(n, acc.g);
    if (n % 2 == 0)
      row.residual = to_double(acc.scaled_average(n) / Rational(big_pow(acc.q, n / 2)) - row.prediction);
    else
      row.residual = row.average - to_double(row.prediction);
    row.error_scale = p.error_scale;
    row.ratio = std::fabs(row.residual) / row.error_scale;
    row.prime_part = acc.prime_part[n];
    row.square_part = acc.square_part[n];
    row.higher_part = acc.higher_part[n];
    if (row.ratio > warn_threshold)
      log_event(LogLevel::warn, "residual_ratio_high",
                {{"q", std::to_string(acc.q)}, {"g", std::to_string(acc.g)}, {"n", std::to_string(n)},
                 {"ratio", std::to_string(row.ratio)}});
    out.rows.push_back(std::move(row));
  }
  for (const auto& [key, total] : acc.pair_sums) {
    const auto [m, n] = key;
    PairReportRow row{m, n, total, acc.pair_average(m, n), pair_prediction(acc.q, m, n, acc.g),
                      usp_pair_moment(m, n, acc.g), std::nullopt};
    if (row.prediction) row.residual = row.average - to_double(*row.prediction);
    out.pair_rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace hyptrace
