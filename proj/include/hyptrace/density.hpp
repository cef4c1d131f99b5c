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

#include <filesystem>
#include <string>
#include <vector>

#include "hyptrace/bigint.hpp"
#include "hyptrace/ensemble.hpp"

namespace hyptrace {

/**
 * Even test function given by its Fourier transform
 * fhat(u) = int f(x) e^{-2 pi i x u} dx, nonzero only on (-sigma, sigma) with
 * 0 < sigma <= 2. Ensemble runs need sigma < 2.
 *
 *   triangle:      fhat = (1 - |u|/sigma)_+,  f(x) = sigma sinc^2(sigma x)
 *   raised cosine: fhat = (1 + cos(pi u / sigma)) / 2 on |u| < sigma,
 *                  f(x) = sigma sinc(2 sigma x) + sigma/2 (sinc(2 sigma x + 1) + sinc(2 sigma x - 1))
 *   tabulated:     linear interpolation of samples on a uniform grid over [0, sigma]
 *
 * with sinc(y) = sin(pi y) / (pi y).
 */
class TestFunction {
 public:
  enum class Kind { zero, triangle, raised_cosine, tabulated };

  static TestFunction zero();
  static TestFunction triangle(double sigma);
  static TestFunction raised_cosine(double sigma);
  /// samples[i] = fhat(i * sigma / (samples.size() - 1)); the last sample must be 0.
  static TestFunction tabulated(std::vector<double> samples, double sigma);
  /// File with a "# sigma=<value>" line, a "u,fhat" header and rows on a uniform grid from 0 to sigma.
  static TestFunction from_file(const std::filesystem::path& file);
  /// "zero", "triangle:<sigma>", "cosine:<sigma>" or "file:<path>".
  static TestFunction parse(const std::string& spec);

  Kind kind() const noexcept { return kind_; }
  double sigma() const noexcept { return sigma_; }
  std::string describe() const;

  double fhat(double u) const;
  bool has_closed_form() const noexcept { return kind_ != Kind::tabulated; }
  /// f(x); throws std::logic_error for tabulated functions.
  double f(double x) const;

 private:
  TestFunction(Kind kind, double sigma) : kind_(kind), sigma_(sigma) {}

  Kind kind_;
  double sigma_;
  std::vector<double> samples_;
  std::string source_;
};

/// Largest n with n / 2g < sigma, the last nonzero Fourier term.
int fourier_terms(const TestFunction& fn, int g);

/// Z_f = fhat(0) + (1/g) sum_{n >= 1} fhat(n / 2g) s_n / q^{n/2}, with s[n] the
/// power sums of a curve of genus g. Throws std::invalid_argument if s is too short.
double z_f_fourier(const std::vector<BigInt>& s, std::uint32_t q, const TestFunction& fn, int g);

struct DirectSum {
  double value;
  double tail_bound;  // bound on the neglected part of the periodized sum
  long window;        // |k| <= window summed term by term
};

/// sum_j F(theta_j) with F(theta) = sum_k f(2g (theta / 2 pi - k)). The window
/// grows until the tail bound is below tol; throws std::runtime_error when that
/// needs more than max_window terms, std::logic_error without a closed form.
DirectSum z_f_direct(const std::vector<double>& angles, const TestFunction& fn, int g, double tol = 1e-9,
                     long max_window = 10'000'000);

/// sum_{m=1}^{M} m pi_q(m) / (q^{2m} - 1), summed exactly, then rounded.
double prime_sum_truncated(std::uint32_t q, int M);

/// Smallest M whose tail bound sum_{m > M} m q^{-m} / (1 - q^{-m}) is below tol.
int prime_sum_cutoff(std::uint32_t q, double tol);

/// The full prime sum to within tol.
double prime_sum(std::uint32_t q, double tol = 1e-13);

/// fhat(0) sum_P deg P / (|P|^2 - 1) - fhat(1) / (q - 1).
double dev(const TestFunction& fn, std::uint32_t q);

struct OneLevelRow {
  int g;
  std::uint64_t curves;
  double average;  // <Z_f> over the ensemble
  double usp;      // average over USp(2g)
  double dev_over_g;
  double residual;  // average - usp - dev/g
  double scaled_residual;  // g * residual
};

/// <Z_f> from ensemble trace sums. The accumulator must reach fourier_terms(fn, g).
double z_f_average(const EnsembleAccumulator& acc, const TestFunction& fn);

OneLevelRow one_level_row(const EnsembleAccumulator& acc, const TestFunction& fn);

/// Rows for each genus in turn, exhaustive or sampled per base_spec. Rejects
/// sigma >= 2.
std::vector<OneLevelRow> one_level_compare(const EnsembleSpec& base_spec, const std::vector<int>& genera,
                                           const TestFunction& fn, unsigned threads = 1);

}  // namespace hyptrace
