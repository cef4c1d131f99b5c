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

#include "hyptrace/density.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/trigamma.hpp>

#include "hyptrace/arith.hpp"
#include "hyptrace/rmt.hpp"

namespace hyptrace {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double y) {
  if (std::fabs(y) < 1e-8) return 1.0 - (kPi * y) * (kPi * y) / 6.0;
  return std::sin(kPi * y) / (kPi * y);
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0 && sigma <= 2.0)) throw std::invalid_argument("support bound sigma must lie in (0, 2]");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_sigma(double sigma) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, sigma);
  return std::string(buf, res.ptr);
}

}  // namespace

TestFunction TestFunction::zero() { return TestFunction(Kind::zero, 1.0); }

TestFunction TestFunction::triangle(double sigma) {
  check_sigma(sigma);
  return TestFunction(Kind::triangle, sigma);
}

TestFunction TestFunction::raised_cosine(double sigma) {
  check_sigma(sigma);
  return TestFunction(Kind::raised_cosine, sigma);
}

TestFunction TestFunction::tabulated(std::vector<double> samples, double sigma) {
  check_sigma(sigma);
  if (samples.size() < 2) throw std::invalid_argument("tabulated test function needs at least two samples");
  if (std::fabs(samples.back()) > 1e-12) throw std::invalid_argument("tabulated fhat must vanish at u = sigma");
  TestFunction fn(Kind::tabulated, sigma);
  fn.samples_ = std::move(samples);
  return fn;
}

TestFunction TestFunction::from_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open test function file " + file.string());
  std::string line;
  double sigma = -1.0;
  bool header = false;
  std::vector<double> us, values;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("sigma=");
      if (pos != std::string::npos) sigma = std::stod(line.substr(pos + 6));
      continue;
    }
    if (!header) {
      if (line != "u,fhat") throw std::invalid_argument("expected header u,fhat in " + file.string());
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed row in " + file.string() + ": " + line);
    us.push_back(std::stod(line.substr(0, comma)));
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (sigma <= 0.0) throw std::invalid_argument("missing '# sigma=' line in " + file.string());
  if (us.size() < 2) throw std::invalid_argument("too few samples in " + file.string());
  const double step = sigma / static_cast<double>(us.size() - 1);
  for (std::size_t i = 0; i < us.size(); ++i)
    if (std::fabs(us[i] - step * static_cast<double>(i)) > 1e-9 * std::max(1.0, sigma))
      throw std::invalid_argument("grid in " + file.string() + " is not uniform on [0, sigma]");
  TestFunction fn = tabulated(std::move(values), sigma);
  fn.source_ = file.string();
  return fn;
}

TestFunction TestFunction::parse(const std::string& spec) {
  if (spec == "zero") return zero();
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("test function spec must be kind:value, got " + spec);
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "file") return from_file(arg);
  double sigma = 0.0;
  try {
    std::size_t used = 0;
    sigma = std::stod(arg, &used);
    if (used != arg.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad support bound in test function spec " + spec);
  }
  if (kind == "triangle") return triangle(sigma);
  if (kind == "cosine") return raised_cosine(sigma);
  throw std::invalid_argument("unknown test function kind " + kind);
}

std::string TestFunction::describe() const {
  switch (kind_) {
    case Kind::zero: return "zero";
    case Kind::triangle: return "triangle:" + format_sigma(sigma_);
    case Kind::raised_cosine: return "cosine:" + format_sigma(sigma_);
    case Kind::tabulated: return "file:" + source_;
  }
  return "";
}

double TestFunction::fhat(double u) const {
  const double a = std::fabs(u);
  if (kind_ == Kind::zero || a >= sigma_) return 0.0;
  switch (kind_) {
    case Kind::triangle: return 1.0 - a / sigma_;
    case Kind::raised_cosine: return 0.5 * (1.0 + std::cos(kPi * a / sigma_));
    case Kind::tabulated: {
      const double pos = a / sigma_ * static_cast<double>(samples_.size() - 1);
      const auto i = static_cast<std::size_t>(pos);
      if (i + 1 >= samples_.size()) return samples_.back();
      const double frac = pos - static_cast<double>(i);
      return samples_[i] * (1.0 - frac) + samples_[i + 1] * frac;
    }
    default: return 0.0;
  }
}

double TestFunction::f(double x) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::triangle: {
      const double s = sinc(sigma_ * x);
      return sigma_ * s * s;
    }
    case Kind::raised_cosine: {
      const double y = 2.0 * sigma_ * x;
      return sigma_ * sinc(y) + 0.5 * sigma_ * (sinc(y + 1.0) + sinc(y - 1.0));
    }
    case Kind::tabulated: throw std::logic_error("tabulated test functions have no closed form for f");
  }
  return 0.0;
}

int fourier_terms(const TestFunction& fn, int g) {
  if (g < 1) throw std::invalid_argument("g must be >= 1");
  if (fn.kind() == TestFunction::Kind::zero) return 0;
  return static_cast<int>(std::ceil(2.0 * g * fn.sigma())) - 1;
}

double z_f_fourier(const std::vector<BigInt>& s, std::uint32_t q, const TestFunction& fn, int g) {
  const int terms = fourier_terms(fn, g);
  if (static_cast<int>(s.size()) - 1 < terms)
    throw std::invalid_argument("z_f_fourier needs s_n up to n = " + std::to_string(terms));
  double sum = 0.0;
  for (int n = 1; n <= terms; ++n)
    sum += fn.fhat(n / (2.0 * g)) * to_double(s[n]) / std::pow(static_cast<double>(q), n / 2.0);
  return fn.fhat(0.0) + sum / g;
}

DirectSum z_f_direct(const std::vector<double>& angles, const TestFunction& fn, int g, double tol, long max_window) {
  if (!fn.has_closed_form()) throw std::logic_error("z_f_direct needs a closed form for f");
  if (g < 1) throw std::invalid_argument("g must be >= 1");
  DirectSum out{0.0, 0.0, 0};
  if (fn.kind() == TestFunction::Kind::zero || angles.empty()) return out;
  const double N = 2.0 * g;
  const double sigma = fn.sigma();
  const double per_angle = tol / static_cast<double>(angles.size());
  const bool triangle = fn.kind() == TestFunction::Kind::triangle;
  // Triangle: f = (1 - cos(2 pi sigma x)) / (2 pi^2 sigma x^2); the 1/x^2 part of the
  // tail is summed exactly, the oscillating part bounded by summation by parts.
  const double sn = sigma * N;
  const bool integral_frequency = std::fabs(sn - std::round(sn)) < 1e-12;
  const double weight = 1.0 / (2.0 * kPi * kPi * sigma * N * N);
  auto tail_bound = [&](long K) {
    const double h = static_cast<double>(K) + 0.5;
    if (triangle) {
      if (integral_frequency) return 0.0;
      return 2.0 * weight / (h * h) / std::fabs(std::sin(kPi * sn));
    }
    // raised cosine: |f(x)| <= sigma / (pi |y| (y^2 - 1)), y = 2 sigma x
    const double y = 2.0 * sigma * N * (static_cast<double>(K) + 0.5);
    const double k0 = static_cast<double>(K) - 0.5;
    return 2.0 * sigma / (kPi * std::pow(2.0 * sigma * N, 3) * (1.0 - 1.0 / (y * y))) / (2.0 * k0 * k0);
  };
  long K = 64;
  while (tail_bound(K) > per_angle) {
    K *= 2;
    if (K > max_window) throw std::runtime_error("direct one-level sum: tail bound exceeds tolerance");
  }
  out.window = K;
  out.tail_bound = tail_bound(K) * static_cast<double>(angles.size());
  for (double theta : angles) {
    const double t = theta / (2.0 * kPi);
    double F = fn.f(N * t);
    for (long k = 1; k <= K; ++k) F += fn.f(N * (t - k)) + fn.f(N * (t + k));
    if (triangle) {
      const double kk = static_cast<double>(K) + 1.0;
      const double inverse_squares = boost::math::trigamma(kk - t) + boost::math::trigamma(kk + t);
      F += weight * inverse_squares;
      if (integral_frequency) F -= weight * std::cos(2.0 * kPi * sn * t) * inverse_squares;
    }
    out.value += F;
  }
  return out;
}

double prime_sum_truncated(std::uint32_t q, int M) {
  Rational sum = 0;
  for (int m = 1; m <= M; ++m) sum += Rational(pi_q_formula(q, m) * m, big_pow(q, 2 * m) - 1);
  return to_double(sum);
}

int prime_sum_cutoff(std::uint32_t q, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const long double qq = q;
  for (int M = 1; M < 10000; ++M) {
    long double tail = 0.0L;
    for (int m = M + 1; m <= M + 2000; ++m) {
      const long double qm = std::pow(qq, -m);
      const long double term = m * qm / (1.0L - qm);
      tail += term;
      if (term < 1e-30L) break;
    }
    if (tail < tol) return M;
  }
  throw std::runtime_error("prime sum cutoff not found");
}

double prime_sum(std::uint32_t q, double tol) { return prime_sum_truncated(q, prime_sum_cutoff(q, tol)); }

double dev(const TestFunction& fn, std::uint32_t q) {
  return fn.fhat(0.0) * prime_sum(q) - fn.fhat(1.0) / static_cast<double>(q - 1);
}

double z_f_average(const EnsembleAccumulator& acc, const TestFunction& fn) {
  const int terms = fourier_terms(fn, acc.g);
  if (acc.n_max < terms) throw std::invalid_argument("accumulator does not reach n = " + std::to_string(terms));
  double sum = 0.0;
  for (int n = 1; n <= terms; ++n) sum += fn.fhat(n / (2.0 * acc.g)) * acc.average_trace(n);
  return fn.fhat(0.0) + sum / acc.g;
}

OneLevelRow one_level_row(const EnsembleAccumulator& acc, const TestFunction& fn) {
  OneLevelRow row;
  row.g = acc.g;
  row.curves = acc.curve_count;
  row.average = z_f_average(acc, fn);
  row.usp = usp_one_level([&](double u) { return fn.fhat(u); }, acc.g);
  row.dev_over_g = dev(fn, acc.q) / acc.g;
  row.residual = row.average - row.usp - row.dev_over_g;
  row.scaled_residual = acc.g * row.residual;
  return row;
}

std::vector<OneLevelRow> one_level_compare(const EnsembleSpec& base_spec, const std::vector<int>& genera,
                                           const TestFunction& fn, unsigned threads) {
  if (fn.kind() != TestFunction::Kind::zero && fn.sigma() >= 2.0)
    throw std::invalid_argument("support must lie inside (-2, 2)");
  std::vector<OneLevelRow> rows;
  for (int g : genera) {
    EnsembleSpec spec = base_spec;
    spec.g = g;
    const EnsembleAccumulator acc = accumulate(spec, std::max(1, fourier_terms(fn, g)), {}, threads);
    rows.push_back(one_level_row(acc, fn));
  }
  return rows;
}

}  // namespace hyptrace
