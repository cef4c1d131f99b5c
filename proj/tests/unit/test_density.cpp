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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"

#include "hyptrace/arith.hpp"
#include "hyptrace/density.hpp"
#include "hyptrace/ensemble.hpp"
#include "hyptrace/lfunction.hpp"
#include "hyptrace/rmt.hpp"

using namespace hyptrace;

namespace {

const Field& F3() { return field_make(3); }

// f(x) from fhat by numerical inversion.
double inverse_transform(const TestFunction& fn, double x) {
  auto integrand = [&](double u) { return fn.fhat(u) * std::cos(2 * std::numbers::pi * x * u); };
  return 2 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, fn.sigma(), 12, 1e-13);
}

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("test function shapes") {
  const TestFunction t = TestFunction::triangle(1);
  CHECK(t.fhat(0) == 1);
  CHECK(t.fhat(0.5) == doctest::Approx(0.5));
  CHECK(t.fhat(-0.25) == doctest::Approx(0.75));
  CHECK(t.fhat(1.2) == 0);
  CHECK(t.f(0) == doctest::Approx(1));
  const TestFunction c = TestFunction::raised_cosine(1.5);
  CHECK(c.fhat(0) == doctest::Approx(1));
  CHECK(c.fhat(0.75) == doctest::Approx(0.5));
  CHECK(c.fhat(1.5) == doctest::Approx(0).scale(1));
  CHECK(c.f(0) == doctest::Approx(1.5));
  CHECK(TestFunction::zero().fhat(0) == 0);
  CHECK(TestFunction::parse("triangle:1.9").describe() == "triangle:1.9");
  CHECK(TestFunction::parse("cosine:0.5").kind() == TestFunction::Kind::raised_cosine);
  CHECK_THROWS(TestFunction::parse("triangle:"));
  CHECK_THROWS(TestFunction::parse("triangle:1x"));
  CHECK_THROWS(TestFunction::parse("gauss:1"));
  CHECK_THROWS(TestFunction::triangle(0));
  CHECK_THROWS(TestFunction::triangle(2.5));
  CHECK_NOTHROW(TestFunction::triangle(2));
}

TEST_CASE("closed forms of f invert fhat") {
  for (const TestFunction& fn : {TestFunction::triangle(0.7), TestFunction::triangle(1.9), TestFunction::raised_cosine(1),
                                 TestFunction::raised_cosine(1.9)})
    for (double x : {0.0, 0.1, 0.37, 0.5, 1.0, 2.3, 7.9})
      REQUIRE(fn.f(x) == doctest::Approx(inverse_transform(fn, x)).epsilon(1e-10).scale(1));
}

TEST_CASE("Fourier term counts") {
  CHECK(fourier_terms(TestFunction::triangle(1), 1) == 1);
  CHECK(fourier_terms(TestFunction::triangle(1.9), 3) == 11);
  CHECK(fourier_terms(TestFunction::triangle(1.5), 2) == 5);
  CHECK(fourier_terms(TestFunction::zero(), 4) == 0);
}

TEST_CASE("single curve examples") {
  const LPolynomial L = l_function(Poly(F3(), {0, 1, 0, 1}));
  const FrobeniusData fr = power_sums(L, 8);
  const auto angles = eigenangles(L);
  CHECK(z_f_fourier(fr.s, 3, TestFunction::triangle(1), 1) == doctest::Approx(1));
  CHECK(z_f_fourier(fr.s, 3, TestFunction::raised_cosine(1.5), 1) == doctest::Approx(0.5));
  const double tri = z_f_fourier(fr.s, 3, TestFunction::triangle(1.9), 1);
  CHECK(tri == doctest::Approx(1.0 / 19));
  CHECK(z_f_direct(angles, TestFunction::triangle(1.9), 1).value == doctest::Approx(tri).epsilon(1e-9));
  CHECK(z_f_direct(angles, TestFunction::triangle(2), 1).value ==
        doctest::Approx(z_f_fourier(fr.s, 3, TestFunction::triangle(2), 1)).epsilon(1e-9));
  CHECK_THROWS(z_f_fourier(power_sums(L, 2).s, 3, TestFunction::triangle(1.9), 1));
  CHECK_THROWS_AS(z_f_direct(angles, TestFunction::tabulated({1, 0}, 1), 1), std::logic_error);
}

TEST_CASE("Fourier and direct sums agree on every F_3 curve of degree <= 7") {
  const std::vector<TestFunction> fns{TestFunction::triangle(1),      TestFunction::triangle(1.5),
                                      TestFunction::triangle(1.9),    TestFunction::raised_cosine(1),
                                      TestFunction::raised_cosine(1.5), TestFunction::raised_cosine(1.9)};
  std::uint64_t curves = 0;
  for (int d = 3; d <= 7; ++d)
    for (const Poly& D : monic_polys(F3(), d)) {
      if (!is_squarefree(D)) continue;
      const LPolynomial L = l_function(D);
      const int g = L.delta;
      const FrobeniusData fr = power_sums(L, 4 * g);
      const auto angles = eigenangles(L);
      for (const TestFunction& fn : fns) {
        const double a = z_f_fourier(fr.s, 3, fn, g);
        const DirectSum b = z_f_direct(angles, fn, g, 1e-10);
        CAPTURE(to_string(D));
        CAPTURE(fn.describe());
        REQUIRE(b.tail_bound <= 1e-10);
        REQUIRE(std::fabs(a - b.value) < 1e-7);
      }
      ++curves;
    }
  CHECK(curves == 2 * (9 + 27 + 81 + 243 + 729));
}

TEST_CASE("tabulated test function from file") {
  const TestFunction fn = TestFunction::parse(std::string("file:") + HYPTRACE_DATA_DIR + "/triangle_1.5.csv");
  CHECK(fn.kind() == TestFunction::Kind::tabulated);
  CHECK(fn.sigma() == 1.5);
  CHECK_FALSE(fn.has_closed_form());
  CHECK_THROWS_AS(fn.f(0), std::logic_error);
  const TestFunction tri = TestFunction::triangle(1.5);
  for (double u = -2; u <= 2; u += 0.0137) REQUIRE(fn.fhat(u) == doctest::Approx(tri.fhat(u)).scale(1));
  const FrobeniusData fr = power_sums(l_function(Poly(F3(), {1, 2, 0, 1, 2, 1})), 8);
  CHECK(z_f_fourier(fr.s, 3, fn, 2) == doctest::Approx(z_f_fourier(fr.s, 3, tri, 2)));

  CHECK_THROWS(TestFunction::from_file(write_temp("no_sigma.csv", "u,fhat\n0,1\n1,0\n")));
  CHECK_THROWS(TestFunction::from_file(write_temp("bad_header.csv", "# sigma=1\nx,y\n0,1\n1,0\n")));
  CHECK_THROWS(TestFunction::from_file(write_temp("uneven.csv", "# sigma=1\nu,fhat\n0,1\n0.4,0.5\n1,0\n")));
  CHECK_THROWS(TestFunction::from_file(write_temp("nonzero_end.csv", "# sigma=1\nu,fhat\n0,1\n1,0.2\n")));
  CHECK_THROWS(TestFunction::from_file("/nonexistent/fhat.csv"));
}

TEST_CASE("prime sum") {
  // sum over primes of deg P / (|P|^2 - 1) telescopes to sum_N q^{-N}
  for (std::uint32_t q : {3u, 5u, 7u, 9u, 11u}) {
    CAPTURE(q);
    CHECK(prime_sum(q) == doctest::Approx(1.0 / (q - 1)).epsilon(1e-13));
    CHECK(prime_sum_truncated(q, 40) == doctest::Approx(1.0 / (q - 1)).epsilon(1e-13));
    CHECK(prime_sum_truncated(q, 50) == doctest::Approx(prime_sum_truncated(q, 40)).epsilon(1e-15));
    const int M = prime_sum_cutoff(q, 1e-10);
    CHECK(std::fabs(prime_sum_truncated(q, M) - 1.0 / (q - 1)) < 1e-10);
  }
  CHECK(prime_sum_truncated(3, 1) == doctest::Approx(3.0 / 8));
  CHECK(prime_sum_truncated(3, 2) == doctest::Approx(3.0 / 8 + 2 * 3.0 / 80));
}

TEST_CASE("lower order term") {
  CHECK(dev(TestFunction::triangle(1.5), 3) == doctest::Approx(1.0 / 3));
  CHECK(dev(TestFunction::triangle(1), 3) == doctest::Approx(0.5));
  CHECK(dev(TestFunction::raised_cosine(1.9), 5) ==
        doctest::Approx((1 - TestFunction::raised_cosine(1.9).fhat(1)) / 4));
  CHECK(dev(TestFunction::zero(), 7) == 0);
}

TEST_CASE("ensemble average of Z_f") {
  const TestFunction fn = TestFunction::triangle(1.5);
  const int g = 2;
  const EnsembleAccumulator acc = accumulate(EnsembleSpec{&F3(), g}, fourier_terms(fn, g));
  double fourier = 0, direct = 0;
  for_each_curve(EnsembleSpec{&F3(), g}, [&](const Poly& Q) {
    const LPolynomial L = l_function(Q);
    fourier += z_f_fourier(power_sums(L, fourier_terms(fn, g)).s, 3, fn, g);
    direct += z_f_direct(eigenangles(L), fn, g).value;
  });
  CHECK(z_f_average(acc, fn) == doctest::Approx(fourier / 162).epsilon(1e-12));
  CHECK(z_f_average(acc, fn) == doctest::Approx(direct / 162).epsilon(1e-8));

  const OneLevelRow row = one_level_row(acc, fn);
  CHECK(row.g == 2);
  CHECK(row.curves == 162);
  CHECK(row.usp == doctest::Approx(usp_one_level([&](double u) { return fn.fhat(u); }, 2)));
  CHECK(row.dev_over_g == doctest::Approx(dev(fn, 3) / 2));
  CHECK(row.residual == doctest::Approx(row.average - row.usp - row.dev_over_g));
  CHECK(row.scaled_residual == doctest::Approx(2 * row.residual));
  CHECK_THROWS(z_f_average(accumulate(EnsembleSpec{&F3(), g}, 2), fn));

  const auto rows = one_level_compare(EnsembleSpec{&F3(), 1}, {1, 2}, fn);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].average == doctest::Approx(row.average));
}

TEST_CASE("zero test function and support limits") {
  const EnsembleAccumulator acc = accumulate(EnsembleSpec{&F3(), 1}, 2);
  CHECK(z_f_average(acc, TestFunction::zero()) == 0);
  CHECK(z_f_direct({0.3, -0.3}, TestFunction::zero(), 1).value == 0);
  CHECK_THROWS_AS(one_level_compare(EnsembleSpec{&F3(), 1}, {1}, TestFunction::triangle(2)), std::invalid_argument);
  CHECK_THROWS_AS(one_level_compare(EnsembleSpec{&F3(), 1}, {1}, TestFunction::raised_cosine(2)), std::invalid_argument);
}
