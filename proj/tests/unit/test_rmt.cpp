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
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"

#include "hyptrace/rmt.hpp"

using namespace hyptrace;

namespace {

// Weyl integration over USp(2g): eigenangles theta_1..theta_g in [0, pi] with
// density prod_{i<j} (cos theta_i - cos theta_j)^2 prod_j sin^2 theta_j. The
// midpoint rule is exact for these trigonometric polynomials at this grid size.
class WeylGrid {
 public:
  WeylGrid(int g, int points) : g_(g), points_(points) {}

  template <class F>
  double average(F&& integrand) const {
    std::vector<int> idx(g_, 0);
    std::vector<double> theta(g_);
    double num = 0, den = 0;
    for (;;) {
      for (int j = 0; j < g_; ++j) theta[j] = (idx[j] + 0.5) * std::numbers::pi / points_;
      double w = 1;
      for (int i = 0; i < g_; ++i) {
        w *= std::sin(theta[i]) * std::sin(theta[i]);
        for (int j = i + 1; j < g_; ++j) {
          const double d = std::cos(theta[i]) - std::cos(theta[j]);
          w *= d * d;
        }
      }
      num += w * integrand(theta);
      den += w;
      int k = 0;
      while (k < g_ && ++idx[k] == points_) idx[k++] = 0;
      if (k == g_) break;
    }
    return num / den;
  }

 private:
  int g_;
  int points_;
};

double trace_power(const std::vector<double>& theta, int n) {
  double t = 0;
  for (double a : theta) t += 2 * std::cos(n * a);
  return t;
}

double triangle(double u, double s) { return std::max(0.0, 1 - std::fabs(u) / s); }

}  // namespace

TEST_CASE("trace moment examples") {
  CHECK(usp_trace_moment(0, 3) == 6);
  CHECK(usp_trace_moment(1, 3) == 0);
  CHECK(usp_trace_moment(2, 3) == -1);
  CHECK(usp_trace_moment(6, 3) == -1);
  CHECK(usp_trace_moment(8, 3) == 0);
  CHECK(usp_pair_moment(1, 1, 1) == 1);
  CHECK(usp_pair_moment(2, 2, 1) == 2);
  CHECK(usp_pair_moment(3, 3, 1) == 2);
  CHECK(usp_pair_moment(2, 4, 3) == 1);
  CHECK(usp_pair_moment(3, 5, 3) == -1);
  CHECK(usp_pair_moment(1, 9, 3) == 0);
  CHECK_THROWS(usp_trace_moment(1, 0));
  CHECK_THROWS(usp_pair_moment(0, 1, 1));
}

TEST_CASE("moments are even and symmetric") {
  for (int g = 1; g <= 6; ++g)
    for (int n = 1; n <= 5 * g; ++n) {
      REQUIRE(usp_trace_moment(-n, g) == usp_trace_moment(n, g));
      for (int m = 1; m <= 5 * g; ++m) REQUIRE(usp_pair_moment(m, n, g) == usp_pair_moment(n, m, g));
    }
}

TEST_CASE("moments against Weyl integration") {
  for (int g = 1; g <= 3; ++g) {
    const WeylGrid grid(g, 32);
    CAPTURE(g);
    for (int n = 0; n <= 4 * g + 2; ++n) {
      CAPTURE(n);
      REQUIRE(grid.average([&](const auto& th) { return trace_power(th, n); }) ==
              doctest::Approx(usp_trace_moment(n, g)).epsilon(1e-9).scale(1));
    }
    for (int m = 1; m <= 2 * g + 1; ++m)
      for (int n = m; n <= 2 * g + 1; ++n) {
        CAPTURE(m);
        CAPTURE(n);
        REQUIRE(grid.average([&](const auto& th) { return trace_power(th, m) * trace_power(th, n); }) ==
                doctest::Approx(usp_pair_moment(m, n, g)).epsilon(1e-9).scale(1));
      }
  }
}

TEST_CASE("one-level average examples") {
  auto tri2 = [](const Rational& u) { return Rational(1) - abs(u) / 2; };
  CHECK(usp_one_level_exact(tri2, 2) == Rational(3, 8));
  CHECK(usp_one_level_exact(tri2, 1) == Rational(1, 2));
  auto tri1 = [](const Rational& u) { return abs(u) >= 1 ? Rational(0) : Rational(1) - abs(u); };
  CHECK(usp_one_level_exact(tri1, 2) == Rational(3, 4));
  CHECK(usp_one_level([](double u) { return triangle(u, 2); }, 2) == doctest::Approx(0.375));
  CHECK_THROWS(usp_one_level([](double) { return 1.0; }, 0));
}

TEST_CASE("Fourier assembly equals the closed form exactly") {
  auto tri = [](const Rational& s) {
    return [s](const Rational& u) { return abs(u) >= s ? Rational(0) : Rational(1) - abs(u) / s; };
  };
  auto bump = [](const Rational& u) { return abs(u) >= 1 ? Rational(0) : (Rational(1) - u * u) * (Rational(1) - u * u); };
  for (int g = 1; g <= 8; ++g) {
    for (const Rational& s : {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)}) {
      REQUIRE(usp_one_level_fourier_exact(tri(s), g, 2 * g) == usp_one_level_exact(tri(s), g));
      REQUIRE(usp_one_level_fourier_exact(tri(s), g, 6 * g) == usp_one_level_exact(tri(s), g));
    }
    REQUIRE(usp_one_level_fourier_exact(bump, g, 4 * g) == usp_one_level_exact(bump, g));
    const double a = usp_one_level_fourier([](double u) { return triangle(u, 1.7); }, g, 4 * g);
    REQUIRE(a == doctest::Approx(usp_one_level([](double u) { return triangle(u, 1.7); }, g)).epsilon(1e-12));
  }
}

TEST_CASE("one-level average approaches the large-g density") {
  const int g = 200;
  // raised cosine with support 4
  auto cosine = [](double u) {
    const double s = 4;
    return std::fabs(u) >= s ? 0.0 : 0.5 * (1 + std::cos(std::numbers::pi * u / s));
  };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(cosine, 0.0, 1.0);
  CHECK(usp_one_level(cosine, g) == doctest::Approx(cosine(0) - integral).epsilon(1e-3));
  // a linear piece: the right Riemann sum misses the integral by (f(1) - f(0)) / 2g
  auto tri = [](double u) { return triangle(u, 2); };
  const double exact = 1 - 0.75 - (tri(1) - tri(0)) / (2 * g);
  CHECK(usp_one_level(tri, g) == doctest::Approx(exact).epsilon(1e-12));
}
