#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sgw/grid.hpp"
#include "sgw/quadrature.hpp"
#include "sgw/roots.hpp"
#include "sgw/shanks.hpp"
#include "sgw/stencil.hpp"

using namespace sgw;

namespace {

template <typename F>
errc thrown_code(F&& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  FAIL("expected sgw::error");
  return errc::io;
}

}  // namespace

TEST_CASE("UniformGrid basic layout") {
  UniformGrid g(0.0, 1.0, 21);
  CHECK(g.spacing() == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(20) == doctest::Approx(1.0).epsilon(1e-15));

  UniformGrid c(-1.0, 1.0, 20, true);
  CHECK(c.spacing() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(c.node(0) == doctest::Approx(-0.95).epsilon(1e-15));
  CHECK(c.node(19) == doctest::Approx(0.95).epsilon(1e-15));
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(c.node(i) > c.lower());
    CHECK(c.node(i) < c.upper());
  }

  CHECK(thrown_code([] { UniformGrid g2(0.0, 1.0, 16); }) == errc::dimension);
  CHECK(thrown_code([] { UniformGrid g2(1.0, 0.0, 21); }) == errc::config);
}

TEST_CASE("fd_weights reproduce monomial derivatives") {
  std::vector<double> xs = {-1.3, -0.4, 0.0, 0.7, 1.1, 2.0};
  for (int m = 0; m <= 2; ++m) {
    auto w = fd_weights(0.3, xs, m);
    for (int k = 0; k <= 5; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) acc += w[i] * std::pow(xs[i], k);
      // d^m/dx^m x^k at 0.3
      double exact = 1.0;
      for (int j = 0; j < m; ++j) exact *= (k - j);
      exact = (k - m >= 0) ? exact * std::pow(0.3, k - m) : 0.0;
      CHECK(acc == doctest::Approx(exact).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("order-8 stencils differentiate degree-8 polynomials exactly") {
  const auto& st = StencilSet::first_derivative();
  const std::size_t n = 33;
  const double h = 0.1;
  for (int deg = 0; deg <= 8; ++deg) {
    std::vector<double> f(n), exact(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = -1.6 + h * static_cast<double>(i);
      f[i] = std::pow(x, deg);
      exact[i] = deg == 0 ? 0.0 : deg * std::pow(x, deg - 1);
    }
    auto d = fd_derivative(f, st, h);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(d[i] == doctest::Approx(exact[i]).epsilon(1e-8).scale(10.0));
  }
}

TEST_CASE("fd_derivative converges at 8th order on sin") {
  const auto& st = StencilSet::first_derivative();
  auto max_err = [&](std::size_t n) {
    const double h = 1.0 / static_cast<double>(n - 1);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::sin(3.0 * h * static_cast<double>(i));
    auto d = fd_derivative(f, st, h);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      e = std::max(e, std::abs(d[i] - 3.0 * std::cos(3.0 * h * static_cast<double>(i))));
    return e;
  };
  const double e1 = max_err(33), e2 = max_err(65);
  const double order = std::log2(e1 / e2);
  CHECK(order > 7.0);
  CHECK(order < 9.5);
}

TEST_CASE("KO dissipation annihilates smooth data and damps the Nyquist mode") {
  const std::size_t n = 41;
  const double h = 0.05, sigma = 0.02;
  std::vector<double> f(n);

  for (std::size_t i = 0; i < n; ++i) f[i] = 2.7;
  auto k0 = ko_dissipation(f, sigma, h);
  for (double v : k0) CHECK(std::abs(v) < 1e-12);

  // polynomial of degree 9 is in the null space of the 10th-difference filter
  for (std::size_t i = 0; i < n; ++i) {
    const double x = h * static_cast<double>(i);
    f[i] = 1.0 + x * (0.5 + x * (0.25 + x * (1.0 + x * (0.7 + x * (0.3 + x * (0.2 + x * (0.1 + x * (0.05 + x * 0.01))))))));
  }
  auto k9 = ko_dissipation(f, sigma, h);
  for (double v : k9) CHECK(std::abs(v) < 1e-6);

  for (std::size_t i = 0; i < n; ++i) f[i] = (i % 2 == 0) ? 1.0 : -1.0;
  auto kn = ko_dissipation(f, sigma, h);
  double inner = 0.0;
  for (std::size_t i = 0; i < n; ++i) inner += f[i] * kn[i];
  CHECK(inner < 0.0);  // strictly damping
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(kn[i] == 0.0);
    CHECK(kn[n - 1 - i] == 0.0);
  }
}

TEST_CASE("grid quadrature: exactness and order") {
  const std::size_t n = 25;  // 24 intervals = 4 blocks, no remainder
  const double h = 1.0 / static_cast<double>(n - 1);
  std::vector<double> f(n);

  for (std::size_t i = 0; i < n; ++i) f[i] = 1.0;
  CHECK(quadrature(f, h) == doctest::Approx(1.0).epsilon(1e-14));

  for (std::size_t i = 0; i < n; ++i) f[i] = std::pow(h * static_cast<double>(i), 7);
  CHECK(quadrature(f, h) == doctest::Approx(0.125).epsilon(1e-13));

  // remainder path: 22 nodes = 3 blocks + 3 intervals, degree 6 stays exact
  const std::size_t m = 22;
  const double hm = 1.0 / static_cast<double>(m - 1);
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i) g[i] = std::pow(hm * static_cast<double>(i), 6);
  CHECK(quadrature(g, hm) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));

  auto err_x8 = [](std::size_t nn) {
    const double hh = 1.0 / static_cast<double>(nn - 1);
    std::vector<double> v(nn);
    for (std::size_t i = 0; i < nn; ++i) v[i] = std::pow(hh * static_cast<double>(i), 8);
    return std::abs(quadrature(v, hh) - 1.0 / 9.0);
  };
  const double ratio = err_x8(25) / err_x8(49);
  CHECK(ratio > 50.0);  // order >= 6 (expect ~2^8 on full blocks)
}

TEST_CASE("grid quadrature: zero-mode normalization closed form") {
  // integral of 2^(-1/2) sech^2(sqrt(2) r) over the line equals 1
  const std::size_t n = 4001;
  const double L = 20.0, h = 2.0 * L / static_cast<double>(n - 1);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = -L + h * static_cast<double>(i);
    const double c = std::cosh(std::numbers::sqrt2 * r);
    f[i] = (1.0 / std::numbers::sqrt2) / (c * c);
  }
  CHECK(quadrature(f, h) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adaptive Gauss-Kronrod") {
  auto r1 = adaptive_integrate([](double x) { return std::pow(x, 8); }, 0.0, 1.0);
  CHECK(r1.value == doctest::Approx(1.0 / 9.0).epsilon(1e-14));

  auto r2 = adaptive_integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0);
  CHECK(r2.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  CHECK(std::abs(r2.value - std::sqrt(std::numbers::pi)) <= std::max(r2.error, 1e-15));

  auto r3 = adaptive_integrate([](double x) { return std::sin(x); }, 0.0,
                               40.0 * std::numbers::pi, 1e-13, 1e-13);
  CHECK(std::abs(r3.value) < 1e-10);

  using cd = std::complex<double>;
  auto r4 = adaptive_integrate_complex(
      [](double x) { return std::exp(cd(0.0, 3.0 * x)) * std::exp(-x * x); }, -8.0, 8.0);
  const double exact = std::sqrt(std::numbers::pi) * std::exp(-9.0 / 4.0);  // Gaussian transform
  CHECK(r4.value.real() == doctest::Approx(exact).epsilon(1e-12));
  CHECK(std::abs(r4.value.imag()) < 1e-13);
}

TEST_CASE("shanks acceleration") {
  // geometric transient is removed exactly
  std::vector<double> a(6);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = 1.0 - std::pow(2.0, -static_cast<double>(j));
  auto r = shanks_accelerate(a);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_FALSE(r.degraded);

  // alternating harmonic partial sums -> ln 2
  std::vector<double> s;
  double acc = 0.0;
  for (int k = 0; k < 10; ++k) {
    acc += (k % 2 == 0 ? 1.0 : -1.0) / (k + 1.0);
    s.push_back(acc);
  }
  auto rl = shanks_accelerate(s);
  CHECK(std::abs(rl.value - std::log(2.0)) < 1e-6);

  std::vector<double> c(5, 3.14);
  auto rc = shanks_accelerate(c);
  CHECK(rc.degraded);
  CHECK(rc.value == 3.14);
}

TEST_CASE("bisection and secant") {
  auto root = bisect_root([](double x) { return std::cos(x); }, 1.0, 2.0, 1e-14);
  CHECK(root == doctest::Approx(std::numbers::pi / 2).epsilon(1e-13));

  CHECK(thrown_code([] {
          bisect_root([](double x) { return 1.0 + x * x; }, 0.0, 1.0, 1e-12);
        }) == errc::bracket);

  auto s = secant_refine([](double x) { return std::cos(x); }, 1.4, 1.6, 1e-15);
  CHECK(s == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
}
