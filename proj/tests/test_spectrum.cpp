#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sgw/kink.hpp"
#include "sgw/quadrature.hpp"
#include "sgw/spectrum.hpp"
#include "sgw/stencil.hpp"

using namespace sgw;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

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

// order-4 second derivative of a callable (5-point stencil)
template <typename F>
double fd5_2(F&& f, double x, double h) {
  std::vector<double> xs(5);
  for (int k = 0; k < 5; ++k) xs[k] = x + (k - 2) * h;
  const std::vector<double> w = fd_weights(x, xs, 2);
  double d = 0.0;
  for (int k = 0; k < 5; ++k) d += w[k] * f(xs[k]);
  return d;
}

// order-8 first derivative
template <typename F>
double fd9(F&& f, double x, double h) {
  std::vector<double> xs(9);
  for (int k = 0; k < 9; ++k) xs[k] = x + (k - 4) * h;
  const std::vector<double> w = fd_weights(x, xs, 1);
  double d = 0.0;
  for (int k = 0; k < 9; ++k) d += w[k] * f(xs[k]);
  return d;
}

}  // namespace

TEST_CASE("linearization potential: well depth, evenness, algebraic tail") {
  // V(0) = -4 sin^2(phi(0)) + 1/a^2: the trig term is -4 for odd n
  // (phi(0) = pi/2 mod pi) and 0 for even n (phi(0) = 0 mod pi).
  const Potential p1 = build_potential(solve_kink(WormholeConfig{1.0, 1}));
  CHECK(p1.value(0.0) == doctest::Approx(-3.0).epsilon(1e-12));
  const Potential p04 = build_potential(solve_kink(WormholeConfig{0.4, 1}));
  CHECK(p04.value(0.0) == doctest::Approx(2.25).epsilon(1e-12));
  const Potential p06 = build_potential(solve_kink(WormholeConfig{0.6, 2}));
  CHECK(p06.value(0.0) == doctest::Approx(1.0 / 0.36).epsilon(1e-12));

  // The kink is parity-symmetric about the throat, so V is exactly even.
  for (double r : {0.3, 1.7, 5.0, 31.0, 100.0}) CHECK(p1.value(r) == p1.value(-r));

  // Past the sampled window only the curvature term a^2/(r^2+a^2)^2 survives
  // (the trig well dies off exponentially); the handoff is smooth.
  CHECK(p1.tail_amplitude() == 1.0);
  const double R = p1.r_max();
  const double s = R + 5.0;
  CHECK(p1.value(s) == doctest::Approx(1.0 / ((s * s + 1.0) * (s * s + 1.0))).epsilon(1e-14));
  CHECK(std::abs(p1.value(R - 1e-9) - p1.value(R + 1e-9)) < 1e-12);

  CHECK(p1.samples().size() % 2 == 1);
}

TEST_CASE("flat-space limit: translational zero mode of the kink well") {
  // For the infinite-line kink well -4/cosh^2(sqrt(2) r) the lowest
  // eigenvalue of -d2/dr2 + 2 + V is exactly 0 (translation symmetry), with
  // eigenfunction proportional to the kink slope, sech(sqrt(2) r).
  const Potential pot([](double r) { return -4.0 / std::pow(std::cosh(kSqrt2 * r), 2); },
                      30.0, WormholeConfig{1.0, 1}, 0.0);
  EigenScan scan;
  scan.omega2_min = -0.5;
  scan.omega2_max = 0.5;
  const auto modes = gap_eigenvalues(pot, scan);
  REQUIRE(modes.size() == 1);
  CHECK(std::abs(modes[0].omega2) < 1e-8);
  CHECK(modes[0].parity == Parity::even);
  CHECK(modes[0].node_count == 0);
  for (double r : {0.0, 0.5, 1.0, 2.0, 4.0})
    CHECK(modes[0].eval(r) == doctest::Approx(sg_zero_mode(r)).epsilon(1e-6));
}

TEST_CASE("fundamental kink: single even gap mode, frequency vs throat radius") {
  const double expected[] = {1.0682500946, 0.6345150570, 0.4455492123};
  int i = 0;
  for (double a : {1.0, 2.0, 3.0}) {
    const auto modes = gap_eigenvalues(build_potential(solve_kink(WormholeConfig{a, 1})));
    REQUIRE(modes.size() == 1);
    CHECK(modes[0].omega == doctest::Approx(expected[i]).epsilon(2e-7));
    CHECK(modes[0].parity == Parity::even);
    CHECK(modes[0].node_count == 0);
    CHECK(!modes[0].near_threshold);
    CHECK(modes[0].omega == doctest::Approx(std::sqrt(modes[0].omega2)).epsilon(1e-14));
    ++i;
  }
  // Wide-throat scaling: the well flattens and the mode frequency falls off
  // as sqrt(2)/a (the binding energy approaches the continuum edge).
  const auto wide = gap_eigenvalues(build_potential(solve_kink(WormholeConfig{10.0, 1})));
  REQUIRE(wide.size() == 1);
  CHECK(wide[0].omega2 * 100.0 > 1.9);
  CHECK(wide[0].omega2 * 100.0 < 2.1);
}

TEST_CASE("unit-throat mode: normalization, Rayleigh quotient, residual") {
  const KinkProfile kink = solve_kink(WormholeConfig{1.0, 1});
  const Potential pot = build_potential(kink);
  const auto modes = gap_eigenvalues(pot);
  REQUIRE(modes.size() == 1);
  const ModeData& m = modes[0];

  CHECK(m.omega2 == doctest::Approx(1.1411582646).epsilon(1e-8));
  CHECK(m.eval(0.0) == doctest::Approx(0.8012599777).epsilon(1e-6));
  CHECK(m.eval(0.0) > 0.0);

  const double norm =
      adaptive_integrate([&](double r) { return m.eval(r) * m.eval(r); }, -25.0, 25.0).value;
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));

  // Rayleigh quotient of the dense eigenfunction reproduces omega^2.
  const double num = adaptive_integrate(
                         [&](double r) {
                           const double v = m.eval(r);
                           const double dv = fd9([&](double x) { return m.eval(x); }, r, 1e-3);
                           return dv * dv + (2.0 + pot.value(r)) * v * v;
                         },
                         -25.0, 25.0, 1e-10, 1e-12)
                         .value;
  CHECK(num / norm == doctest::Approx(m.omega2).epsilon(1e-6));

  // Pointwise eigenvalue equation -v'' + (2 + V) v = omega^2 v.
  for (double r : {0.0, 0.5, 1.0, 2.5, 5.0}) {
    const double v = m.eval(r);
    const double d2 = fd5_2([&](double x) { return m.eval(x); }, r, 5e-3);
    CHECK(std::abs(-d2 + (2.0 + pot.value(r)) * v - m.omega2 * v) < 1e-6);
  }

  // Sampled grid agrees with dense evaluation on its own nodes.
  const auto& g = m.grid();
  const auto& v = m.v();
  REQUIRE(v.size() == g.size());
  for (std::size_t j = 0; j < v.size(); j += v.size() / 7)
    CHECK(v[j] == doctest::Approx(m.eval(g.node(j))).epsilon(1e-10));
}

TEST_CASE("narrow throat: the even branch has left the gap") {
  // Below the even-channel threshold radius the curvature barrier 1/a^2
  // wins over the trig well and no bound state survives.
  const auto modes = gap_eigenvalues(build_potential(solve_kink(WormholeConfig{0.4, 1})));
  CHECK(modes.empty());

  // Negative windows are legal and empty for the fundamental kink.
  EigenScan below;
  below.omega2_min = -1.0;
  below.omega2_max = 0.0;
  const auto neg = gap_eigenvalues(build_potential(solve_kink(WormholeConfig{1.0, 1})), below);
  CHECK(neg.empty());
}

TEST_CASE("double kink: mode count and parity ladder") {
  const auto two = gap_eigenvalues(build_potential(solve_kink(WormholeConfig{2.0, 2})));
  REQUIRE(two.size() == 2);
  CHECK(two[0].omega2 < two[1].omega2);
  CHECK(two[0].parity == Parity::even);
  CHECK(two[0].node_count == 0);
  CHECK(two[1].parity == Parity::odd);
  CHECK(two[1].node_count == 1);

  // Between the two disappearance radii only the even mode remains.
  const auto one = gap_eigenvalues(build_potential(solve_kink(WormholeConfig{0.6, 2})));
  REQUIRE(one.size() == 1);
  CHECK(one[0].parity == Parity::even);

  // Parity filters select the channels independently.
  EigenScan odd_only;
  odd_only.include_even = false;
  const auto odd = gap_eigenvalues(build_potential(solve_kink(WormholeConfig{2.0, 2})), odd_only);
  REQUIRE(odd.size() == 1);
  CHECK(odd[0].omega2 == doctest::Approx(two[1].omega2).epsilon(1e-10));
}

TEST_CASE("near-threshold flag: weakly bound state in a shallow well") {
  // Weak-coupling law for a shallow even well: kappa = (1/2) int |V| dr
  // (= eps sqrt(pi)/2 for a Gaussian), so 2 - omega^2 = kappa^2 ~ 7.85e-7
  // lands inside the 1e-6 flag margin.
  const double eps = 1.0e-3;
  const Potential pot([eps](double r) { return -eps * std::exp(-r * r); }, 30.0,
                      WormholeConfig{1.0, 1}, 0.0);
  const auto modes = gap_eigenvalues(pot);
  REQUIRE(modes.size() == 1);
  CHECK(modes[0].parity == Parity::even);
  CHECK(modes[0].near_threshold);
  const double kappa2 = 2.0 - modes[0].omega2;
  const double law = std::pow(eps * std::sqrt(std::numbers::pi) / 2.0, 2);
  CHECK(kappa2 == doctest::Approx(law).epsilon(0.1));
}

TEST_CASE("threshold channel index") {
  // N counts how many harmonics of the mode fit under the continuum edge:
  // N^2 w^2 < 2 < (N+1)^2 w^2.
  CHECK(threshold_index(1.0682500946) == 1);
  CHECK(threshold_index(0.7422) == 1);
  CHECK(threshold_index(0.6345150570) == 2);
  CHECK(threshold_index(0.4455492123) == 3);
  CHECK(threshold_index(0.1) == 14);

  // Degenerate ratio (a harmonic exactly on the edge) and out-of-gap inputs.
  CHECK(thrown_code([] { threshold_index(std::sqrt(0.5)); }) == errc::domain);
  CHECK(thrown_code([] { threshold_index(1.5); }) == errc::domain);
  CHECK(thrown_code([] { threshold_index(kSqrt2); }) == errc::domain);
  CHECK(thrown_code([] { threshold_index(0.0); }) == errc::domain);
  CHECK(thrown_code([] { threshold_index(-1.0); }) == errc::domain);
}

TEST_CASE("free propagation: plane-wave Jost solution") {
  const Potential free_pot([](double) { return 0.0; }, 30.0, WormholeConfig{1.0, 1}, 0.0);
  const double xi = 1.3;
  const JostSolution jost = jost_solution(free_pot, xi);
  for (double r : {-20.0, -7.3, 0.0, 5.1, 24.0}) {
    const std::complex<double> exact = std::exp(std::complex<double>(0.0, xi * r));
    CHECK(std::abs(jost.eval(r) - exact) < 1e-12);
    // With no scattering the conjugate solution is the mirrored one.
    CHECK(std::abs(std::conj(jost.eval(r)) - jost.eval(-r)) < 1e-12);
  }
  CHECK(std::abs(jost.transmission() - 1.0) < 1e-10);
  CHECK(std::abs(jost.reflection()) < 1e-10);

  // Wronskian of k with its conjugate is -2 i xi.
  const double r0 = 3.7;
  const std::complex<double> W = jost.eval(r0) * std::conj(jost.eval_deriv(r0)) -
                                 jost.eval_deriv(r0) * std::conj(jost.eval(r0));
  CHECK(std::abs(W - std::complex<double>(0.0, -2.0 * xi)) < 1e-10);

  CHECK(thrown_code([&] { jost_solution(free_pot, 0.0); }) == errc::domain);
  CHECK(thrown_code([&] { jost_solution(free_pot, -1.0); }) == errc::domain);
}

TEST_CASE("wormhole Jost solution: unitarity and pair Wronskians") {
  const KinkProfile kink = solve_kink(WormholeConfig{1.0, 1});
  const Potential pot = build_potential(kink);
  const ModeData mode = gap_eigenvalues(pot).at(0);
  const double xi = std::sqrt(4.0 * mode.omega2 - 2.0);
  const JostSolution jost = jost_solution(pot, xi);

  const std::complex<double> T = jost.transmission();
  const std::complex<double> Rc = jost.reflection();
  CHECK(std::norm(T) == doctest::Approx(0.952530575).epsilon(1e-5));
  CHECK(std::abs(std::norm(T) + std::norm(Rc) - 1.0) < 1e-6);
  // For an even potential the reflected and transmitted amplitudes are in
  // quadrature.
  CHECK(std::abs((Rc * std::conj(T)).real()) < 1e-6);

  const std::complex<double> m2ix(0.0, -2.0 * xi);
  for (double r : {-10.0, -2.0, 0.0, 1.5, 8.0}) {
    // W[k, conj k] = -2 i xi everywhere (conservation of flux).
    const std::complex<double> Wc = jost.eval(r) * std::conj(jost.eval_deriv(r)) -
                                    jost.eval_deriv(r) * std::conj(jost.eval(r));
    CHECK(std::abs(Wc - m2ix) < 1e-8);
    // The mirrored solution k(-r) is the one outgoing at the far left;
    // its Wronskian with k carries the transmission: W[k, k(-r)] = -2 i xi / T.
    const std::complex<double> Wp = -jost.eval(r) * jost.eval_deriv(-r) -
                                    jost.eval_deriv(r) * jost.eval(-r);
    CHECK(std::abs(T * Wp - m2ix) < 1e-6);
  }

  // With genuine reflection the conjugate is NOT the mirrored solution
  // (they differ by the reflected wave).
  double dev = 0.0;
  for (double r : {2.0, 5.0, 8.0})
    dev = std::max(dev, std::abs(std::conj(jost.eval(r)) - jost.eval(-r)));
  CHECK(dev > 0.1);
}

TEST_CASE("resonant damping coefficient at unit throat") {
  const KinkProfile kink = solve_kink(WormholeConfig{1.0, 1});
  const Potential pot = build_potential(kink);
  const ModeData mode = gap_eigenvalues(pot).at(0);
  const double xi = std::sqrt(4.0 * mode.omega2 - 2.0);
  const JostSolution jost = jost_solution(pot, xi);
  const GammaResult g = gamma_coefficient(kink, mode, jost);

  CHECK(g.xi == doctest::Approx(xi).epsilon(1e-14));
  CHECK(g.gamma > 0.0);
  CHECK(g.inv_sqrt_gamma == doctest::Approx(1.0 / std::sqrt(g.gamma)).epsilon(1e-12));

  // The late-time amplitude decay coefficient: gamma^{-1/2} sets the
  // prefactor of the t^{-1/2} envelope in throat-amplitude normalization.
  CHECK(g.inv_sqrt_gamma > 2.78);
  CHECK(g.inv_sqrt_gamma < 2.80);
  CHECK(g.inv_sqrt_gamma == doctest::Approx(2.7939442).epsilon(2e-4));
  CHECK(std::abs(g.overlap) == doctest::Approx(0.3843342075).epsilon(1e-6));

  // Arithmetic closure: gamma = |T|^2 |ov|^2 / (xi w v(0)^2).
  const double v0 = mode.eval(0.0);
  const double closure = std::norm(jost.transmission()) * std::norm(g.overlap) /
                         (xi * mode.omega * v0 * v0);
  CHECK(g.gamma == doctest::Approx(closure).epsilon(1e-12));

  // Insensitive to the matching radius and to grid refinement.
  const JostSolution far = jost_solution(pot, xi, 50.0);
  const GammaResult g_far = gamma_coefficient(kink, mode, far);
  CHECK(g_far.gamma == doctest::Approx(g.gamma).epsilon(1e-6));

  const Potential fine = build_potential(kink, 8001);
  EigenScan dense;
  dense.grid_spacing = 0.025;
  const ModeData mode_f = gap_eigenvalues(fine, dense).at(0);
  const double xi_f = std::sqrt(4.0 * mode_f.omega2 - 2.0);
  const GammaResult g_fine = gamma_coefficient(kink, mode_f, jost_solution(fine, xi_f, 0.0, 8001));
  CHECK(g_fine.gamma == doctest::Approx(g.gamma).epsilon(1e-8));

  // Error paths: a mode whose doubled frequency is still in the gap has no
  // single-resonance coefficient; a Jost solution at the wrong xi is refused.
  const KinkProfile wide = solve_kink(WormholeConfig{2.0, 1});
  const ModeData deep = gap_eigenvalues(build_potential(wide)).at(0);
  CHECK(thrown_code([&] { gamma_coefficient(wide, deep, jost); }) == errc::domain);
  const JostSolution off = jost_solution(pot, 1.0);
  CHECK(thrown_code([&] { gamma_coefficient(kink, mode, off); }) == errc::config);
  const KinkProfile twokink = solve_kink(WormholeConfig{2.0, 2});
  const ModeData twomode = gap_eigenvalues(build_potential(twokink)).at(0);
  CHECK(thrown_code([&] { gamma_coefficient(twokink, twomode, jost); }) == errc::config);
}

TEST_CASE("critical throat radii: mode disappearance thresholds") {
  // Independent oracle: at the continuum edge (omega^2 = 2 exactly) the
  // eigenvalue problem loses its decaying solution when the regular parity
  // solution becomes flat at infinity, v -> A + B r with B = 0; bisecting
  // B(a) over r in [80, 120] gives the thresholds pinned below.
  const double a1 = critical_radius(1, 0, 0.3, 0.8);
  CHECK(a1 == doctest::Approx(0.531687).epsilon(2e-3));

  const double a21 = critical_radius(2, 0, 0.2, 0.6);
  CHECK(a21 == doctest::Approx(0.384373).epsilon(3e-3));
  CHECK(a21 > 0.38);
  CHECK(a21 < 0.40);

  const double a22 = critical_radius(2, 1, 0.5, 1.2);
  CHECK(a22 == doctest::Approx(0.785895).epsilon(2e-3));

  // The even branch of the double kink outlives the odd one as the throat
  // narrows.
  CHECK(a21 < a22);

  // Error paths: bracket must straddle the disappearance.
  CHECK(thrown_code([] { critical_radius(1, 0, 0.6, 0.8); }) == errc::bracket);
  CHECK(thrown_code([] { critical_radius(1, 0, 0.2, 0.4); }) == errc::bracket);
  CHECK(thrown_code([] { critical_radius(1, 1, 0.3, 0.8); }) == errc::config);
  CHECK(thrown_code([] { critical_radius(0, 0, 0.3, 0.8); }) == errc::config);
  CHECK(thrown_code([] { critical_radius(1, 0, 0.8, 0.3); }) == errc::config);
}
