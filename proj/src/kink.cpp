#include "sgw/kink.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "sgw/quadrature.hpp"
#include "sgw/roots.hpp"
#include "sgw/shanks.hpp"
#include "sgw/stencil.hpp"

namespace sgw {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

// trajectories are integrated a little past the matching ladder; beyond this
// the growing linear mode amplifies shooting noise to the 1e-7 level, so the
// profile switches to the fitted tail (or to the vacuum for raw profiles).
// The switch sits at the top rung of the ladder: there the stitch mismatch is
// still far below the local slope, so the sampled profile stays monotone.
constexpr double kTrajEnd = 16.0;
constexpr double kSwitchRadius = 10.0;

RhsFn static_rhs(double a, bool linearized) {
  const double a2 = a * a;
  if (linearized) {
    return [a2](double r, std::span<const double> y, std::span<double> d) {
      d[0] = y[1];
      d[1] = 2.0 * y[0] - 2.0 * r / (r * r + a2) * y[1];
    };
  }
  return [a2](double r, std::span<const double> y, std::span<double> d) {
    d[0] = y[1];
    d[1] = std::sin(2.0 * y[0]) - 2.0 * r / (r * r + a2) * y[1];
  };
}

enum class ShotKind { overshoot, turnback, undecided };

struct Shot {
  ShotKind kind = ShotKind::undecided;
  double r_event = 0.0;
};

// locate a sign change of step component `comp` minus `level` inside one step
double locate_in_step(const StepView& sv, std::size_t comp, double level) {
  double lo = sv.t_begin(), hi = sv.t_end();
  for (int i = 0; i < 48; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (((sv.eval(mid, comp) - level) > 0.0) == ((sv.eval(hi, comp) - level) > 0.0))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Classify one shot phi'(0) = b: does the trajectory cross n*pi (overshoot)
// or does phi' turn negative below it (turnback)? Undecided shots reached
// r_stop still rising, i.e. within integration noise of the separatrix.
// Integrator settings shared by every trajectory of one kink. The bisection
// converges to the separatrix of the numerical flow, so the final trajectory
// must be integrated with exactly the same settings: re-integrating with a
// different tolerance shifts the numerical separatrix by more than the tail
// itself is worth at r ~ 10.
OdeOptions shot_options() {
  OdeOptions opts;
  opts.rtol = 1e-13;
  opts.atol = 1e-15;
  opts.max_step = 0.25;  // keep event checks denser than any feature
  opts.dense = false;
  return opts;
}

Shot classify_shot(const RhsFn& rhs, double n_pi, double b, double r_stop) {
  Shot shot;
  const double y0[2] = {0.5 * n_pi, b};
  OdeOptions opts = shot_options();
  auto on_step = [&](const StepView& sv) {
    const double t_end = sv.t_end();
    const double phi_end = sv.eval(t_end, 0);
    const double dphi_end = sv.eval(t_end, 1);
    double r_over = std::numeric_limits<double>::infinity();
    double r_turn = std::numeric_limits<double>::infinity();
    if (phi_end > n_pi) r_over = locate_in_step(sv, 0, n_pi);
    if (dphi_end < 0.0) r_turn = locate_in_step(sv, 1, 0.0);
    if (r_over < r_turn) {
      shot = {ShotKind::overshoot, r_over};
      return false;
    }
    if (r_turn < r_over) {
      shot = {ShotKind::turnback, r_turn};
      return false;
    }
    return true;
  };
  integrate_ode_adaptive(rhs, y0, 0.0, r_stop, opts, on_step);
  return shot;
}

// leading tail remainder of the static energy beyond r_cut, both sides
double energy_tail(double c, double r_cut) {
  return 2.0 * c * c * std::exp(-2.0 * kSqrt2 * r_cut) / kSqrt2;
}

}  // namespace

void WormholeConfig::validate() const {
  require(std::isfinite(a) && a > 0.0, errc::config, "WormholeConfig: a must be positive");
  require(n >= 1, errc::config, "WormholeConfig: n must be at least 1");
}

double WormholeConfig::r_max() const { return std::max(25.0, 10.0 * a); }

double sine_gordon_kink(double r) { return 2.0 * std::atan(std::exp(kSqrt2 * r)); }

double sine_gordon_kink_deriv(double r) { return kSqrt2 / std::cosh(kSqrt2 * r); }

double sg_zero_mode(double r) {
  return 1.0 / (std::pow(2.0, 0.25) * std::cosh(kSqrt2 * r));
}

// ----------------------------------------------------------------------------
// tail solution

namespace {

// Asymptotic series phi_L = e^{-sqrt2 r} sum_k e_k r^{-1-k}. Substituting into
// (r^2+a^2)(S'' - 2 sqrt2 S') + 2 r S' - 2 sqrt2 r S = 0 and collecting powers
// gives the recurrence below; e_0 = 1 fixes the normalization, e_2 = -a^2/2
// is the leading correction, and all e_k vanish for a = 0 (phi_L =
// e^{-sqrt2 r}/r is then exact).
struct TailSeries {
  double value = 0.0;
  double deriv = 0.0;
  double floor = 1.0;  // smallest relative term reached (truncation level)
  int order = 0;       // index of the last term kept
};

TailSeries tail_series(double a, double r) {
  const double a2 = a * a;
  std::vector<double> e = {1.0};
  TailSeries out;
  double sum = 1.0 / r, dsum = -1.0 / (r * r);
  // odd and even terms decay on separate tracks (odd ones are much smaller),
  // so optimal truncation compares against the larger of the last two terms
  double hist1 = std::abs(sum), hist2 = 0.0;
  double rpow = 1.0 / r;
  for (int m = 1; m <= 120; ++m) {
    const double md = m;
    const double em1 = e[m - 1];
    const double em2 = m >= 2 ? e[m - 2] : 0.0;
    const double em3 = m >= 3 ? e[m - 3] : 0.0;
    const double em = -(md * (md - 1.0) * em1 + 2.0 * kSqrt2 * a2 * (md - 1.0) * em2 +
                        a2 * (md - 1.0) * (md - 2.0) * em3) /
                      (2.0 * kSqrt2 * md);
    e.push_back(em);
    rpow /= r;
    const double term = em * rpow;
    const double mag = std::abs(term);
    if (mag > std::max(hist1, hist2) && m > 6) break;  // past optimal truncation
    sum += term;
    dsum += -(1.0 + md) * em * rpow / r;
    out.order = m;
    if (mag > 0.0) {
      out.floor = std::min(out.floor, mag / std::abs(sum));
      if (mag < 1e-18 * std::abs(sum)) break;
    }
    hist2 = hist1;
    hist1 = mag;
  }
  const double damp = std::exp(-kSqrt2 * r);
  out.value = damp * sum;
  out.deriv = damp * (dsum - kSqrt2 * sum);
  return out;
}

}  // namespace

TailSolution tail_solution(const WormholeConfig& config, double r_match, double r_start) {
  config.validate();
  require(r_match >= 1.0, errc::config, "tail_solution: r_match below 1");
  // the series needs r well past the throat: successive even terms shrink by
  // about a^2 / r^2, so r = 2a reaches the 1e-13 floor in ~40 terms
  if (r_start == 0.0) r_start = std::max(35.0, 2.0 * config.a);
  require(r_start > r_match + 5.0, errc::config, "tail_solution: r_start too close to r_match");

  const TailSeries seed = tail_series(config.a, r_start);
  require(seed.floor < 1e-13, errc::config,
          "tail_solution: asymptotic series not converged at r_start; increase it");

  TailSolution tail;
  tail.config_ = config;
  tail.r_start_ = r_start;
  tail.r_min_ = r_match - 1.0;
  tail.scale_ = seed.value;
  tail.series_order_ = seed.order;

  // integrate the unit-normalized solution inward; the recessive branch is
  // attracting in this direction so the seed error only shrinks. Tight
  // tolerances keep the interpolant smooth enough that even second
  // derivatives of the result are clean to ~1e-11 relative.
  const double y0[2] = {1.0, seed.deriv / seed.value};
  OdeOptions opts;
  opts.rtol = 3e-14;
  opts.atol = 1e-16;
  tail.sol_ = integrate_ode_adaptive(static_rhs(config.a, true), y0, r_start, tail.r_min_, opts);
  return tail;
}

double TailSolution::value(double r) const {
  require(r >= r_min_, errc::domain, "TailSolution: r below the stored range");
  if (r >= r_start_) return tail_series(config_.a, r).value;
  return scale_ * sol_.eval(r, 0);
}

double TailSolution::deriv(double r) const {
  require(r >= r_min_, errc::domain, "TailSolution: r below the stored range");
  if (r >= r_start_) return tail_series(config_.a, r).deriv;
  return scale_ * sol_.eval(r, 1);
}

// ----------------------------------------------------------------------------
// shooting

KinkProfile shoot_kink(const WormholeConfig& config, double shoot_tol) {
  config.validate();
  require(shoot_tol > 0.0 && shoot_tol < 0.1, errc::config, "shoot_kink: bad shoot_tol");

  const double n_pi = config.n * kPi;
  const RhsFn rhs = static_rhs(config.a, false);
  const double r_stop = config.r_max();

  // bracket the separatrix slope inside (0, B_max]; the small-a and
  // flat-space limits give the scale
  constexpr double kBMax = 50.0;
  const double b_scale = std::max(kSqrt2 * config.n, config.n / config.a);
  double hi = std::min(1.2 * b_scale + 1.0, kBMax);
  while (classify_shot(rhs, n_pi, hi, r_stop).kind != ShotKind::overshoot) {
    require(hi < kBMax, errc::bracket, "shoot_kink: no overshoot below b = 50");
    hi = std::min(hi * 1.6, kBMax);
  }
  double lo = 0.4 * kSqrt2 * config.n;
  while (classify_shot(rhs, n_pi, lo, r_stop).kind == ShotKind::overshoot) {
    lo *= 0.5;
    require(lo >= 1e-8, errc::bracket, "shoot_kink: no turnback above b = 1e-8");
  }

  // the tail coefficient ladder reads the trajectory out at r ~ 10 where a
  // slope error delta_b is amplified by e^{sqrt2 r}/(2 sqrt2 r) ~ 5e4, so the
  // bracket is driven to floating-point resolution unless told otherwise
  for (int iter = 0; iter < 200 && (hi - lo) > shoot_tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // bracket at floating resolution
    // undecided shots sit inside the noise band around the separatrix; fold
    // them into the lower branch, biasing b by less than the band width
    if (classify_shot(rhs, n_pi, mid, r_stop).kind == ShotKind::overshoot)
      hi = mid;
    else
      lo = mid;
  }

  KinkProfile kink;
  kink.config = config;
  kink.b = 0.5 * (lo + hi);
  kink.c = std::numeric_limits<double>::quiet_NaN();
  kink.r_max = r_stop;

  // final trajectory at the bisected slope, with the same integrator as the
  // classification shots so it tracks the same numerical separatrix; safety
  // stop if a coarse shoot_tol lets it leave the funnel early
  double traj_end = std::min(r_stop, kTrajEnd);
  const double y0[2] = {0.5 * n_pi, kink.b};
  OdeOptions opts = shot_options();
  opts.dense = true;
  auto guard = [&](const StepView& sv) {
    const double t_end = sv.t_end();
    return std::abs(sv.eval(t_end, 0) - 0.5 * n_pi) < 0.5 * n_pi + 0.3 &&
           sv.eval(t_end, 1) > -0.3;
  };
  kink.traj_ = integrate_ode_adaptive(rhs, y0, 0.0, traj_end, opts, guard);
  kink.traj_end_ = kink.traj_.stopped_early() ? kink.traj_.t_end() : traj_end;

  kink.fill_samples();
  return kink;
}

TailCoefficient tail_coefficient(const KinkProfile& kink, const TailSolution& tail,
                                 double r_match) {
  require(tail.config().a == kink.config.a && tail.config().n == kink.config.n,
          errc::stale_input, "tail_coefficient: tail was built for a different config");
  require(r_match >= tail.r_min(), errc::domain, "tail_coefficient: r_match below tail range");
  const double r_top = r_match + 4.0;
  require(kink.traj_end_ >= r_top, errc::domain,
          "tail_coefficient: trajectory does not reach the matching ladder");

  const double n_pi = kink.config.n * kPi;
  std::vector<double> ladder;
  for (int j = 0; j <= 8; ++j) {
    const double r0 = r_match + 0.5 * j;
    ladder.push_back((n_pi - kink.traj_.eval(r0, 0)) / tail.value(r0));
  }
  const auto [c_min, c_max] = std::minmax_element(ladder.begin(), ladder.end());

  TailCoefficient out;
  out.c = shanks_accelerate(ladder).value;
  out.spread = *c_max - *c_min;
  out.accuracy_warning = out.spread > 1e-2 * std::abs(out.c);
  return out;
}

KinkProfile solve_kink(const WormholeConfig& config, double shoot_tol) {
  KinkProfile kink = shoot_kink(config, shoot_tol);
  auto tail = std::make_shared<TailSolution>(tail_solution(config));
  const TailCoefficient tc = tail_coefficient(kink, *tail);
  kink.c = tc.c;
  kink.c_spread = tc.spread;
  kink.c_accuracy_warning = tc.accuracy_warning;
  kink.tail_ = std::move(tail);
  kink.r_switch_ = std::min(kSwitchRadius, kink.traj_end_);

  // the switch must be seamless; a visible jump means the shot or the ladder
  // degraded, so surface it through the warning flag
  const double n_pi = config.n * kPi;
  const double jump = std::abs(kink.traj_.eval(kink.r_switch_, 0) -
                               (n_pi - kink.c * kink.tail_->value(kink.r_switch_)));
  if (jump > 1e-5 * std::max(1.0, std::abs(kink.c))) kink.c_accuracy_warning = true;

  kink.fill_samples();
  return kink;
}

double KinkProfile::phi_halfline(double r) const {
  const double n_pi = config.n * kPi;
  if (tail_ && r > r_switch_) {
    const double t = c * tail_->value(r);
    return n_pi - t;  // underflows to the vacuum far out, as it should
  }
  if (r <= traj_end_) return traj_.eval(r, 0);
  return n_pi;  // raw profile past the noise floor: vacuum to ~1e-7
}

double KinkProfile::dphi_halfline(double r) const {
  if (tail_ && r > r_switch_) return -c * tail_->deriv(r);
  if (r <= traj_end_) return traj_.eval(r, 1);
  return 0.0;
}

double KinkProfile::phi(double r) const {
  if (r >= 0.0) return phi_halfline(r);
  return config.n * kPi - phi_halfline(-r);
}

double KinkProfile::dphi(double r) const { return dphi_halfline(std::abs(r)); }

double KinkProfile::ddphi(double r) const {
  const double x = std::abs(r);
  double dd;
  if (tail_ && x > r_switch_) {
    // phi_L'' from its defining equation
    const double a2 = config.a * config.a;
    dd = -c * (2.0 * tail_->value(x) - 2.0 * x / (x * x + a2) * tail_->deriv(x));
  } else if (x <= traj_end_) {
    dd = traj_.eval_deriv(x, 1);
  } else {
    dd = 0.0;
  }
  return r < 0.0 ? -dd : dd;
}

void KinkProfile::fill_samples() {
  const std::size_t half = std::min<std::size_t>(25000, std::llround(r_max / 0.01));
  const std::size_t num = 2 * half + 1;
  grid_ = std::make_shared<UniformGrid>(-r_max, r_max, num);
  phi_.resize(num);
  dphi_.resize(num);
  const double n_pi = config.n * kPi;
  for (std::size_t i = half; i < num; ++i) {
    const double r = grid_->node(i);
    phi_[i] = phi_halfline(r);
    dphi_[i] = dphi_halfline(r);
    phi_[num - 1 - i] = n_pi - phi_[i];
    dphi_[num - 1 - i] = dphi_[i];
  }
}

double small_a_profile(const WormholeConfig& config, double r) {
  config.validate();
  return config.n * (0.5 * kPi + std::atan(r / config.a));
}

KinkDiagnostics kink_diagnostics(const KinkProfile& kink) {
  const double a2 = kink.config.a * kink.config.a;
  const double n_pi = kink.config.n * kPi;

  auto energy_density = [&](double r) {
    const double dp = kink.dphi(r);
    const double s = std::sin(kink.phi(r));
    return (0.5 * dp * dp + s * s) * (r * r + a2);
  };
  auto friction_density = [&](double r) {
    const double dp = kink.dphi(r);
    return 2.0 * r / (r * r + a2) * dp * dp;
  };

  KinkDiagnostics diag;
  const double tail_c = kink.has_tail() ? kink.c : 0.0;
  diag.energy = 2.0 * adaptive_integrate(energy_density, 0.0, kink.r_max, 1e-11, 1e-13).value +
                energy_tail(tail_c, kink.r_max);

  const double boundary = 0.5 * kink.b * kink.b - std::pow(std::sin(0.5 * n_pi), 2);
  const double friction = adaptive_integrate(friction_density, 0.0, kink.r_max, 1e-11, 1e-13).value;
  diag.friction_residual = std::abs(boundary - friction);

  if (kink.config.n == 2) {
    // the two unit kinks sit where phi crosses the intermediate vacuum 3 pi / 2
    auto f = [&](double r) { return kink.phi(r) - 1.5 * kPi; };
    diag.separation = bisect_root(f, 0.0, kink.r_max, 1e-12);
  }
  return diag;
}

// ----------------------------------------------------------------------------
// large-a correction: psi'' - 2 cos(2H) psi = -2 r H', psi odd, decaying

PsiCorrection solve_psi(double L, std::size_t num_points) {
  require(L >= 10.0, errc::config, "solve_psi: domain too short");
  require(num_points >= 33, errc::dimension, "solve_psi: too few points");

  PsiCorrection out;
  out.grid_ = std::make_shared<UniformGrid>(0.0, L, num_points);
  const double h = out.grid_->spacing();
  const std::size_t m = num_points - 1;

  // order-8 second-derivative weights: centered, plus biased rows near r = L
  std::vector<double> offs(9);
  for (int k = 0; k < 9; ++k) offs[k] = k - 4;
  const std::vector<double> central = fd_weights(0.0, offs, 2);

  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(num_points);

  auto add = [&](std::size_t row, std::ptrdiff_t col, double w) {
    if (col <= 0) {
      // odd reflection through r = 0: psi(-r) = -psi(r), psi(0) = 0
      if (col < 0) trips.emplace_back(row, -col, -w);
      return;
    }
    if (col >= static_cast<std::ptrdiff_t>(m)) return;  // Dirichlet at L
    trips.emplace_back(row, col, w);
  };

  const double inv_h2 = 1.0 / (h * h);
  for (std::size_t i = 1; i < m; ++i) {
    const double r = out.grid_->node(i);
    if (i + 4 <= m) {
      // centered stencil; columns at or beyond m are cut by the Dirichlet end
      // and columns at or below 0 fold back through the odd reflection
      for (int k = 0; k < 9; ++k)
        add(i, static_cast<std::ptrdiff_t>(i) + k - 4, central[k] * inv_h2);
    } else {
      // biased window ending at the last node
      std::vector<double> xs(9);
      for (int k = 0; k < 9; ++k)
        xs[k] = static_cast<double>(m - 8 + k) - static_cast<double>(i);
      const std::vector<double> w = fd_weights(0.0, xs, 2);
      for (int k = 0; k < 9; ++k)
        add(i, static_cast<std::ptrdiff_t>(m) - 8 + k, w[k] * inv_h2);
    }
    trips.emplace_back(i, i, -2.0 * std::cos(2.0 * sine_gordon_kink(r)));
    rhs[static_cast<Eigen::Index>(i)] = -2.0 * r * sine_gordon_kink_deriv(r);
  }
  trips.emplace_back(0, 0, 1.0);
  trips.emplace_back(m, m, 1.0);

  Eigen::SparseMatrix<double> mat(num_points, num_points);
  mat.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(mat);
  require(lu.info() == Eigen::Success, errc::convergence, "solve_psi: factorization failed");
  const Eigen::VectorXd sol = lu.solve(rhs);
  require(lu.info() == Eigen::Success, errc::convergence, "solve_psi: solve failed");

  out.psi_.assign(sol.data(), sol.data() + num_points);
  return out;
}

double PsiCorrection::at(double r) const {
  const double L = grid_->upper();
  require(std::abs(r) <= L, errc::domain, "PsiCorrection: r outside the stored range");
  const double x = std::abs(r);
  const double h = grid_->spacing();
  const std::size_t n = grid_->size();

  // 6-point Lagrange interpolation on the nearest nodes
  std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::floor(x / h)) - 2;
  i0 = std::clamp<std::ptrdiff_t>(i0, 0, static_cast<std::ptrdiff_t>(n) - 6);
  double val = 0.0;
  for (int j = 0; j < 6; ++j) {
    double lj = 1.0;
    const double xj = grid_->node(i0 + j);
    for (int k = 0; k < 6; ++k) {
      if (k == j) continue;
      const double xk = grid_->node(i0 + k);
      lj *= (x - xk) / (xj - xk);
    }
    val += lj * psi_[i0 + j];
  }
  return r < 0.0 ? -val : val;
}

}  // namespace sgw
