#include "sgw/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <utility>

#include "sgw/errors.hpp"
#include "sgw/ode.hpp"
#include "sgw/quadrature.hpp"
#include "sgw/roots.hpp"

namespace sgw {

namespace {

constexpr double kContinuum = 2.0;       // bottom of the continuous spectrum
constexpr double kEdgeMargin = 1e-9;     // closest approach of any scan to the edge
constexpr double kNearThreshold = 1e-6;  // flagging distance from the edge
constexpr double kBisectTol = 1e-10;     // eigenvalue bisection width
constexpr double kRadiusCap = 1e4;       // resolution floor for R = 12/kappa

double kappa_of(double omega2) { return std::sqrt(std::max(kContinuum - omega2, 0.0)); }

// Shooting radius: 12 e-folds of the bound-state tail, capped near threshold.
double shoot_radius(double omega2) {
  const double kappa = kappa_of(omega2);
  if (kappa <= 12.0 / kRadiusCap) return kRadiusCap;
  return std::min(std::max(30.0, 12.0 / kappa), kRadiusCap);
}

RhsFn mode_rhs(const Potential& pot, double omega2) {
  return [&pot, omega2](double r, std::span<const double> y, std::span<double> d) {
    d[0] = y[1];
    d[1] = (kContinuum + pot.value(r) - omega2) * y[0];
  };
}

// Outermost classically allowed radius, pushed half a unit into the barrier.
// Both shots then integrate toward it in their growing (stable) direction.
// The matching Wronskian itself is r-independent, so the exact spot is free.
class TurningCache {
public:
  explicit TurningCache(const Potential& pot) {
    v_.resize(static_cast<std::size_t>(kSpan / kStep) + 1);
    for (std::size_t i = 0; i < v_.size(); ++i)
      v_[i] = pot.value(static_cast<double>(i) * kStep);
  }

  double r_mid(double omega2, double R) const {
    const double cap = std::min(0.9 * R, kSpan);
    double r_turn = 0.0;
    for (auto i = static_cast<std::size_t>(cap / kStep); i > 0; --i) {
      if (kContinuum + v_[i] - omega2 < 0.0) {
        r_turn = static_cast<double>(i) * kStep;
        break;
      }
    }
    return std::clamp(r_turn + 0.5, 1.0, 0.9 * R);
  }

private:
  static constexpr double kSpan = 50.0;
  static constexpr double kStep = 0.05;
  std::vector<double> v_;
};

double matching_point(const Potential& pot, double omega2, double R) {
  return TurningCache(pot).r_mid(omega2, R);
}

struct HalfShot {
  double v = 0.0;
  double dv = 0.0;
};

HalfShot shoot_from_origin(const Potential& pot, double omega2, Parity parity, double r_mid,
                           double rtol) {
  const double y0[2] = {parity == Parity::even ? 1.0 : 0.0,
                        parity == Parity::even ? 0.0 : 1.0};
  OdeOptions opts;
  opts.rtol = rtol;
  opts.atol = 1e-2 * rtol;
  opts.dense = false;
  RhsFn rhs = mode_rhs(pot, omega2);
  const OdeSolution sol = integrate_ode_adaptive(rhs, y0, 0.0, r_mid, opts);
  return {sol.final_state()[0], sol.final_state()[1]};
}

// Decaying data at R with one tail-correction order: v = e^{-kappa r} w with
// -2 kappa w' ~ V w for the slowly varying factor, so v'/v = -kappa - V/(2 kappa).
HalfShot shoot_from_infinity(const Potential& pot, double omega2, double R, double r_mid,
                             double rtol) {
  const double kappa = kappa_of(omega2);
  const double y0[2] = {1.0, -kappa - pot.value(R) / (2.0 * kappa)};
  OdeOptions opts;
  opts.rtol = rtol;
  opts.atol = 1e-2 * rtol;
  opts.dense = false;
  RhsFn rhs = mode_rhs(pot, omega2);
  const OdeSolution sol = integrate_ode_adaptive(rhs, y0, R, r_mid, opts);
  return {sol.final_state()[0], sol.final_state()[1]};
}

// Scale-free matching Wronskian; zero exactly at eigenvalues.
double matching_wronskian(const Potential& pot, const TurningCache& turning, double omega2,
                          Parity parity, double rtol) {
  const double R = shoot_radius(omega2);
  const double r_mid = turning.r_mid(omega2, R);
  const HalfShot in = shoot_from_origin(pot, omega2, parity, r_mid, rtol);
  const HalfShot out = shoot_from_infinity(pot, omega2, R, r_mid, rtol);
  const double w = in.v * out.dv - in.dv * out.v;
  const double scale =
      (std::abs(in.v) + std::abs(in.dv)) * (std::abs(out.v) + std::abs(out.dv));
  return w / scale;
}

// Second-order half-line discretization of L = -d^2/dr^2 + 2 + V with the
// parity closure at r = 0 (the even Neumann row is symmetrized by scaling the
// origin node) and Dirichlet at R. Used only to seed brackets, so eigenvalue
// accuracy of order h^2 is enough.
std::vector<double> sturm_seeds(const Potential& pot, Parity parity, double lo, double hi) {
  const double R = std::min(std::max(30.0, shoot_radius(hi)), 240.0);
  const double h = 0.01;
  const std::size_t m = static_cast<std::size_t>(std::lround(R / h));
  std::vector<double> diag, offd;
  const double inv_h2 = 1.0 / (h * h);
  if (parity == Parity::even) {
    diag.resize(m);
    offd.resize(m - 1, -inv_h2);
    for (std::size_t i = 0; i < m; ++i)
      diag[i] = 2.0 * inv_h2 + kContinuum + pot.value(static_cast<double>(i) * h);
    offd[0] = -std::numbers::sqrt2 * inv_h2;
  } else {
    diag.resize(m - 1);
    offd.resize(m - 2, -inv_h2);
    for (std::size_t i = 0; i + 1 < m; ++i)
      diag[i] = 2.0 * inv_h2 + kContinuum + pot.value(static_cast<double>(i + 1) * h);
  }

  // Sturm count: negative pivots of the shifted LDL^T factorization.
  auto count_below = [&](double x) {
    std::size_t cnt = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
      const double coupling = i ? offd[i - 1] * offd[i - 1] / q : 0.0;
      q = diag[i] - x - coupling;
      if (q == 0.0) q = -1e-300;
      if (q < 0.0) ++cnt;
    }
    return cnt;
  };

  const std::size_t below_lo = count_below(lo);
  const std::size_t below_hi = count_below(hi);
  std::vector<double> seeds;
  for (std::size_t k = below_lo + 1; k <= below_hi; ++k) {
    double a = lo, b = hi;
    while (b - a > 1e-4) {
      const double mid = 0.5 * (a + b);
      if (count_below(mid) >= k)
        b = mid;
      else
        a = mid;
    }
    seeds.push_back(0.5 * (a + b));
  }
  return seeds;
}

struct Candidate {
  double lo = 0.0;
  double hi = 0.0;
};

// All eigenvalues of one parity channel inside (lo, hi): coarse Wronskian
// sign scan for brackets, Sturm seeds for anything inside one scan cell,
// bisection to kBisectTol.
std::vector<double> channel_eigenvalues(const Potential& pot, Parity parity, double lo,
                                        double hi, std::size_t scan_points) {
  const double hi_eff = std::min(hi, kContinuum - kEdgeMargin);
  std::vector<double> roots;
  if (!(hi_eff > lo)) return roots;

  const TurningCache turning(pot);
  const std::size_t npts = std::max<std::size_t>(scan_points, 8);
  const double cell = (hi_eff - lo) / static_cast<double>(npts);
  constexpr double scan_rtol = 1e-8;
  constexpr double refine_rtol = 1e-12;

  std::vector<double> xs(npts + 1), ws(npts + 1);
  for (std::size_t i = 0; i <= npts; ++i) {
    xs[i] = lo + cell * static_cast<double>(i);
    ws[i] = matching_wronskian(pot, turning, xs[i], parity, scan_rtol);
  }
  std::vector<Candidate> brackets;
  for (std::size_t i = 0; i < npts; ++i)
    if (ws[i] == 0.0 || (ws[i] < 0.0) != (ws[i + 1] < 0.0))
      brackets.push_back({xs[i], xs[i + 1]});

  // Seeds falling outside every scan bracket get a local refined scan (this
  // catches same-parity pairs buried in one cell).
  for (double seed : sturm_seeds(pot, parity, lo, hi_eff)) {
    bool covered = false;
    for (const Candidate& b : brackets)
      covered = covered || (seed > b.lo - cell && seed < b.hi + cell);
    if (covered) continue;
    const double half = std::max(0.02, 2.0 * cell);
    const double a = std::max(lo, seed - half);
    const double b = std::min(hi_eff, seed + half);
    const std::size_t fine = 64;
    double prev = matching_wronskian(pot, turning, a, parity, scan_rtol);
    for (std::size_t i = 1; i <= fine; ++i) {
      const double x = a + (b - a) * static_cast<double>(i) / fine;
      const double w = matching_wronskian(pot, turning, x, parity, scan_rtol);
      if ((prev < 0.0) != (w < 0.0))
        brackets.push_back({a + (b - a) * static_cast<double>(i - 1) / fine, x});
      prev = w;
    }
  }

  for (const Candidate& b : brackets) {
    auto f = [&](double w2) {
      return matching_wronskian(pot, turning, w2, parity, refine_rtol);
    };
    double lo_b = b.lo, hi_b = b.hi;
    double f_lo = f(lo_b), f_hi = f(hi_b);
    if (f_lo == 0.0) {
      roots.push_back(lo_b);
      continue;
    }
    if ((f_lo < 0.0) == (f_hi < 0.0)) {
      // A root sitting on a scan node makes one endpoint pure integration
      // noise whose sign can flip between tolerances. Widen by one cell and
      // retry before writing the bracket off as scan noise.
      lo_b = std::max(lo, b.lo - cell);
      hi_b = std::min(hi_eff, b.hi + cell);
      f_lo = f(lo_b);
      f_hi = f(hi_b);
      if ((f_lo < 0.0) == (f_hi < 0.0)) continue;
    }
    roots.push_back(bisect_root(f, lo_b, hi_b, kBisectTol));
  }

  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-8; }),
              roots.end());
  return roots;
}

}  // namespace

// Dense eigenfunction: left parity shot on [0, r_mid], scaled right decaying
// shot on [r_mid, R], analytic e^{-kappa r} continuation past R, parity
// reflection for r < 0, global L2 normalization.
struct ModeDense {
  OdeSolution left;
  OdeSolution right;
  double r_mid = 0.0;
  double R = 0.0;
  double kappa = 0.0;
  double right_scale = 1.0;
  double norm = 1.0;
  Parity parity = Parity::even;

  double raw(double s) const {
    if (s <= r_mid) return left.eval(s, 0);
    if (s <= R) return right_scale * right.eval(s, 0);
    return right_scale * std::exp(-kappa * (s - R));
  }
  double eval(double r) const {
    const double sign = (r < 0.0 && parity == Parity::odd) ? -1.0 : 1.0;
    return sign * norm * raw(std::abs(r));
  }
};

double ModeData::eval(double r) const {
  require(dense_ != nullptr, errc::config, "ModeData: empty mode");
  return dense_->eval(r);
}

struct ModeAssembler {
  static ModeData assemble(const Potential& pot, double omega2, Parity parity,
                           double h_target) {
    auto d = std::make_shared<ModeDense>();
    d->parity = parity;
    d->R = shoot_radius(omega2);
    d->kappa = kappa_of(omega2);
    d->r_mid = matching_point(pot, omega2, d->R);

    OdeOptions opts;
    opts.rtol = 1e-12;
    opts.atol = 1e-14;
    RhsFn rhs = mode_rhs(pot, omega2);
    const double yl[2] = {parity == Parity::even ? 1.0 : 0.0,
                          parity == Parity::even ? 0.0 : 1.0};
    d->left = integrate_ode_adaptive(rhs, yl, 0.0, d->r_mid, opts);
    const double yr[2] = {1.0, -d->kappa - pot.value(d->R) / (2.0 * d->kappa)};
    d->right = integrate_ode_adaptive(rhs, yr, d->R, d->r_mid, opts);

    const double vl = d->left.final_state()[0], dvl = d->left.final_state()[1];
    const double vr = d->right.final_state()[0], dvr = d->right.final_state()[1];
    // value match, unless the matching point sits near a node of v
    d->right_scale =
        (std::abs(vl) > 1e-3 * (std::abs(vl) + std::abs(dvl))) ? vl / vr : dvl / dvr;

    const QuadResult half_norm = adaptive_integrate(
        [&](double s) {
          const double x = d->raw(s);
          return x * x;
        },
        0.0, d->R, 1e-12, 1e-16);
    const double tail = d->right_scale * d->right_scale / (2.0 * d->kappa);
    d->norm = 1.0 / std::sqrt(2.0 * half_norm.value + 2.0 * tail);

    ModeData md;
    md.omega2 = omega2;
    md.omega = std::sqrt(std::max(omega2, 0.0));
    md.parity = parity;
    md.near_threshold = (kContinuum - omega2 <= kNearThreshold);
    const auto half = static_cast<std::size_t>(std::ceil(d->R / h_target));
    md.grid_ = std::make_shared<UniformGrid>(-d->R, d->R, 2 * half + 1);
    md.v_.resize(md.grid_->size());
    for (std::size_t i = 0; i < md.v_.size(); ++i) md.v_[i] = d->eval(md.grid_->node(i));
    md.dense_ = d;

    double vmax = 0.0;
    for (double x : md.v_) vmax = std::max(vmax, std::abs(x));
    int nodes = 0, last = 0;
    for (double x : md.v_) {
      if (std::abs(x) <= 1e-8 * vmax) continue;
      const int s = x > 0.0 ? 1 : -1;
      if (last != 0 && s != last) ++nodes;
      last = s;
    }
    md.node_count = nodes;
    return md;
  }
};

Potential::Potential(std::function<double(double)> profile, double r_max,
                     WormholeConfig config, double tail_a, std::size_t num_points)
    : config_(config), r_max_(r_max), tail_a_(tail_a), profile_(std::move(profile)) {
  config_.validate();
  require(r_max_ > 0.0, errc::config, "Potential: r_max must be positive");
  require(tail_a_ >= 0.0, errc::config, "Potential: negative tail amplitude");
  grid_ = std::make_shared<UniformGrid>(-r_max_, r_max_, num_points | 1);
  samples_.resize(grid_->size());
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] = value(grid_->node(i));
}

double Potential::value(double r) const {
  const double s = std::abs(r);
  if (s <= r_max_) return profile_(s);
  const double d = s * s + tail_a_ * tail_a_;
  return tail_a_ * tail_a_ / (d * d);
}

Potential build_potential(const KinkProfile& kink, std::size_t num_points) {
  kink.config.validate();
  auto kp = std::make_shared<const KinkProfile>(kink);
  const double a2 = kink.config.a * kink.config.a;
  auto profile = [kp, a2](double r) {
    const double s = std::sin(kp->phi(r));
    const double d = r * r + a2;
    return -4.0 * s * s + a2 / (d * d);
  };
  return {std::move(profile), kink.config.r_max(), kink.config, kink.config.a, num_points};
}

std::vector<ModeData> gap_eigenvalues(const Potential& pot, const EigenScan& scan) {
  require(scan.omega2_max > scan.omega2_min, errc::config, "gap_eigenvalues: empty window");
  require(scan.grid_spacing > 0.0, errc::config, "gap_eigenvalues: bad grid spacing");
  std::vector<ModeData> modes;
  for (Parity parity : {Parity::even, Parity::odd}) {
    if (parity == Parity::even && !scan.include_even) continue;
    if (parity == Parity::odd && !scan.include_odd) continue;
    for (double w2 : channel_eigenvalues(pot, parity, scan.omega2_min, scan.omega2_max,
                                         scan.scan_points))
      modes.push_back(ModeAssembler::assemble(pot, w2, parity, scan.grid_spacing));
  }
  std::sort(modes.begin(), modes.end(),
            [](const ModeData& x, const ModeData& y) { return x.omega2 < y.omega2; });
  return modes;
}

double critical_radius(int n, int mode_index, double a_lo, double a_hi) {
  require(n >= 1, errc::config, "critical_radius: n must be positive");
  require(mode_index >= 0 && mode_index < n, errc::config,
          "critical_radius: mode index outside 0..n-1");
  require(a_lo > 0.0 && a_hi > a_lo, errc::config, "critical_radius: bad bracket");
  const Parity parity = (mode_index % 2 == 0) ? Parity::even : Parity::odd;
  const int channel_index = mode_index / 2;
  // Two resolution floors: a cheap one bounding the bisection work and a fine
  // one at the shooting-radius cap that the extrapolation rungs descend to.
  constexpr double kappa_coarse = 0.02;
  constexpr double kappa_fine = 1.5e-3;

  auto kappa_at = [&](double a) {
    const KinkProfile kink = solve_kink(WormholeConfig{a, n});
    const Potential pot = build_potential(kink);
    const std::vector<double> w2s =
        channel_eigenvalues(pot, parity, 0.0, kContinuum, 120);
    if (static_cast<int>(w2s.size()) <= channel_index) return -1.0;
    return kappa_of(w2s[static_cast<std::size_t>(channel_index)]);
  };

  const double k_top = kappa_at(a_hi);
  require(k_top > kappa_coarse, errc::bracket,
          "critical_radius: tracked mode not resolvable at the top of the bracket");
  require(kappa_at(a_lo) <= kappa_fine, errc::bracket,
          "critical_radius: mode does not vanish within the bracket");

  // Bisect the coarse-resolvability boundary.
  double a_c = a_hi, k_c = k_top, a_gone = a_lo;
  const double w_stop = std::max(5e-4, 1e-3 * (a_hi - a_lo));
  while (a_c - a_gone > w_stop) {
    const double mid = 0.5 * (a_c + a_gone);
    const double k = kappa_at(mid);
    if (k > kappa_coarse) {
      a_c = mid;
      k_c = k;
    } else {
      a_gone = mid;
    }
  }

  // Local slope just above the boundary sets the rung spacing.
  const double h = std::min(std::max(1e-3, 2e-3 * (a_hi - a_lo)), a_hi - a_c);
  double slope = 0.0;
  if (h > 0.0) {
    const double k_h = kappa_at(a_c + h);
    require(k_h > k_c, errc::convergence, "critical_radius: kappa(a) not increasing");
    slope = (k_h - k_c) / h;
  } else {
    const double k_dn = kappa_at(a_c - w_stop);
    require(k_dn > kappa_fine && k_dn < k_c, errc::convergence,
            "critical_radius: kappa(a) not increasing");
    slope = (k_c - k_dn) / w_stop;
  }

  // Descend a ladder of rungs toward the fine floor. kappa(a) is concave at
  // the threshold, so the linear fit must live in the smallest kappa window
  // the radius cap can resolve; wide windows bias the root low.
  std::vector<std::pair<double, double>> rungs{{a_c, k_c}};
  double step = (k_c - 2.5 * kappa_fine) / (3.0 * slope);
  double a_prev = a_c;
  for (int tries = 0; rungs.size() < 4 && tries < 6; ++tries) {
    const double a = a_prev - step;
    if (a <= a_lo || step <= 0.0) break;
    const double k = kappa_at(a);
    if (k > kappa_fine) {
      rungs.emplace_back(a, k);
      a_prev = a;
    } else {
      step *= 0.5;  // overshot the floor; retry closer
    }
  }
  require(rungs.size() >= 2, errc::convergence, "critical_radius: too few resolvable rungs");
  // Fit only the rungs nearest the floor; the coarse anchor is off the
  // asymptotic linear regime.
  if (rungs.size() >= 3) rungs.erase(rungs.begin());

  double sa = 0.0, sk = 0.0, saa = 0.0, sak = 0.0;
  for (auto [a, k] : rungs) {
    sa += a;
    sk += k;
    saa += a * a;
    sak += a * k;
  }
  const double count = static_cast<double>(rungs.size());
  const double beta = (count * sak - sa * sk) / (count * saa - sa * sa);
  const double alpha = (sk - beta * sa) / count;
  require(beta > 0.0, errc::convergence, "critical_radius: kappa(a) not increasing");
  return -alpha / beta;
}

std::complex<double> JostSolution::eval(double r) const {
  require(sol_ != nullptr, errc::config, "JostSolution: empty");
  const std::complex<double> m{sol_->eval(r, 0), sol_->eval(r, 1)};
  return std::exp(std::complex<double>{0.0, xi * r}) * m;
}

std::complex<double> JostSolution::eval_deriv(double r) const {
  require(sol_ != nullptr, errc::config, "JostSolution: empty");
  const std::complex<double> m{sol_->eval(r, 0), sol_->eval(r, 1)};
  const std::complex<double> dm{sol_->eval(r, 2), sol_->eval(r, 3)};
  const std::complex<double> i_xi{0.0, xi};
  return std::exp(i_xi * r) * (dm + i_xi * m);
}

JostSolution jost_solution(const Potential& pot, double xi, double r_jost,
                           std::size_t num_points) {
  require(xi > 0.0, errc::domain,
          "jost_solution: xi must be positive (doubled frequency below the continuum)");
  const double R = r_jost > 0.0 ? r_jost : std::max(25.0, 2.0 * pot.config().a + 15.0);

  // Boundary data from the first Born iterate of the algebraic tail
  //   mu(r)  = (1/2ixi) int_r^inf V(s) (e^{2ixi(s-r)} - 1) ds,
  // with the oscillatory part summed by parts; the leftover normalization
  // error is quadratic in the tail strength.
  const double ta = pot.tail_amplitude();
  std::complex<double> mu{0.0, 0.0}, dmu{0.0, 0.0};
  if (ta > 0.0) {
    const double a2 = ta * ta;
    const double d = R * R + a2;
    const double v0 = a2 / (d * d);
    const double v1 = -4.0 * a2 * R / (d * d * d);
    const double v2 = a2 * (20.0 * R * R - 4.0 * a2) / (d * d * d * d);
    const double v3 = a2 * (-120.0 * R * R * R + 72.0 * a2 * R) / (d * d * d * d * d);
    const double tail_integral = std::numbers::pi / (4.0 * ta) - R / (2.0 * d) -
                                 std::atan(R / ta) / (2.0 * ta);
    const std::complex<double> q{0.0, 2.0 * xi};  // 2 i xi
    const std::complex<double> osc = v0 / q - v1 / (q * q) + v2 / (q * q * q) -
                                     v3 / (q * q * q * q);
    dmu = osc;
    mu = -(tail_integral + osc) / q;
  }

  RhsFn rhs = [&pot, xi](double r, std::span<const double> y, std::span<double> d) {
    const double v = pot.value(r);
    d[0] = y[2];
    d[1] = y[3];
    d[2] = v * y[0] + 2.0 * xi * y[3];
    d[3] = v * y[1] - 2.0 * xi * y[2];
  };
  const double y0[4] = {1.0 + mu.real(), mu.imag(), dmu.real(), dmu.imag()};
  OdeOptions opts;
  opts.rtol = 1e-12;
  opts.atol = 1e-14;
  auto sol = std::make_shared<const OdeSolution>(
      integrate_ode_adaptive(rhs, y0, R, -R, opts));

  JostSolution jost;
  jost.xi = xi;
  jost.r_max_ = R;
  jost.sol_ = sol;
  jost.grid_ = std::make_shared<UniformGrid>(-R, R, num_points | 1);
  const std::size_t n = jost.grid_->size();
  jost.k_.resize(n);
  jost.dk_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    jost.k_[i] = jost.eval(jost.grid_->node(i));
    jost.dk_[i] = jost.eval_deriv(jost.grid_->node(i));
  }

  // V is real, so conj(k) solves the same equation and W[k, conj k] = -2 i xi
  // exactly; constancy of the computed Wronskian across the grid checks both
  // the integration accuracy and the normalization of the boundary data.
  const std::complex<double> w_ref{0.0, -2.0 * xi};
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> w =
        jost.k_[i] * std::conj(jost.dk_[i]) - std::conj(jost.k_[i]) * jost.dk_[i];
    require(std::abs(w - w_ref) <= 1e-6 * std::abs(w_ref), errc::convergence,
            "jost_solution: Wronskian drift beyond 1e-6");
  }

  // V is even, so the mirror k(-r) is the second Jost solution and
  // W[k, k(-.)] = -2 i xi / T. Averaging the (constant) pair Wronskian over
  // the grid gives T without any asymptotic extraction, then R follows by
  // least squares from k(-r) = (R/T) k(r) + (1/T) conj(k(r)).
  std::complex<double> w_pair{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    w_pair += -jost.k_[i] * jost.dk_[j] - jost.k_[j] * jost.dk_[i];
  }
  w_pair /= static_cast<double>(n);
  jost.transmission_ = w_ref / w_pair;
  std::complex<double> num{0.0, 0.0};
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    num += std::conj(jost.k_[i]) *
           (jost.transmission_ * jost.k_[j] - std::conj(jost.k_[i]));
    den += std::norm(jost.k_[i]);
  }
  jost.reflection_ = num / den;

  const double unit_defect = std::abs(std::norm(jost.transmission_) +
                                      std::norm(jost.reflection_) - 1.0);
  const double phase_defect =
      std::abs((jost.reflection_ * std::conj(jost.transmission_)).real());
  require(unit_defect <= 1e-6 && phase_defect <= 1e-6, errc::convergence,
          "jost_solution: scattering amplitudes violate even-potential unitarity");
  return jost;
}

GammaResult gamma_coefficient(const KinkProfile& kink, const ModeData& mode,
                              const JostSolution& jost) {
  require(kink.config.n == 1, errc::config,
          "gamma_coefficient: resonant damping is derived for the 1-kink");
  const double w = mode.omega;
  require(4.0 * w * w > kContinuum, errc::domain,
          "gamma_coefficient: 4 w^2 <= 2, the doubled frequency is still inside the gap "
          "(higher-threshold regime N >= 2; the single-resonance coefficient is undefined)");
  const double xi = std::sqrt(4.0 * w * w - kContinuum);
  require(std::abs(jost.xi - xi) <= 1e-8 * xi, errc::config,
          "gamma_coefficient: jost solution carries a different xi");

  const double a2 = kink.config.a * kink.config.a;
  auto integrand = [&](double r) {
    const double v = mode.eval(r);
    return jost.eval(r) * std::sin(2.0 * kink.phi(r)) * v * v / std::sqrt(r * r + a2);
  };
  // The integrand is exponentially localized inside a wide oscillatory
  // window; panels of width <= 4 keep the adaptive rule from accepting a
  // coarse first pass that misses the bump.
  const double R_J = jost.r_max();
  const std::size_t panels = static_cast<std::size_t>(std::ceil(R_J / 2.0));
  std::complex<double> overlap{0.0, 0.0};
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = -R_J + 2.0 * R_J * static_cast<double>(p) / panels;
    const double hi = -R_J + 2.0 * R_J * static_cast<double>(p + 1) / panels;
    overlap += adaptive_integrate_complex(integrand, lo, hi, 1e-13, 1e-16).value;
  }

  const double v0 = mode.eval(0.0);
  require(std::abs(v0) > 1e-8, errc::domain,
          "gamma_coefficient: mode vanishes at the throat, the throat-amplitude "
          "normalization is undefined");

  GammaResult out;
  out.xi = xi;
  out.overlap = overlap;
  out.gamma = std::norm(jost.transmission()) * std::norm(overlap) / (xi * w * v0 * v0);
  out.inv_sqrt_gamma = 1.0 / std::sqrt(out.gamma);
  return out;
}

int threshold_index(double omega) {
  require(omega > 0.0 && omega * omega < kContinuum, errc::domain,
          "threshold_index: frequency outside the gap (0, 2)");
  const double ratio = std::sqrt(kContinuum) / omega;
  require(std::abs(ratio - std::round(ratio)) > 1e-9 * ratio, errc::domain,
          "threshold_index: integer multiple of the frequency sits exactly on the "
          "continuum edge (nongeneric)");
  return static_cast<int>(ratio);
}

}  // namespace sgw
