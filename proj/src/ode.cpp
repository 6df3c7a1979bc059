#include "sgw/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace sgw {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

std::string at_t(const char* what, double t) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s at t = %.17g", what, t);
  return buf;
}

}  // namespace

std::vector<double> rk4_step(const RhsFn& rhs, double t, std::span<const double> y, double dt) {
  std::vector<double> out(y.begin(), y.end());
  Rk4Stepper stepper(y.size());
  stepper.step(rhs, t, std::span<double>(out), dt);
  return out;
}

Rk4Stepper::Rk4Stepper(std::size_t dim)
    : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

void Rk4Stepper::step(const RhsFn& rhs, double t, std::span<double> y, double dt) {
  const std::size_t n = y.size();
  require(n == k1_.size(), errc::dimension, "Rk4Stepper: state size changed");
  rhs(t, y, k1_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
  rhs(t + 0.5 * dt, tmp_, k2_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
  rhs(t + 0.5 * dt, tmp_, k3_);
  for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
  rhs(t + dt, tmp_, k4_);
  for (std::size_t i = 0; i < n; ++i)
    y[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  if (!all_finite(y)) fail(errc::non_finite, at_t("rk4_step: non-finite state", t + dt));
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)

namespace {

// clang-format off
constexpr double c2 = 1.0/5, c3 = 3.0/10, c4 = 4.0/5, c5 = 8.0/9;
constexpr double a21 = 1.0/5;
constexpr double a31 = 3.0/40,       a32 = 9.0/40;
constexpr double a41 = 44.0/45,      a42 = -56.0/15,      a43 = 32.0/9;
constexpr double a51 = 19372.0/6561, a52 = -25360.0/2187, a53 = 64448.0/6561, a54 = -212.0/729;
constexpr double a61 = 9017.0/3168,  a62 = -355.0/33,     a63 = 46732.0/5247, a64 = 49.0/176,
                 a65 = -5103.0/18656;
constexpr double b1 = 35.0/384, b3 = 500.0/1113, b4 = 125.0/192, b5 = -2187.0/6784, b6 = 11.0/84;
// b - bhat (error estimator row)
constexpr double e1 = 71.0/57600, e3 = -71.0/16695, e4 = 71.0/1920, e5 = -17253.0/339200,
                 e6 = 22.0/525, e7 = -1.0/40;
// continuous-output row
constexpr double d1 = -12715105075.0/11282082432.0, d3 = 87487479700.0/32700410799.0,
                 d4 = -10690763975.0/1880347072.0,  d5 = 701980252875.0/199316789632.0,
                 d6 = -1453857185.0/822651844.0,    d7 = 69997945.0/29380423.0;
// clang-format on

double interp(double theta, const double* rc, std::size_t dim, std::size_t comp) {
  const double r1 = rc[comp], r2 = rc[dim + comp], r3 = rc[2 * dim + comp],
               r4 = rc[3 * dim + comp], r5 = rc[4 * dim + comp];
  const double th1 = 1.0 - theta;
  return r1 + theta * (r2 + th1 * (r3 + theta * (r4 + th1 * r5)));
}

double interp_deriv(double theta, const double* rc, std::size_t dim, std::size_t comp, double h) {
  const double r2 = rc[dim + comp], r3 = rc[2 * dim + comp], r4 = rc[3 * dim + comp],
               r5 = rc[4 * dim + comp];
  // d/dtheta of r2*th + r3*th(1-th) + r4*th^2(1-th) + r5*th^2(1-th)^2
  const double th = theta;
  const double d = r2 + r3 * (1.0 - 2.0 * th) + r4 * th * (2.0 - 3.0 * th) +
                   r5 * th * (2.0 - 3.0 * th) * (1.0 - th) - r5 * th * th * (1.0 - th);
  return d / h;
}

}  // namespace

class Dopri5 {
public:
  static OdeSolution run(const RhsFn& rhs, std::span<const double> y0, double t0, double t1,
                         const OdeOptions& opts, const StepCallback& on_step);
};

std::size_t OdeSolution::locate(double t) const {
  require(dim_ > 0 && !ta_.empty(), errc::dimension, "OdeSolution: empty solution");
  const double lo = std::min(t0_, t1_), hi = std::max(t0_, t1_);
  require(t >= lo - 1e-9 * (hi - lo + 1.0) && t <= hi + 1e-9 * (hi - lo + 1.0), errc::domain,
          "OdeSolution::eval outside integration range");
  // steps are monotone in ta_ (increasing or decreasing with direction)
  const bool fwd = t1_ >= t0_;
  std::size_t lo_i = 0, hi_i = ta_.size() - 1;
  while (lo_i < hi_i) {
    const std::size_t mid = (lo_i + hi_i + 1) / 2;
    const bool before = fwd ? (ta_[mid] <= t) : (ta_[mid] >= t);
    if (before)
      lo_i = mid;
    else
      hi_i = mid - 1;
  }
  return lo_i;
}

void OdeSolution::eval(double t, std::span<double> y) const {
  require(y.size() == dim_, errc::dimension, "OdeSolution::eval: bad output size");
  const std::size_t s = locate(t);
  const double theta = (t - ta_[s]) / h_[s];
  const double* rc = rcont_.data() + 5 * dim_ * s;
  for (std::size_t c = 0; c < dim_; ++c) y[c] = interp(theta, rc, dim_, c);
}

double OdeSolution::eval(double t, std::size_t comp) const {
  const std::size_t s = locate(t);
  const double theta = (t - ta_[s]) / h_[s];
  return interp(theta, rcont_.data() + 5 * dim_ * s, dim_, comp);
}

double OdeSolution::eval_deriv(double t, std::size_t comp) const {
  const std::size_t s = locate(t);
  const double theta = (t - ta_[s]) / h_[s];
  return interp_deriv(theta, rcont_.data() + 5 * dim_ * s, dim_, comp, h_[s]);
}

double StepView::eval(double t, std::size_t comp) const {
  const double theta = (t - ta_) / h_;
  return interp(theta, rcont_.data(), dim_, comp);
}

OdeSolution Dopri5::run(const RhsFn& rhs, std::span<const double> y0, double t0, double t1,
                        const OdeOptions& opts, const StepCallback& on_step) {
  const std::size_t n = y0.size();
  require(n > 0, errc::dimension, "integrate_ode_adaptive: empty state");
  require(t1 != t0, errc::config, "integrate_ode_adaptive: empty time span");
  require(opts.rtol > 0 && opts.atol > 0, errc::config, "integrate_ode_adaptive: tolerances");

  const double dir = (t1 > t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const double hmax = (opts.max_step > 0) ? opts.max_step : span;
  const double hmin = 1e-14 * span;

  OdeSolution sol;
  sol.t0_ = t0;
  sol.t1_ = t1;
  sol.dim_ = n;

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y1(n);
  require(all_finite(y), errc::non_finite, "integrate_ode_adaptive: non-finite initial data");

  rhs(t0, y, k1);
  require(all_finite(k1), errc::non_finite, at_t("integrate_ode_adaptive: non-finite rhs", t0));

  // initial step: crude power-of-scale guess, the controller fixes it quickly
  double h;
  if (opts.initial_step > 0) {
    h = std::min(opts.initial_step, hmax);
  } else {
    double dy = 0.0, df = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opts.atol + opts.rtol * std::abs(y[i]);
      dy += (y[i] / sc) * (y[i] / sc);
      df += (k1[i] / sc) * (k1[i] / sc);
    }
    h = (df > 0 && dy > 0) ? 0.01 * std::sqrt(dy / df) : 1e-6 * span;
    h = std::min(h, hmax);
    if (h <= 0 || !std::isfinite(h)) h = 1e-6 * span;
  }

  double t = t0;
  bool done = false;
  std::size_t steps = 0;

  while (!done) {
    if (++steps > opts.max_steps)
      fail(errc::convergence, at_t("integrate_ode_adaptive: max_steps exhausted", t));
    if (h < hmin) fail(errc::singularity, at_t("integrate_ode_adaptive: step size underflow", t));
    double hd = dir * h;
    if ((t + hd - t1) * dir >= 0.0) {
      hd = t1 - t;
      done = true;
    }

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hd * a21 * k1[i];
    rhs(t + c2 * hd, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + hd * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * hd, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hd * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * hd, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hd * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * hd, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + hd * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + hd, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y1[i] = y[i] + hd * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + hd, y1, k7);  // FSAL

    double err = 0.0;
    bool finite = all_finite(y1);
    if (finite) {
      for (std::size_t i = 0; i < n; ++i) {
        const double ei = hd * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                e7 * k7[i]);
        const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
        err += (ei / sc) * (ei / sc);
      }
      err = std::sqrt(err / static_cast<double>(n));
      if (!std::isfinite(err)) finite = false;
    }

    if (!finite) {  // treat as a hard reject
      h *= 0.2;
      done = false;
      if (h < hmin)
        fail(errc::non_finite, at_t("integrate_ode_adaptive: non-finite state", t));
      continue;
    }

    if (err <= 1.0) {  // accept
      if (opts.dense || on_step) {
        // continuous extension coefficients for this step
        sol.ta_.push_back(t);
        sol.h_.push_back(hd);
        const std::size_t base = sol.rcont_.size();
        sol.rcont_.resize(base + 5 * n);
        double* rc = sol.rcont_.data() + base;
        for (std::size_t i = 0; i < n; ++i) {
          const double ydiff = y1[i] - y[i];
          const double bspl = hd * k1[i] - ydiff;
          rc[i] = y[i];
          rc[n + i] = ydiff;
          rc[2 * n + i] = bspl;
          rc[3 * n + i] = ydiff - hd * k7[i] - bspl;
          rc[4 * n + i] = hd * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                d7 * k7[i]);
        }
        if (on_step) {
          StepView view(t, hd, std::span<const double>(rc, 5 * n), n);
          if (!on_step(view)) {
            sol.stopped_early_ = true;
            t += hd;
            y.swap(y1);
            break;
          }
        }
        if (!opts.dense) {  // callback-only mode: drop the slab again
          sol.ta_.pop_back();
          sol.h_.pop_back();
          sol.rcont_.resize(base);
        }
      }
      t += hd;
      y.swap(y1);
      k1.swap(k7);
      const double fac = std::clamp(0.9 * std::pow(err > 1e-300 ? err : 1e-300, -0.2), 0.2, 10.0);
      h = std::min(std::abs(hd) * fac, hmax);
    } else {  // reject
      done = false;
      const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      h = std::abs(hd) * fac;
    }
  }

  sol.t1_ = t;
  sol.y_final_ = std::move(y);
  if (sol.ta_.empty() && !opts.dense) {
    // keep locate() well-defined even without dense storage
    sol.ta_.push_back(t0);
    sol.h_.push_back(t - t0);
    sol.rcont_.assign(5 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) sol.rcont_[i] = sol.y_final_[i];
  }
  return sol;
}

OdeSolution integrate_ode_adaptive(const RhsFn& rhs, std::span<const double> y0, double t0,
                                   double t1, const OdeOptions& opts,
                                   const StepCallback& on_step) {
  return Dopri5::run(rhs, y0, t0, t1, opts, on_step);
}

}  // namespace sgw
