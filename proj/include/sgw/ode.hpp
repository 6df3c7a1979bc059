#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sgw/errors.hpp"

namespace sgw {

// rhs(t, y, dydt): fill dydt. dydt.size() == y.size().
using RhsFn = std::function<void(double, std::span<const double>, std::span<double>)>;

// One classical RK4 step. Throws errc::non_finite if a stage produces NaN/Inf.
std::vector<double> rk4_step(const RhsFn& rhs, double t, std::span<const double> y, double dt);

// Reusable RK4 stepper (no per-step allocation).
class Rk4Stepper {
public:
  explicit Rk4Stepper(std::size_t dim);
  // y is updated in place from t to t+dt.
  void step(const RhsFn& rhs, double t, std::span<double> y, double dt);

private:
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;        // 0: choose automatically
  double max_step = 0.0;            // 0: |t1 - t0|
  std::size_t max_steps = 20'000'000;
  bool dense = true;                // keep continuous-output coefficients
};

// Continuous output of the embedded Dormand-Prince 5(4) integrator.
// The stored interpolant is the standard quartic continuous extension
// (local order >= 4), so sampling between steps loses no usable accuracy.
class OdeSolution {
public:
  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }
  std::size_t dim() const { return dim_; }
  std::size_t num_steps() const { return ta_.size(); }
  bool stopped_early() const { return stopped_early_; }

  const std::vector<double>& final_state() const { return y_final_; }

  void eval(double t, std::span<double> y) const;
  double eval(double t, std::size_t comp) const;
  double eval_deriv(double t, std::size_t comp) const;  // d/dt of the interpolant

private:
  friend class Dopri5;
  std::size_t locate(double t) const;

  double t0_ = 0.0, t1_ = 0.0;
  std::size_t dim_ = 0;
  bool stopped_early_ = false;
  std::vector<double> ta_;      // accepted step start times
  std::vector<double> h_;       // accepted step sizes
  std::vector<double> rcont_;   // 5 * dim coefficients per step
  std::vector<double> y_final_;
};

// View of the step just accepted, for event detection. eval() interpolates
// anywhere inside [t_begin, t_end].
class StepView {
public:
  StepView(double ta, double h, std::span<const double> rcont, std::size_t dim)
      : ta_(ta), h_(h), rcont_(rcont), dim_(dim) {}
  double t_begin() const { return ta_; }
  double t_end() const { return ta_ + h_; }
  double eval(double t, std::size_t comp) const;

private:
  double ta_, h_;
  std::span<const double> rcont_;
  std::size_t dim_;
};

// Return false to stop the integration after this step.
using StepCallback = std::function<bool(const StepView&)>;

// Adaptive integration of y' = rhs(t, y) from t0 to t1 (either direction).
// Errors: errc::singularity on step-size underflow below 1e-14*|t1-t0|
// (message carries the location), errc::non_finite if the state stops being
// finite, errc::convergence if max_steps is exhausted.
OdeSolution integrate_ode_adaptive(const RhsFn& rhs, std::span<const double> y0, double t0,
                                   double t1, const OdeOptions& opts = {},
                                   const StepCallback& on_step = {});

}  // namespace sgw
