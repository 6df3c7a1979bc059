#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "sgw/grid.hpp"
#include "sgw/ode.hpp"

namespace sgw {

// Static field equation on the wormhole background with throat radius a:
//   phi'' + 2 r/(r^2+a^2) phi' = sin(2 phi),
// n-kink boundary conditions phi(-inf) = 0, phi(+inf) = n*pi, phi(0) = n*pi/2.
struct WormholeConfig {
  double a = 1.0;  // throat radius
  int n = 1;       // kink degree (winding between vacua)
  void validate() const;
  double r_max() const;  // profile support radius, max(25, 10a)
};

// flat-space kink H(r) = 2 atan(e^{sqrt2 r}) and friends
double sine_gordon_kink(double r);
double sine_gordon_kink_deriv(double r);
double sg_zero_mode(double r);  // 2^{-1/4} / cosh(sqrt2 r), unit L2 norm

// Decaying solution of the linearized static equation
//   phi_L'' + 2 r/(r^2+a^2) phi_L' - 2 phi_L = 0,
// normalized so phi_L(r) * r * e^{sqrt2 r} -> 1. Built by summing the
// asymptotic series at r_start and integrating inward (the growing branch
// dies in that direction, so the recessive solution is obtained stably).
class TailSolution {
public:
  const WormholeConfig& config() const { return config_; }
  double r_min() const { return r_min_; }
  double r_start() const { return r_start_; }
  int series_order() const { return series_order_; }  // truncation index at r_start
  double value(double r) const;  // valid for r >= r_min
  double deriv(double r) const;

private:
  friend TailSolution tail_solution(const WormholeConfig&, double, double);
  WormholeConfig config_;
  double r_min_ = 0.0, r_start_ = 0.0, scale_ = 1.0;
  int series_order_ = 0;
  OdeSolution sol_;  // scaled so the seed value at r_start is 1
};

// r_start = 0 picks max(35, 2a), large enough that the series' smallest
// term is far below double precision. Errors: errc::config if the series
// does not reach working precision at r_start.
TailSolution tail_solution(const WormholeConfig& config, double r_match = 6.0,
                           double r_start = 0.0);

struct TailCoefficient;

class KinkProfile {
public:
  WormholeConfig config;
  double b = 0.0;                 // phi'(0), fixed by the shooting method
  double c = 0.0;                 // tail coefficient, NaN until attached
  double c_spread = 0.0;          // ladder spread (error estimate for c)
  bool c_accuracy_warning = false;
  double r_max = 0.0;

  const UniformGrid& grid() const { return *grid_; }
  const std::vector<double>& phi_samples() const { return phi_; }
  const std::vector<double>& dphi_samples() const { return dphi_; }

  // dense profile; any r (the exponential tail extends past r_max)
  double phi(double r) const;
  double dphi(double r) const;
  double ddphi(double r) const;  // second derivative of the dense representation

  bool has_tail() const { return tail_ != nullptr; }
  double switch_radius() const { return r_switch_; }

private:
  friend KinkProfile shoot_kink(const WormholeConfig&, double);
  friend KinkProfile solve_kink(const WormholeConfig&, double);
  friend TailCoefficient tail_coefficient(const KinkProfile&, const TailSolution&, double);

  double phi_halfline(double r) const;   // r >= 0
  double dphi_halfline(double r) const;
  void fill_samples();

  OdeSolution traj_;                     // (phi, phi') on [0, traj_end_]
  double traj_end_ = 0.0;
  std::shared_ptr<const TailSolution> tail_;
  double r_switch_ = 0.0;
  std::shared_ptr<UniformGrid> grid_;
  std::vector<double> phi_, dphi_;
};

// Shooting by bisection on b = phi'(0): trajectories either overshoot n*pi or
// turn back (phi' < 0) below it; the kink is the separatrix. shoot_tol is the
// relative bracket width target. The returned profile carries the raw
// trajectory (vacuum-padded past the point where it is indistinguishable from
// n*pi); use solve_kink for a profile with the fitted exponential tail.
KinkProfile shoot_kink(const WormholeConfig& config, double shoot_tol = 1e-15);

struct TailCoefficient {
  double c = 0.0;
  double spread = 0.0;
  bool accuracy_warning = false;
};

// c_n from the matching ladder c(r0) = (n*pi - phi(r0)) / phi_L(r0),
// r0 in [r_match, r_match + 4], extrapolated with shanks_accelerate.
// The two geometric contaminants (the e^{-2 sqrt2 r0} matching correction and
// the e^{+2 sqrt2 r0} shooting-noise mode) are both annihilated by iterated
// Shanks, which is why the ladder spans a fixed window instead of chasing
// large r0.
TailCoefficient tail_coefficient(const KinkProfile& kink, const TailSolution& tail,
                                 double r_match = 6.0);

// shoot + tail + coefficient; profile switches to the fitted tail at the top
// of the matching ladder (r = 10), where the stitch mismatch is far below the
// local slope, keeping the far field monotone and clean of amplified
// shooting noise.
KinkProfile solve_kink(const WormholeConfig& config, double shoot_tol = 1e-15);

// n(pi/2 + atan(r/a)): the exact limit profile for a -> 0.
double small_a_profile(const WormholeConfig& config, double r);

struct KinkDiagnostics {
  double energy = 0.0;             // static energy, tail-corrected
  double friction_residual = 0.0;  // |(1/2)b^2 - sin^2(n pi/2) - friction integral|
  std::optional<double> separation;  // n = 2: r > 0 with phi = 3 pi/2
};

KinkDiagnostics kink_diagnostics(const KinkProfile& kink);

// Odd decaying solution of  psi'' - 2 cos(2H) psi = -2 r H'  on [0, L]
// (the 1/a^2 correction to the kink at large throat radius), discretized with
// order-8 stencils and solved as a banded system; odd reflection built in.
class PsiCorrection {
public:
  const UniformGrid& grid() const { return *grid_; }
  const std::vector<double>& values() const { return psi_; }
  double at(double r) const;  // interpolated, defined for |r| <= L

private:
  friend PsiCorrection solve_psi(double L, std::size_t num_points);
  std::shared_ptr<UniformGrid> grid_;
  std::vector<double> psi_;
};

PsiCorrection solve_psi(double L = 20.0, std::size_t num_points = 4001);

}  // namespace sgw
