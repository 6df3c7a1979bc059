#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "sgw/grid.hpp"
#include "sgw/kink.hpp"

namespace sgw {

// Linearization about the n-kink. Writing the perturbed field as
// phi_n + (r^2+a^2)^{-1/2} u and separating u = e^{-i w t} v(r) gives the
// Schrodinger eigenvalue problem on the line,
//   L_n v = (-d^2/dr^2 + 2 + V_n) v = w^2 v,
// with continuous spectrum w^2 >= 2 and at most n eigenvalues in the gap
// (0, 2). Everything in this module lives on top of that operator.

// V_n(r) = -4 sin^2(phi_n(r)) + a^2/(r^2+a^2)^2. Even in r; past r_max only
// the algebraic centrifugal tail survives (the kink part is exponentially
// dead there), so value() switches to the tail model a^2/(r^2+a^2)^2.
class Potential {
public:
  // Custom profile on [-r_max, r_max] with tail amplitude tail_a (evaluated
  // at |r|, so the profile must be even; tail_a = 0 truncates to zero).
  // Used for limit-case operators and for synthetic spectra in tests.
  Potential(std::function<double(double)> profile, double r_max, WormholeConfig config,
            double tail_a, std::size_t num_points = 4001);

  const WormholeConfig& config() const { return config_; }
  double r_max() const { return r_max_; }
  double tail_amplitude() const { return tail_a_; }
  const UniformGrid& grid() const { return *grid_; }
  const std::vector<double>& samples() const { return samples_; }
  double value(double r) const;

private:
  WormholeConfig config_;
  double r_max_ = 0.0, tail_a_ = 0.0;
  std::function<double(double)> profile_;
  std::shared_ptr<UniformGrid> grid_;
  std::vector<double> samples_;
};

Potential build_potential(const KinkProfile& kink, std::size_t num_points = 4001);

enum class Parity { even, odd };

// One gap eigenvalue with its eigenfunction. Samples live on a symmetric
// node-centered grid (odd point count, r = 0 on a node); v is L2-normalized
// over the line with the sign fixed by v(0) > 0 (even) or v'(0) > 0 (odd).
class ModeData {
public:
  double omega2 = 0.0;
  double omega = 0.0;
  Parity parity = Parity::even;
  int node_count = 0;
  bool near_threshold = false;  // within 1e-6 of the continuum edge 2

  const UniformGrid& grid() const { return *grid_; }
  const std::vector<double>& v() const { return v_; }
  double eval(double r) const;  // dense evaluation (piecewise solution, any |r| <= R)

private:
  friend struct ModeAssembler;
  std::shared_ptr<UniformGrid> grid_;
  std::vector<double> v_;
  std::shared_ptr<const struct ModeDense> dense_;
};

// Eigenvalue search window and resolution. The coarse scan brackets sign
// changes of the matching Wronskian; a second-order Sturm count on a
// finite-difference matrix seeds any bracket the scan resolution misses.
struct EigenScan {
  double omega2_min = 0.0;
  double omega2_max = 2.0;          // clamped below the continuum edge
  std::size_t scan_points = 400;
  bool include_even = true;
  bool include_odd = true;
  double grid_spacing = 0.05;       // eigenfunction sampling target
};

// All eigenvalues in the window, sorted by omega2. Shooting from r = 0 with
// parity data and from r = R with decaying data v ~ e^{-kappa r}
// (kappa = sqrt(2 - w^2), tail-corrected), matched by the Wronskian;
// brackets are refined by bisection to 1e-10. R = max(30, 12/kappa), capped
// at 1e4 near the threshold.
std::vector<ModeData> gap_eigenvalues(const Potential& pot, const EigenScan& scan = {});

// Throat radius where the tracked gap mode reaches the continuum edge.
// kappa(a) is computed on a ladder descending toward the disappearance,
// fitted linearly in a at the smallest resolvable kappa, and extrapolated
// to kappa = 0 (kappa is the analytic variable at a 1d threshold). The mode
// must exist at a_hi and be gone at a_lo, else errc::bracket.
double critical_radius(int n, int mode_index, double a_lo, double a_hi);

// Outgoing solution k(r) = e^{i xi r} m(r), m -> 1 at +infinity, of
// k'' = (V - xi^2) k, integrated inward from R_J with boundary data from the
// first-order tail expansion of m (error beyond quadratic in the tail).
// The conjugate conj(k) solves the same real equation, and the pair carries
// W[k, conj k] = k (conj k)' - (conj k) k' = -2 i xi at every r; this exact
// identity is the internal consistency gate. (For V = 0 the reflection
// kbar(r) = k(-r) coincides with conj(k); a reflective potential splits the
// two by the transmission coefficient.)
class JostSolution {
public:
  double xi = 0.0;
  double r_max() const { return r_max_; }
  const UniformGrid& grid() const { return *grid_; }
  const std::vector<std::complex<double>>& k() const { return k_; }
  const std::vector<std::complex<double>>& dk() const { return dk_; }
  std::complex<double> eval(double r) const;       // dense, |r| <= R_J
  std::complex<double> eval_deriv(double r) const;

  // Scattering amplitudes of the even potential at energy xi^2. The mirror
  // k(-r) is the second Jost solution (outgoing at -infinity), and its
  // Wronskian with k equals -2 i xi / T; the reflection follows from
  // k(-r) = (R/T) k(r) + (1/T) conj(k(r)). Unitarity |T|^2 + |R|^2 = 1 and
  // the even-potential phase lock Re(R conj T) = 0 are enforced on
  // construction.
  std::complex<double> transmission() const { return transmission_; }
  std::complex<double> reflection() const { return reflection_; }

private:
  friend JostSolution jost_solution(const Potential&, double, double, std::size_t);
  double r_max_ = 0.0;
  std::shared_ptr<UniformGrid> grid_;
  std::vector<std::complex<double>> k_, dk_;
  std::complex<double> transmission_{1.0, 0.0};
  std::complex<double> reflection_{0.0, 0.0};
  std::shared_ptr<const OdeSolution> sol_;
};

// xi > 0 required (frequency inside the continuous spectrum). r_jost = 0
// picks max(25, 2a + 15), past every exponentially localized feature.
// Errors: errc::domain for xi <= 0, errc::convergence if the internal
// Wronskian drifts beyond 1e-6.
JostSolution jost_solution(const Potential& pot, double xi, double r_jost = 0.0,
                           std::size_t num_points = 4001);

// Resonant damping of the 1-kink internal mode: the quadratic self-coupling
// of the mode drives radiation at frequency 2w, which lies in the continuum
// when xi = sqrt(4 w^2 - 2) is real; the energy drain gives the decay law
// amplitude ~ Gamma^{-1/2} t^{-1/2}. The coefficient is
//   Gamma = (|T|^2 / (xi w)) |<k, sin(2 phi_1) v^2 / sqrt(r^2+a^2)>|^2 / v(0)^2.
// The transmission factor |T|^2 accounts for the reflected part of the
// outgoing radiation field (the outgoing-outgoing Green function carries
// 1/T, and even-potential unitarity collapses the reflected overlap to an
// overall transmission probability). The 1/v(0)^2 quotes Gamma in the
// throat-amplitude normalization: inv_sqrt_gamma is directly the late-time
// coefficient of the field oscillation at r = 0, the quantity an evolution
// measures. overlap stores the raw integral with the unit-L2-norm mode.
// Nonnegative by construction.
struct GammaResult {
  double xi = 0.0;
  std::complex<double> overlap{0.0, 0.0};
  double gamma = 0.0;
  double inv_sqrt_gamma = 0.0;
};

// Requires 4 w^2 > 2 (the first-threshold regime, N = 1); below that the
// doubled frequency is still in the gap and the N >= 2 cascade applies
// (errc::domain). The jost solution must carry xi = sqrt(4 w^2 - 2).
GammaResult gamma_coefficient(const KinkProfile& kink, const ModeData& mode,
                              const JostSolution& jost);

// The N with N^2 w^2 < 2 < (N+1)^2 w^2: (N+1) w is the lowest multiple of
// the mode frequency inside the continuous spectrum, so energy leaves
// through the N+1 harmonic and |Z| ~ t^{-1/(2N)}. Exact multiples
// m^2 w^2 = 2 are nongeneric and rejected (errc::domain).
int threshold_index(double omega);

}  // namespace sgw
