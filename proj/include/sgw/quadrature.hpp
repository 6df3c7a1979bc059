#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sgw/errors.hpp"

namespace sgw {

// Weights of the composite 7-point Newton-Cotes rule on n uniform nodes with
// spacing h (blocks of 6 intervals; a moment-matched closure on the last 7
// nodes absorbs the remainder, keeping the rule exact for degree <= 6
// everywhere and degree <= 7 on full blocks).
std::vector<double> newton_cotes_weights(std::size_t n, double h);

// Integral of sampled values with spacing h using the rule above.
double quadrature(std::span<const double> values, double h);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;       // conservative absolute estimate
  std::size_t segments = 0;
};

struct QuadResultC {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
  std::size_t segments = 0;
};

// Adaptive Gauss-Kronrod (15|7) over [a, b]: bisect the worst segment until
// the summed error estimate meets max(atol, rtol*|I|).
// Errors: errc::convergence if the segment budget is exhausted.
QuadResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                              double rtol = 1e-12, double atol = 1e-14,
                              std::size_t max_segments = 4000);

QuadResultC adaptive_integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, double rtol = 1e-12,
                                       double atol = 1e-14, std::size_t max_segments = 4000);

}  // namespace sgw
