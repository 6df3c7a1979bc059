#include "sgw/roots.hpp"

#include <cmath>

namespace sgw {

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double xtol,
                   std::size_t max_iter) {
  require(xtol > 0, errc::config, "bisect_root: xtol must be positive");
  require(hi > lo, errc::config, "bisect_root: empty bracket");
  double flo = f(lo), fhi = f(hi);
  require(std::isfinite(flo) && std::isfinite(fhi), errc::non_finite,
          "bisect_root: non-finite endpoint value");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  require(std::signbit(flo) != std::signbit(fhi), errc::bracket,
          "bisect_root: no sign change over bracket");
  for (std::size_t it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double secant_refine(const std::function<double(double)>& f, double x0, double x1, double xtol,
                     std::size_t max_iter) {
  double f0 = f(x0), f1 = f(x1);
  for (std::size_t it = 0; it < max_iter; ++it) {
    const double den = f1 - f0;
    if (den == 0.0) break;
    const double x2 = x1 - f1 * (x1 - x0) / den;
    if (!std::isfinite(x2)) break;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x1);
    if (std::abs(x1 - x0) < xtol) break;
  }
  return x1;
}

}  // namespace sgw
