#pragma once

#include <functional>

#include "sgw/errors.hpp"

namespace sgw {

// Bisection on [lo, hi]; f(lo) and f(hi) must differ in sign (errc::bracket
// otherwise). Returns the bracket midpoint once its width is below xtol.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double xtol,
                   std::size_t max_iter = 200);

// A few secant iterations from (x0, x1); used as an independent cross-check
// of bisection results. Stops when |dx| < xtol or max_iter is reached.
double secant_refine(const std::function<double(double)>& f, double x0, double x1, double xtol,
                     std::size_t max_iter = 40);

}  // namespace sgw
