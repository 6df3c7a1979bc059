#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "sgw/errors.hpp"

namespace sgw {

// Finite-difference weights for the m-th derivative at x0 from arbitrary
// nodes xs (Fornberg's recursion). Weights are returned in node order.
std::vector<double> fd_weights(double x0, std::span<const double> xs, int deriv);

// First-derivative stencils of formal order 8 on a uniform grid:
// a 9-point centered interior stencil plus four one-sided 9-point rows for
// the nodes nearest each edge. Weights are dimensionless (divide by h).
struct StencilSet {
  int order = 8;
  std::array<double, 9> interior{};                // centered, offsets -4..4
  std::array<std::array<double, 9>, 4> left{};     // rows for nodes 0..3, nodes 0..8
  std::array<std::array<double, 9>, 4> right{};    // rows for nodes n-4..n-1, nodes n-9..n-1

  static const StencilSet& first_derivative();     // cached order-8 set
};

// d/dx of sampled values with spacing h. out may not alias values.
void fd_derivative(std::span<const double> values, const StencilSet& st, double h,
                   std::span<double> out);
std::vector<double> fd_derivative(std::span<const double> values, const StencilSet& st, double h);

// Kreiss-Oliger filter  -sigma (-1)^p h^(2p-1) (D+^p D-^p) v  with p = 5
// (an 11-point 10th-derivative filter, strictly damping, zero on polynomials
// of degree <= 9). Nodes without full stencil support get zero. out may not
// alias values.
void ko_dissipation(std::span<const double> values, double sigma, double h,
                    std::span<double> out);
std::vector<double> ko_dissipation(std::span<const double> values, double sigma, double h);

}  // namespace sgw
