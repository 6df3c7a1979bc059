#pragma once

#include <cstddef>
#include <vector>

#include "sgw/errors.hpp"

namespace sgw {

// Uniform 1-d grid over [lower, upper].
//
// Node-centered grids include both endpoints (spacing = L/(n-1)).
// Cell-centered grids put nodes at midpoints of n equal cells
// (spacing = L/n), so every node lies strictly inside the interval;
// the evolution module relies on this to avoid the coordinate
// singularities at y = +-pi/2.
class UniformGrid {
public:
  UniformGrid(double lower, double upper, std::size_t num_points, bool cell_centered = false)
      : lower_(lower), upper_(upper), n_(num_points), cell_centered_(cell_centered) {
    require(upper > lower, errc::config, "UniformGrid: upper <= lower");
    // 17 nodes is the smallest grid on which the order-8 one-sided closures
    // and the 11-point dissipation stencil do not overlap across the domain.
    require(n_ >= 17, errc::dimension, "UniformGrid: fewer than 17 points");
    spacing_ = cell_centered_ ? (upper - lower) / static_cast<double>(n_)
                              : (upper - lower) / static_cast<double>(n_ - 1);
  }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return n_; }
  bool cell_centered() const { return cell_centered_; }

  double node(std::size_t i) const {
    return cell_centered_ ? lower_ + (static_cast<double>(i) + 0.5) * spacing_
                          : lower_ + static_cast<double>(i) * spacing_;
  }

  std::vector<double> nodes() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
    return x;
  }

private:
  double lower_, upper_, spacing_;
  std::size_t n_;
  bool cell_centered_;
};

}  // namespace sgw
