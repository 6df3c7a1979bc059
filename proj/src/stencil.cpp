#include "sgw/stencil.hpp"

#include <cmath>

namespace sgw {

std::vector<double> fd_weights(double x0, std::span<const double> xs, int deriv) {
  // B. Fornberg's classic recursion for finite-difference weights.
  const int n = static_cast<int>(xs.size()) - 1;
  const int m = deriv;
  require(n >= m && m >= 0, errc::dimension, "fd_weights: need more nodes than derivative order");

  std::vector<double> c((n + 1) * (m + 1), 0.0);
  auto C = [&](int i, int j) -> double& { return c[i * (m + 1) + j]; };

  double c1 = 1.0;
  double c4 = xs[0] - x0;
  C(0, 0) = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
        C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
      C(j, 0) = c4 * C(j, 0) / c3;
    }
    c1 = c2;
  }

  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = C(i, m);
  return w;
}

const StencilSet& StencilSet::first_derivative() {
  static const StencilSet st = [] {
    StencilSet s;
    std::array<double, 9> unit_nodes{};
    // interior: nodes at offsets -4..4 around 0
    for (int i = 0; i < 9; ++i) unit_nodes[i] = i - 4.0;
    auto wi = fd_weights(0.0, std::span<const double>(unit_nodes.data(), 9), 1);
    for (int i = 0; i < 9; ++i) s.interior[i] = wi[i];
    // one-sided rows: evaluation at node j of the leftmost 9 nodes 0..8
    for (int i = 0; i < 9; ++i) unit_nodes[i] = static_cast<double>(i);
    for (int j = 0; j < 4; ++j) {
      auto w = fd_weights(static_cast<double>(j), std::span<const double>(unit_nodes.data(), 9), 1);
      for (int i = 0; i < 9; ++i) s.left[j][i] = w[i];
      // right edge by antisymmetry of d/dx under reflection
      for (int i = 0; i < 9; ++i) s.right[3 - j][8 - i] = -w[i];
    }
    return s;
  }();
  return st;
}

void fd_derivative(std::span<const double> f, const StencilSet& st, double h,
                   std::span<double> out) {
  const std::size_t n = f.size();
  require(n >= 17, errc::dimension, "fd_derivative: fewer than 17 points");
  require(out.size() == n, errc::dimension, "fd_derivative: output size mismatch");
  require(h > 0.0, errc::config, "fd_derivative: non-positive spacing");
  const double inv_h = 1.0 / h;

  for (std::size_t j = 0; j < 4; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 9; ++i) acc += st.left[j][i] * f[i];
    out[j] = acc * inv_h;
  }
  const double* __restrict__ w = st.interior.data();
  for (std::size_t i = 4; i + 4 < n; ++i) {
    double acc = w[0] * f[i - 4] + w[1] * f[i - 3] + w[2] * f[i - 2] + w[3] * f[i - 1];
    acc += w[5] * f[i + 1] + w[6] * f[i + 2] + w[7] * f[i + 3] + w[8] * f[i + 4];
    out[i] = acc * inv_h;
  }
  for (std::size_t j = 0; j < 4; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 9; ++i) acc += st.right[j][i] * f[n - 9 + i];
    out[n - 4 + j] = acc * inv_h;
  }
}

std::vector<double> fd_derivative(std::span<const double> f, const StencilSet& st, double h) {
  std::vector<double> out(f.size());
  fd_derivative(f, st, h, std::span<double>(out));
  return out;
}

void ko_dissipation(std::span<const double> f, double sigma, double h, std::span<double> out) {
  const std::size_t n = f.size();
  require(n >= 17, errc::dimension, "ko_dissipation: fewer than 17 points");
  require(out.size() == n, errc::dimension, "ko_dissipation: output size mismatch");
  require(sigma >= 0.0, errc::config, "ko_dissipation: negative sigma");
  require(h > 0.0, errc::config, "ko_dissipation: non-positive spacing");

  // -sigma (-1)^5 h^9 (D+D-)^5 reduces to (sigma/h) * alternating binomial row.
  static constexpr double kw[11] = {1.0,  -10.0, 45.0,  -120.0, 210.0, -252.0,
                                    210.0, -120.0, 45.0, -10.0,  1.0};
  const double scale = sigma / h;
  for (std::size_t i = 0; i < 5; ++i) out[i] = 0.0;
  for (std::size_t i = n - 5; i < n; ++i) out[i] = 0.0;
  for (std::size_t i = 5; i + 5 < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < 11; ++k) acc += kw[k] * f[i - 5 + k];
    out[i] = scale * acc;
  }
}

std::vector<double> ko_dissipation(std::span<const double> f, double sigma, double h) {
  std::vector<double> out(f.size());
  ko_dissipation(f, sigma, h, std::span<double>(out));
  return out;
}

}  // namespace sgw
