#include "sgw/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace sgw {

namespace {

// closed 7-point Newton-Cotes weights on one block of 6 intervals, unit spacing
constexpr double kBlock[7] = {41.0 / 140, 216.0 / 140, 27.0 / 140, 272.0 / 140,
                              27.0 / 140,  216.0 / 140, 41.0 / 140};

// Weights on nodes p = 0..6 (unit spacing) integrating exactly over [6-r, 6]
// for polynomials of degree <= 6: solve the 7x7 moment system.
std::array<double, 7> tail_weights(int r) {
  std::array<double, 7> u{};
  double m[7][8];
  for (int k = 0; k < 7; ++k) {
    for (int j = 0; j < 7; ++j) m[k][j] = std::pow(static_cast<double>(j), k);
    const double hi = std::pow(6.0, k + 1), lo = std::pow(6.0 - r, k + 1);
    m[k][7] = (hi - lo) / (k + 1);
  }
  m[0][0] = 1.0;  // 0^0
  for (int col = 0; col < 7; ++col) {  // Gaussian elimination, partial pivoting
    int piv = col;
    for (int row = col + 1; row < 7; ++row)
      if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
    for (int j = col; j < 8; ++j) std::swap(m[col][j], m[piv][j]);
    for (int row = col + 1; row < 7; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int j = col; j < 8; ++j) m[row][j] -= f * m[col][j];
    }
  }
  for (int row = 6; row >= 0; --row) {
    double acc = m[row][7];
    for (int j = row + 1; j < 7; ++j) acc -= m[row][j] * u[j];
    u[row] = acc / m[row][row];
  }
  return u;
}

}  // namespace

std::vector<double> newton_cotes_weights(std::size_t n, double h) {
  require(n >= 7, errc::dimension, "newton_cotes_weights: need at least 7 nodes");
  require(h > 0, errc::config, "newton_cotes_weights: non-positive spacing");
  std::vector<double> w(n, 0.0);
  const std::size_t blocks = (n - 1) / 6;
  for (std::size_t b = 0; b < blocks; ++b)
    for (int j = 0; j < 7; ++j) w[6 * b + j] += h * kBlock[j];
  const int r = static_cast<int>((n - 1) % 6);
  if (r != 0) {
    const auto u = tail_weights(r);
    for (int j = 0; j < 7; ++j) w[n - 7 + j] += h * u[j];
  }
  return w;
}

double quadrature(std::span<const double> f, double h) {
  const auto w = newton_cotes_weights(f.size(), h);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * f[i];
  return acc;
}

// ---------------------------------------------------------------------------
// adaptive Gauss-Kronrod 15|7

namespace {

// QUADPACK dqk15 abscissae/weights (positive half; node 7 is the origin)
constexpr double xgk[8] = {0.99145537112081263921, 0.94910791234275852453,
                           0.86486442335976907279, 0.74153118559939443986,
                           0.58608723546769113029, 0.40584515137739716691,
                           0.20778495500789846760, 0.0};
constexpr double wgk[8] = {0.02293532201052922496, 0.06309209262997855329,
                           0.10479001032225018384, 0.14065325971552591875,
                           0.16900472663926790283, 0.19035057806478540991,
                           0.20443294007529889241, 0.20948214108472782801};
constexpr double wg[4] = {0.12948496616886969327, 0.27970539148927666790,
                          0.38183005050511894495, 0.41795918367346938776};

template <typename T>
struct Seg {
  double a, b, err;
  T val;
  bool operator<(const Seg& o) const { return err < o.err; }
};

template <typename T, typename F>
Seg<T> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  const T fc = f(c);
  T gauss = wg[3] * fc;
  T kron = wgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const T fsum = f(c - hw * xgk[j]) + f(c + hw * xgk[j]);
    kron += wgk[j] * fsum;
    if (j % 2 == 1) gauss += wg[j / 2] * fsum;
  }
  Seg<T> s;
  s.a = a;
  s.b = b;
  s.val = kron * hw;
  const double diff = std::abs(kron - gauss) * std::abs(hw);
  // QUADPACK-style sharpening of the raw |K15-G7| estimate
  s.err = diff;
  if (diff > 0.0) s.err = std::min(diff, 200.0 * diff * std::sqrt(200.0 * diff));
  return s;
}

template <typename T, typename R>
R adaptive_impl(const std::function<T(double)>& f, double a, double b, double rtol, double atol,
                std::size_t max_segments) {
  require(b != a, errc::config, "adaptive_integrate: empty interval");
  std::priority_queue<Seg<T>> q;
  q.push(gk15<T>(f, a, b));
  T total = q.top().val;
  double toterr = q.top().err;
  std::size_t nseg = 1;
  while (toterr > std::max(atol, rtol * std::abs(total))) {
    if (nseg >= max_segments)
      fail(errc::convergence, "adaptive_integrate: segment budget exhausted");
    Seg<T> worst = q.top();
    q.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b))
      fail(errc::singularity, "adaptive_integrate: interval collapsed");
    Seg<T> l = gk15<T>(f, worst.a, mid), r = gk15<T>(f, mid, worst.b);
    total += l.val + r.val - worst.val;
    toterr += l.err + r.err - worst.err;
    q.push(l);
    q.push(r);
    ++nseg;
  }
  R out;
  out.value = total;
  out.error = toterr;
  out.segments = nseg;
  return out;
}

}  // namespace

QuadResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                              double rtol, double atol, std::size_t max_segments) {
  return adaptive_impl<double, QuadResult>(f, a, b, rtol, atol, max_segments);
}

QuadResultC adaptive_integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, double rtol, double atol,
                                       std::size_t max_segments) {
  return adaptive_impl<std::complex<double>, QuadResultC>(f, a, b, rtol, atol, max_segments);
}

}  // namespace sgw
