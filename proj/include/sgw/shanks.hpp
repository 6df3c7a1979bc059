#pragma once

#include <span>

namespace sgw {

struct ShanksResult {
  double value = 0.0;
  bool degraded = false;  // first transform level hit the denominator floor
  int levels = 0;         // transform levels actually applied
};

// Iterated Shanks transform S(A_j) = (A_{j+1} A_{j-1} - A_j^2) /
// (A_{j+1} + A_{j-1} - 2 A_j), applied until fewer than 3 terms remain or a
// denominator falls below 1e-30 * max|A|. Returns the last element of the
// deepest level reached. A floor hit at the first level returns the
// untransformed last element with the degraded flag set (the sequence is
// already constant to working precision).
ShanksResult shanks_accelerate(std::span<const double> seq);

}  // namespace sgw
