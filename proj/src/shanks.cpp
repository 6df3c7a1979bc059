#include "sgw/shanks.hpp"

#include <cmath>
#include <vector>

#include "sgw/errors.hpp"

namespace sgw {

ShanksResult shanks_accelerate(std::span<const double> seq) {
  require(seq.size() >= 1, errc::dimension, "shanks_accelerate: empty sequence");
  double scale = 0.0;
  for (double x : seq) scale = std::max(scale, std::abs(x));
  const double floor = 1e-30 * (scale > 0.0 ? scale : 1.0);

  std::vector<double> cur(seq.begin(), seq.end());
  ShanksResult res;
  res.value = cur.back();
  while (cur.size() >= 3) {
    std::vector<double> next(cur.size() - 2);
    for (std::size_t j = 1; j + 1 < cur.size(); ++j) {
      const double den = cur[j + 1] + cur[j - 1] - 2.0 * cur[j];
      if (std::abs(den) < floor) {
        if (res.levels == 0) {
          // flat to working precision already; transforming would divide noise
          return {seq.back(), true, 0};
        }
        return res;  // deeper level unusable, keep last stable value
      }
      next[j - 1] = (cur[j + 1] * cur[j - 1] - cur[j] * cur[j]) / den;
    }
    cur = std::move(next);
    ++res.levels;
    res.value = cur.back();
  }
  return res;
}

}  // namespace sgw
