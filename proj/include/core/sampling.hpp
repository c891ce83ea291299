#ifndef EULAB_CORE_SAMPLING_HPP
#define EULAB_CORE_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "core/linalg.hpp"

namespace core {

// Deterministic low-discrepancy points in a box. The seed is a start offset
// into the Halton sequence so reports are reproducible bit-for-bit.
class HaltonSampler {
 public:
  explicit HaltonSampler(std::uint64_t seed = 0) : index_(seed + 1) {}

  Vec3 next(const Vec3& lo, const Vec3& hi) {
    const Vec3 u = next_unit();
    return {lo[0] + (hi[0] - lo[0]) * u[0], lo[1] + (hi[1] - lo[1]) * u[1],
            lo[2] + (hi[2] - lo[2]) * u[2]};
  }

  Vec3 next_unit() {
    const std::uint64_t i = index_++;
    return {radical_inverse(i, 2), radical_inverse(i, 3), radical_inverse(i, 5)};
  }

  static double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
      f /= static_cast<double>(base);
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    return r;
  }

  std::uint64_t index() const { return index_; }

 private:
  std::uint64_t index_;
};

inline std::vector<Vec3> halton_points(int n, const Vec3& lo, const Vec3& hi,
                                       std::uint64_t seed = 0) {
  HaltonSampler s(seed);
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back(s.next(lo, hi));
  return pts;
}

}  // namespace core

#endif
