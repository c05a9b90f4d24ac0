#pragma once

#include <cmath>
#include <cstdint>

#include "graphnli/linalg.hpp"

namespace graphnli {

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

// One bias-corrected Adam update for a flat tensor. `step` is 1-based and
// shared by all tensors updated in the same optimizer step.
inline void adam_tensor(Vec& param, Vec& m, Vec& v, const Vec& grad, double lr,
                        std::int64_t step) {
  double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
  double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = kAdamBeta1 * m[i] + (1.0 - kAdamBeta1) * grad[i];
    v[i] = kAdamBeta2 * v[i] + (1.0 - kAdamBeta2) * grad[i] * grad[i];
    double mhat = m[i] / bc1;
    double vhat = v[i] / bc2;
    param[i] -= lr * mhat / (std::sqrt(vhat) + kAdamEps);
  }
}

}  // namespace graphnli
