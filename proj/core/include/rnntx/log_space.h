// core/include/rnntx/log_space.h

// Copyright 2026  The rnntx authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef RNNTX_LOG_SPACE_H_
#define RNNTX_LOG_SPACE_H_

#include <cmath>
#include <span>

namespace rnntx {

// Log-domain zero. A finite sentinel instead of -inf keeps the accumulators
// free of (-inf) - (-inf) = NaN; anything at or below kLogZeroThreshold is
// treated as "no mass".
inline constexpr double kLogZero = -1e30;
inline constexpr double kLogZeroThreshold = -1e29;

inline bool is_log_zero(double x) { return x <= kLogZeroThreshold; }

// Clamp true infinities (and anything below the sentinel) to kLogZero.
inline double clamp_log(double x) {
  return (std::isfinite(x) && x > kLogZeroThreshold) ? x : kLogZero;
}

// Log-semiring product: sum of log scores, absorbing at kLogZero.
inline double log_mul(double a, double b) {
  if (is_log_zero(a) || is_log_zero(b)) return kLogZero;
  return a + b;
}

// Log-semiring sum: log(e^a + e^b).
inline double log_add(double a, double b) {
  if (is_log_zero(a)) return b;
  if (is_log_zero(b)) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

inline double log_sum(std::span<const double> xs) {
  double acc = kLogZero;
  for (double x : xs) acc = log_add(acc, x);
  return acc;
}

}  // namespace rnntx

#endif  // RNNTX_LOG_SPACE_H_
