// core/include/rnntx/selfcheck.h

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

#ifndef RNNTX_SELFCHECK_H_
#define RNNTX_SELFCHECK_H_

#include <cstdint>

#include "rnntx/loss.h"

namespace rnntx {

// Randomized verification suites for the loss engine: brute-force oracle
// equivalence, finite-difference gradients, and the -inf degeneration
// identities. Shared by the check-loss CLI command and the acceptance
// tests.

struct CheckOptions {
  std::int64_t trials = 1000;
  std::int32_t max_frames = 4;
  std::int32_t max_units = 3;
  std::int32_t max_vocab = 3;
  std::uint64_t seed = 0;
  bool inject_gradient_fault = false;  // test hook: corrupts one analytic
                                       // gradient entry to prove the check
                                       // fails loudly
};

struct CheckSummary {
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  double max_deviation = 0.0;

  bool ok() const { return trials > 0 && failures == 0; }
};

// |DP loss - path-enumeration loss| < 1e-8 across kinds and modes.
CheckSummary check_loss_oracle(const CheckOptions& options);

// Analytic gradient vs central finite differences (step 1e-5), relative
// error < 1e-4 with an absolute floor of 1e-4 on the scale.
CheckSummary check_loss_gradients(const CheckOptions& options);

// star(-inf) == rnnt, bypass(-inf) == rnnt, trt(-inf,-inf) == rnnt,
// trt(skip-frame=-inf) == bypass, trt(skip-token=-inf) == star; loss and
// gradients within 1e-8.
CheckSummary check_degeneration(const CheckOptions& options);

}  // namespace rnntx

#endif  // RNNTX_SELFCHECK_H_
