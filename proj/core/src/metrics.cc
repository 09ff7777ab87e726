// core/src/metrics.cc

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

#include "rnntx/metrics.h"

#include <vector>

#include "rnntx/error.h"

namespace rnntx {

EditCounts align(std::span<const std::string> reference,
                 std::span<const std::string> hypothesis) {
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();

  // d[i][j]: edit distance between reference[:i] and hypothesis[:j].
  std::vector<std::vector<std::int32_t>> d(n + 1,
                                           std::vector<std::int32_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = static_cast<std::int32_t>(i);
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = static_cast<std::int32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::int32_t subst =
          d[i - 1][j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      std::int32_t insert = d[i][j - 1] + 1;
      std::int32_t remove = d[i - 1][j] + 1;
      d[i][j] = std::min(subst, std::min(insert, remove));
    }
  }

  EditCounts counts;
  counts.correct_ref_len = static_cast<std::int64_t>(n);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      std::int32_t match_cost = reference[i - 1] == hypothesis[j - 1] ? 0 : 1;
      if (d[i][j] == d[i - 1][j - 1] + match_cost) {
        if (match_cost != 0) ++counts.sub;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && d[i][j] == d[i][j - 1] + 1) {
      ++counts.ins;
      --j;
      continue;
    }
    ++counts.del;
    --i;
  }
  return counts;
}

double wer(const EditCounts& counts) {
  if (counts.correct_ref_len <= 0) {
    throw EmptyReferenceError("wer: reference has no words");
  }
  return static_cast<double>(counts.total_edits()) /
         static_cast<double>(counts.correct_ref_len);
}

double werd(double wer_modified, double wer_original) {
  return wer_modified - wer_original;
}

double werdr(double werd_baseline, double werd_proposed) {
  if (werd_baseline == 0.0) {
    throw DivisionByZeroError("werdr: baseline degradation is zero");
  }
  return (werd_baseline - werd_proposed) / werd_baseline;
}

}  // namespace rnntx
