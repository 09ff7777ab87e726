// core/include/rnntx/metrics.h

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

#ifndef RNNTX_METRICS_H_
#define RNNTX_METRICS_H_

#include <cstdint>
#include <span>
#include <string>

namespace rnntx {

struct EditCounts {
  std::int64_t sub = 0;
  std::int64_t ins = 0;
  std::int64_t del = 0;
  std::int64_t correct_ref_len = 0;  // reference word count

  std::int64_t total_edits() const { return sub + ins + del; }

  EditCounts& operator+=(const EditCounts& other) {
    sub += other.sub;
    ins += other.ins;
    del += other.del;
    correct_ref_len += other.correct_ref_len;
    return *this;
  }
};

// Minimal-edit word alignment under unit costs. Backtrace ties prefer
// substitution over insertion over deletion.
EditCounts align(std::span<const std::string> reference,
                 std::span<const std::string> hypothesis);

// (sub + ins + del) / reference length, over pooled corpus counts.
// Throws EmptyReferenceError when the reference is empty.
double wer(const EditCounts& counts);

// Absolute degradation: WER on corrupted-target training minus WER on clean
// training. May be negative.
double werd(double wer_modified, double wer_original);

// Fraction of the baseline degradation recovered by a proposed loss.
// Throws DivisionByZeroError when the baseline degradation is zero.
double werdr(double werd_baseline, double werd_proposed);

}  // namespace rnntx

#endif  // RNNTX_METRICS_H_
