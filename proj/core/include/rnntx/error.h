// core/include/rnntx/error.h

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

#ifndef RNNTX_ERROR_H_
#define RNNTX_ERROR_H_

#include <stdexcept>
#include <string>

namespace rnntx {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CyclicGraphError : Error {
  using Error::Error;
};
struct NoPathError : Error {
  using Error::Error;
};
struct TooManyPathsError : Error {
  using Error::Error;
};
struct InvalidTargetError : Error {
  using Error::Error;
};
struct ShapeMismatchError : Error {
  using Error::Error;
};
struct UnnormalizedRowsError : Error {
  using Error::Error;
};
struct DegenerateVocabularyError : Error {
  using Error::Error;
};
struct EmptyReferenceError : Error {
  using Error::Error;
};
struct DivisionByZeroError : Error {
  using Error::Error;
};
struct NonFiniteLossError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace rnntx

#endif  // RNNTX_ERROR_H_
