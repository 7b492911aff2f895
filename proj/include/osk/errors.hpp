// Copyright 2026 The opsyskit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace osk {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define OSK_DEFINE_ERROR(NAME)                                      \
  class NAME : public Error {                                       \
   public:                                                          \
    explicit NAME(const std::string& msg) : Error(#NAME ": " + msg) {} \
  }

OSK_DEFINE_ERROR(NotHermitianError);
OSK_DEFINE_ERROR(NoConvergenceError);
OSK_DEFINE_ERROR(DimensionMismatchError);
OSK_DEFINE_ERROR(ShapeMismatchError);
OSK_DEFINE_ERROR(DomainNotFullAlgebraError);
OSK_DEFINE_ERROR(LevelMismatchError);
OSK_DEFINE_ERROR(NotPositiveError);
OSK_DEFINE_ERROR(WeightMismatchError);
OSK_DEFINE_ERROR(SolverFailureError);
OSK_DEFINE_ERROR(NoFaithfulInvariantStateError);
OSK_DEFINE_ERROR(ClosureViolationError);
OSK_DEFINE_ERROR(RejectionBudgetExceededError);
OSK_DEFINE_ERROR(DegenerateDimensionError);
OSK_DEFINE_ERROR(AlphaOutOfRangeError);
OSK_DEFINE_ERROR(InfeasibleError);
OSK_DEFINE_ERROR(NoFaithfulExtensionFoundError);
OSK_DEFINE_ERROR(NotBijectiveError);
OSK_DEFINE_ERROR(NotUnitalError);
OSK_DEFINE_ERROR(InconclusiveError);
OSK_DEFINE_ERROR(CornerMembershipViolationError);
OSK_DEFINE_ERROR(NotSeparatingError);
OSK_DEFINE_ERROR(NoConsistentPermutationError);
OSK_DEFINE_ERROR(InvalidInputError);

#undef OSK_DEFINE_ERROR

}  // namespace osk
