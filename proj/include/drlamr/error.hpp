// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace drlamr
{

// Base class for every error raised by the library. Callers that only care
// about "something numerical went wrong" can catch this one.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define DRLAMR_DEFINE_ERROR(Name)                                                       \
  class Name : public Error                                                             \
  {                                                                                     \
  public:                                                                               \
    using Error::Error;                                                                 \
  }

// mesh
DRLAMR_DEFINE_ERROR(NotActive);
DRLAMR_DEFINE_ERROR(DepthLimit);

// fem
DRLAMR_DEFINE_ERROR(SingularSystem);
DRLAMR_DEFINE_ERROR(UnstableStep);
DRLAMR_DEFINE_ERROR(IncompatibleMeshes);

// indicators
DRLAMR_DEFINE_ERROR(InvalidFractions);

// env
DRLAMR_DEFINE_ERROR(DomainError);

// rl
DRLAMR_DEFINE_ERROR(DimensionMismatch);
DRLAMR_DEFINE_ERROR(FormatError);

// app
DRLAMR_DEFINE_ERROR(ConfigError);

#undef DRLAMR_DEFINE_ERROR

}  // namespace drlamr
