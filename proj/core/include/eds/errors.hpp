#pragma once

#include <stdexcept>
#include <string>

namespace eds {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// geometry
struct DimensionMismatch : Error {
  using Error::Error;
};
struct DegenerateSeed : Error {
  using Error::Error;
};
struct EmptyTriangulation : Error {
  using Error::Error;
};
struct SingularSimplex : Error {
  using Error::Error;
};
struct DuplicatePoint : Error {
  using Error::Error;
};
struct OutsideSuperSimplex : Error {
  using Error::Error;
};

// metrics
struct InsufficientRegions : Error {
  using Error::Error;
};
struct NoInteriorSamples : Error {
  using Error::Error;
};

// curation
struct DatasetTooSmall : Error {
  using Error::Error;
};
struct NonFiniteData : Error {
  using Error::Error;
};
struct SizeTooLarge : Error {
  using Error::Error;
};

// data generation
struct ConstantColumn : Error {
  using Error::Error;
};
struct NonFiniteState : Error {
  NonFiniteState(const std::string& msg, long step_index = -1)
      : Error(msg), step(step_index) {}
  long step;  ///< integration step at which the state became non-finite, -1 if n/a
};

// io
struct IoError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace eds
