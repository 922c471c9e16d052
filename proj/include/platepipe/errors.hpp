#pragma once

#include <stdexcept>
#include <string>

namespace platepipe {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Kernel size must be odd.
class EvenKernelError : public Error {
 public:
  using Error::Error;
};

// Crop box clamped to the image has zero area.
class EmptyCropError : public Error {
 public:
  using Error::Error;
};

// Paired images differ in size or channel count.
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// Image too small for the requested window.
class TooSmallError : public Error {
 public:
  using Error::Error;
};

class EmptySetError : public Error {
 public:
  using Error::Error;
};

class NonPositiveError : public Error {
 public:
  using Error::Error;
};

class NoCharactersError : public Error {
 public:
  using Error::Error;
};

// A detector or deblur backend failed at runtime.
class BackendFailure : public Error {
 public:
  using Error::Error;
};

// Loaded model does not match the declared detector head layout.
class SpecMismatchError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace platepipe
