#pragma once

#include <stdexcept>
#include <string>

namespace bdrelay {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The half-plane system does not bound a region inside the first quadrant.
class UnboundedRegion : public Error {
public:
    using Error::Error;
};

class EmptyRegion : public Error {
public:
    using Error::Error;
};

/// A (protocol, bound) pair that has no numerical evaluation here.
class UnsupportedBound : public Error {
public:
    using Error::Error;
};

/// An enumeration would exceed the configured work limit.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

}  // namespace bdrelay
