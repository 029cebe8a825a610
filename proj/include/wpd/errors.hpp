#pragma once

#include <stdexcept>
#include <string>

namespace wpd {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input data: bad CSV rows, duplicate months, unparseable numbers.
struct ParseError : Error {
    using Error::Error;
};

/// Argument outside its documented domain: levels, scales, window widths.
struct RangeError : Error {
    using Error::Error;
};

/// Filesystem or stream failure.
struct IoError : Error {
    using Error::Error;
};

} // namespace wpd
