#pragma once

#include <stdexcept>
#include <string>

namespace ped {

// Base class for all toolkit errors. Subclasses mirror the failure
// categories of the pipeline so callers can map them to exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raster dimensions of two operands disagree.
class ShapeError : public Error {
public:
    using Error::Error;
};

// A parameter is outside its documented domain.
class ParamError : public Error {
public:
    using Error::Error;
};

// An operation that requires at least one set pixel got an empty mask.
class EmptyMaskError : public Error {
public:
    using Error::Error;
};

// A label id is neither a configured category nor the ignore sentinel.
class LabelError : public Error {
public:
    using Error::Error;
};

// An instance id has no category entry in the sidecar manifest.
class ManifestError : public Error {
public:
    using Error::Error;
};

// A file does not conform to its documented on-disk format.
class FormatError : public Error {
public:
    using Error::Error;
};

// A value read from a file is outside its documented range.
class RangeError : public Error {
public:
    using Error::Error;
};

// Underlying filesystem / OS failure.
class IoError : public Error {
public:
    using Error::Error;
};

// A score is requested from counts that carry no information.
class UndefinedError : public Error {
public:
    using Error::Error;
};

// Aggregation over zero evaluated categories.
class EmptyReportError : public Error {
public:
    using Error::Error;
};

} // namespace ped
