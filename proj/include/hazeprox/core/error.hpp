#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hazeprox {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two fields that must share a shape do not.
class DimensionError : public Error {
public:
    DimensionError(std::string field, const std::string& detail)
        : Error("dimension mismatch in '" + field + "': " + detail), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A scalar argument lies outside its admissible range.
class InvalidArgument : public Error {
public:
    InvalidArgument(std::string name, const std::string& detail)
        : Error("invalid argument '" + name + "': " + detail), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// File could not be read, parsed or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace hazeprox
