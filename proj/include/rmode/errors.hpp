// errors.hpp - exception types and validation records shared across the simulator
#pragma once

#include <stdexcept>
#include <string>

namespace rmode {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Buffers whose sample rate, start time or length disagree.
class AlignmentError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation (non-finite scale,
// coordinates out of range, frequency above Nyquist, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Transmitter / scenario configuration that cannot be synthesized.
class ConfigError : public Error {
public:
    using Error::Error;
};

class SizeError : public Error {
public:
    using Error::Error;
};

// Modulator asked for more bit intervals than the stream provides.
class UnderrunError : public Error {
public:
    using Error::Error;
};

class EstimationError : public Error {
public:
    using Error::Error;
};

class DegenerateSignalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// One broken invariant, reported as data rather than thrown.
struct Violation {
    std::string field;
    std::string value;
    std::string constraint;
};

inline std::string to_string(const Violation& v) {
    return v.field + " = " + v.value + ": " + v.constraint;
}

}  // namespace rmode
