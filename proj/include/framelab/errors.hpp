#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace framelab {

/// Base class for all framelab errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidShape final : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange final : public Error {
public:
    using Error::Error;
};

/// Raised when a combinatorial sum would exceed the configured subset cap.
/// Carries the offending count (saturated at UINT64_MAX when it overflows).
class CapExceeded final : public Error {
public:
    CapExceeded(const std::string& what, std::uint64_t count)
        : Error(what), count_(count) {}
    std::uint64_t count() const noexcept { return count_; }

private:
    std::uint64_t count_;
};

class NumericalFailure final : public Error {
public:
    using Error::Error;
};

class SingularMatrix final : public Error {
public:
    using Error::Error;
};

class NotParseval final : public Error {
public:
    using Error::Error;
};

class RankMismatch final : public Error {
public:
    using Error::Error;
};

class ZeroVector final : public Error {
public:
    using Error::Error;
};

class PreconditionFailed final : public Error {
public:
    using Error::Error;
};

class ParseError final : public Error {
public:
    using Error::Error;
};

class UnknownCheck final : public Error {
public:
    using Error::Error;
};

} // namespace framelab
