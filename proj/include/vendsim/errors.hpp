#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vendsim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (missing input, bad state handle, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

class WidthError : public Error {
public:
    using Error::Error;
};

// Mealy-only operation on a Moore machine or vice versa.
class KindError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class CatalogError : public Error {
public:
    using Error::Error;
};

class AnalysisError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace vendsim
