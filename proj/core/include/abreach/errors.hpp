#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abreach {

class SortMismatch : public std::logic_error {
public:
    explicit SortMismatch(const std::string& what) : std::logic_error("sort mismatch: " + what) {}
};

class EmptyInstantiationSet : public std::invalid_argument {
public:
    EmptyInstantiationSet() : std::invalid_argument("empty instantiation set") {}
};

class UnsupportedTerm : public std::invalid_argument {
public:
    explicit UnsupportedTerm(const std::string& what) : std::invalid_argument("unsupported term: " + what) {}
};

/// Raised when a search or enumeration exceeds its configured budget.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t col, const std::string& expected)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": expected " + expected),
          line_(line), col_(col), expected_(expected) {}

    std::size_t line() const { return line_; }
    std::size_t col() const { return col_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t line_;
    std::size_t col_;
    std::string expected_;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class ShapeError : public ValidationError {
public:
    explicit ShapeError(const std::string& what) : ValidationError("shape error: " + what) {}
};

class TooLarge : public std::runtime_error {
public:
    explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

} // namespace abreach
