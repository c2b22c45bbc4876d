#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpf {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LexError : public Error {
public:
    LexError(const std::string& msg, std::size_t offset)
        : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation outside the domain of an operation (sqrt of a negative, division
/// by zero, overflow, unbound variable).
class DomainError : public Error {
public:
    using Error::Error;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class ColoringFailed : public Error {
public:
    ColoringFailed(const std::string& msg, std::vector<long> cells = {})
        : Error(msg), cells_(std::move(cells)) {}
    const std::vector<long>& cells() const noexcept { return cells_; }

private:
    std::vector<long> cells_;
};

class StrataViolation : public Error {
public:
    using Error::Error;
};

class InconclusiveStrata : public Error {
public:
    InconclusiveStrata(const std::string& msg, std::vector<long> cells)
        : Error(msg), cells_(std::move(cells)) {}
    const std::vector<long>& cells() const noexcept { return cells_; }

private:
    std::vector<long> cells_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A vertex (or point) mapped onto itself where the input promised otherwise.
class LoopError : public Error {
public:
    LoopError(const std::string& msg, long vertex) : Error(msg), vertex_(vertex) {}
    long vertex() const noexcept { return vertex_; }

private:
    long vertex_;
};

}  // namespace fpf
