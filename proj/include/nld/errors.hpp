#pragma once

#include <stdexcept>
#include <string>

namespace nld {

/// Base class of all library errors. The CLI maps each subclass to a distinct exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// An enumeration would exceed its configured strategy or memory cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class NotFullDimensional : public Error {
public:
    NotFullDimensional(std::size_t rank, std::size_t dim)
        : Error("cone is not full-dimensional: rank " + std::to_string(rank) + " of " +
                std::to_string(dim)),
          rank_(rank), dim_(dim) {}
    std::size_t rank() const noexcept { return rank_; }
    std::size_t dim() const noexcept { return dim_; }

private:
    std::size_t rank_;
    std::size_t dim_;
};

class LpError : public Error {
public:
    using Error::Error;
};

}  // namespace nld
