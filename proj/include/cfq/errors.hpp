#pragma once

#include <stdexcept>
#include <string>

namespace cfq {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroVector : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotNormalized : public Error {
public:
    using Error::Error;
};

class InvalidState : public Error {
public:
    using Error::Error;
};

class IncompleteBasis : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

// Raised when a composed network fails the unitarity check; indicates a
// construction bug or non-finite parameters, never a user typo.
class NonUnitaryComposition : public Error {
public:
    using Error::Error;
};

class UnknownPath : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class LabelMismatch : public Error {
public:
    using Error::Error;
};

inline void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) +
                                " does not match " + std::to_string(b));
    }
}

}  // namespace cfq
