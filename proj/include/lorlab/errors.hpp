#pragma once

#include <stdexcept>
#include <string>

namespace lorlab {

// Base class for all lorlab error conditions.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A side length reaches or exceeds the finite diameter of the model space.
class SizeBoundViolation : public Error {
public:
    explicit SizeBoundViolation(const std::string& what) : Error(what) {}
};

// No comparison configuration with the given data exists in the model space.
class NotRealisable : public Error {
public:
    explicit NotRealisable(const std::string& what) : Error(what) {}
};

class NoPath : public Error {
public:
    explicit NoPath(const std::string& what) : Error(what) {}
};

class NotMonotone : public Error {
public:
    explicit NotMonotone(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

class ConsistencyError : public Error {
public:
    explicit ConsistencyError(const std::string& what) : Error(what) {}
};

class CoverInvalid : public Error {
public:
    explicit CoverInvalid(const std::string& what) : Error(what) {}
};

class ResolutionExhausted : public Error {
public:
    explicit ResolutionExhausted(const std::string& what) : Error(what) {}
};

class NoAdmissiblePairs : public Error {
public:
    explicit NoAdmissiblePairs(const std::string& what) : Error(what) {}
};

class EmptyDiamond : public Error {
public:
    explicit EmptyDiamond(const std::string& what) : Error(what) {}
};

class TooLargeForExact : public Error {
public:
    explicit TooLargeForExact(const std::string& what) : Error(what) {}
};

class NotFound : public Error {
public:
    explicit NotFound(const std::string& what) : Error(what) {}
};

}  // namespace lorlab
