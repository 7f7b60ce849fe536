#pragma once

#include <stdexcept>
#include <string>

namespace bql {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A heralded operation has zero success probability on the given input.
class HeraldNeverFires : public Error {
public:
    using Error::Error;
};

/// Subtraction-then-addition on the vacuum: the subtraction herald never fires.
class SaUndefined : public HeraldNeverFires {
public:
    using HeraldNeverFires::HeraldNeverFires;
};

/// More composite bosons requested than the Schmidt rank allows.
class PauliBlocked : public Error {
public:
    using Error::Error;
};

/// Brute-force oracle dimension budget exceeded.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

/// A measured value cannot have been produced by the assumed ladder.
class InconsistentMeasurement : public Error {
public:
    using Error::Error;
};

}  // namespace bql
