#pragma once

#include <stdexcept>
#include <string>

namespace dmdgp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// K sphere centers (or K hull points) are affinely dependent.
class DegenerateCenters : public Error {
public:
    using Error::Error;
};

/// A distance matrix is not realizable: its Cayley-Menger volume is negative.
class NegativeCayleyMenger : public Error {
public:
    using Error::Error;
};

/// A vertex lies on the hyperplane of its K predecessors.
class DegenerateChirality : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& where, const std::string& what)
        : Error(where + ": " + what) {}
};

/// Exponential enumeration refused because it exceeds a size guard.
class SizeGuard : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

} // namespace dmdgp
