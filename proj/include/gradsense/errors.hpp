#pragma once

#include <stdexcept>
#include <string>

namespace gradsense {

// Base class for every error the library raises on purpose. The CLI maps
// subclasses onto exit codes; everything else is a plain bug.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Domain / geometry ---------------------------------------------------------

class NonPositiveDomain : public Error {
public:
    using Error::Error;
};

class OutOfDomain : public Error {
public:
    using Error::Error;
};

class OutOfRegion : public Error {
public:
    using Error::Error;
};

// Sensing --------------------------------------------------------------------

class UnsupportedCombination : public Error {
public:
    using Error::Error;
};

class QuadratureUnderflow : public Error {
public:
    using Error::Error;
};

class EmptySuite : public Error {
public:
    using Error::Error;
};

class ModeSetMismatch : public Error {
public:
    using Error::Error;
};

// Strategic analysis ----------------------------------------------------------

class NonPositiveHorizon : public Error {
public:
    using Error::Error;
};

class IrrationalUnsupported : public Error {
public:
    using Error::Error;
};

class RadiusTooLarge : public Error {
public:
    using Error::Error;
};

// Simulation / reconstruction -------------------------------------------------

class SingularSystem : public Error {
public:
    using Error::Error;
};

class HorizonMismatch : public Error {
public:
    using Error::Error;
};

class QuadratureUnderResolved : public Error {
public:
    using Error::Error;
};

// Config / reporting ----------------------------------------------------------

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace gradsense
