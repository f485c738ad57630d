#pragma once

#include <stdexcept>
#include <string>

namespace qstab {

// Base for every error raised by the library. The CLI maps Infeasible
// subclasses to exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class HermiticityError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class IntervalError : public Error {
public:
    using Error::Error;
};

class SubspaceError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

// The requested control goal cannot be certified by the available constructions.
class Infeasible : public Error {
public:
    using Error::Error;
};

class NotStabilizable : public Infeasible {
public:
    using Infeasible::Infeasible;
};

class TimeBudgetInfeasible : public Infeasible {
public:
    using Infeasible::Infeasible;
};

} // namespace qstab
