#pragma once

#include <stdexcept>
#include <string>

namespace treecolor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid (r, p), tuning, control or run configuration.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// All type mass sits on degree-0 types, so q is undefined.
class DegenerateDistributionError : public Error {
public:
    using Error::Error;
};

/// Cascade growth g >= 1; branch expectations diverge.
class SupercriticalError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. The message names the offending field or line.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Stored values disagree with recomputation.
class VerificationError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// A process invariant failed. Always a bug.
class InternalConsistencyError : public Error {
public:
    using Error::Error;
};

} // namespace treecolor
