#ifndef CFS_ERRORS_HPP
#define CFS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cfs {

/// Base class for all domain errors thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class NotHermitianError : public Error {
public:
    using Error::Error;
};

class TraceNotOneError : public Error {
public:
    using Error::Error;
};

/// Operator has more than n positive or more than n negative eigenvalues.
class SignatureViolationError : public Error {
public:
    SignatureViolationError(const std::string& msg, int positive, int negative)
        : Error(msg), positive_count(positive), negative_count(negative) {}
    int positive_count;
    int negative_count;
};

class TauBelowOneError : public Error {
public:
    using Error::Error;
};

class DegenerateTraceError : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

class EigensolverError : public Error {
public:
    using Error::Error;
};

class DegenerateImageError : public Error {
public:
    using Error::Error;
};

class NotCausallyTrivialError : public Error {
public:
    using Error::Error;
};

class DimensionTooSmallError : public Error {
public:
    using Error::Error;
};

class UnsupportedSpinError : public Error {
public:
    using Error::Error;
};

class NotSpinOneError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace cfs

#endif  // CFS_ERRORS_HPP
