#pragma once

#include <stdexcept>
#include <string>

namespace fairdag {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CycleError : Error {
    using Error::Error;
};
struct UnknownNodeError : Error {
    using Error::Error;
};
struct DuplicateError : Error {
    using Error::Error;
};
struct OverlapError : Error {
    using Error::Error;
};
struct SizeCapError : Error {
    using Error::Error;
};
struct ZeroProbabilityEvidenceError : Error {
    using Error::Error;
};
struct SingularConditioningError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct ParamError : Error {
    using Error::Error;
};
struct DegenerateGroupError : Error {
    using Error::Error;
};
struct EmptyGroupError : Error {
    using Error::Error;
};
struct InsufficientStrataError : Error {
    using Error::Error;
};

}  // namespace fairdag
