#pragma once

#include <stdexcept>
#include <string>

namespace chm {

// Precondition violated by the caller (bad modulus, even h, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Malformed text input: decimal strings, sign strings, list files.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured bound was exceeded (segment span, exhaustive search length).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An invariant that the mathematics guarantees did not hold. Always a bug.
struct ConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

// Pollard rho gave up within its restart/iteration budget.
struct FactorizationStalled : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A deserialized certificate record failed revalidation.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace chm
