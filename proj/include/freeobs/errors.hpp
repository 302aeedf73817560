#ifndef FREEOBS_ERRORS_HPP
#define FREEOBS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace freeobs {

struct InvalidArm : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyInstance : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IndexOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct InvalidDistribution : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Configuration problem; `what()` carries the offending field path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace freeobs

#endif
