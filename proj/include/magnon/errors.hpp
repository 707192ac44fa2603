#pragma once

#include <stdexcept>
#include <string>

namespace magnon {

// Validation failures (bad input, unsupported request) map to CLI exit code 1;
// numerical failures (violated invariants, integrator trouble) map to exit code 2.

struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct range_error : validation_error {
    using validation_error::validation_error;
};

struct capability_error : validation_error {
    using validation_error::validation_error;
};

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invariant_violation : numerical_error {
    using numerical_error::numerical_error;
};

struct insufficient_data : numerical_error {
    using numerical_error::numerical_error;
};

struct not_found : numerical_error {
    using numerical_error::numerical_error;
};

}  // namespace magnon
