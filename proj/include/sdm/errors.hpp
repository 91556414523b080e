#pragma once

#include <stdexcept>

namespace sdm {

// Input data or a parameter violates a documented precondition.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure: file missing, unreadable, or not writable.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sdm
