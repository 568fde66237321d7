#pragma once

#include <stdexcept>
#include <string>

namespace hyperinv {

/// Dimension mismatch between operands.
struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Operands carry incompatible scalar configurations (e.g. mixed extended precisions).
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input is structurally unusable for the requested operation (zero matrix, zero diagonal, ...).
struct degenerate_input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A diagnostic procedure could not complete (nonconvergence, insufficient history, ...).
struct diagnostic_error : std::runtime_error {
    double last_value = 0.0;
    explicit diagnostic_error(const std::string& what, double last = 0.0)
        : std::runtime_error(what), last_value(last) {}
};

/// File format or I/O failure.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hyperinv
