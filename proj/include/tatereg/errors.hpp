#pragma once

#include <stdexcept>
#include <string>

namespace tatereg {

// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Domain violations: division by exact zero, mixed fields, bad parameters.
struct math_error : error {
    explicit math_error(const std::string& msg) : error(msg) {}
};

// An operation could not certify the requested number of digits.
struct precision_error : error {
    explicit precision_error(const std::string& msg) : error(msg) {}
};

// Explicitly unsupported cases (wild Hilbert symbols, deep towers).
struct unsupported_error : error {
    explicit unsupported_error(const std::string& msg) : error(msg) {}
};

// Scenario file syntax problems, annotated with position.
struct parse_error : error {
    parse_error(const std::string& msg, int line, int column)
        : error(msg + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line(line), column(column) {}
    int line;
    int column;
};

} // namespace tatereg
