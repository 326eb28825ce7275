#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levlab {

// Bad or inconsistent input data (unparseable files, impossible series).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse failure pinned to a 1-based line of the input stream.
struct ParseError : DataError {
    ParseError(const std::string& msg, std::size_t line)
        : DataError(msg + " (line " + std::to_string(line) + ")"), line(line) {}
    std::size_t line;
};

// A computation with no defined answer (zero-volatility optimum, failed fit).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace levlab
