#ifndef WAVPERS_ERRORS_HPP
#define WAVPERS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wavpers {

/// Bad or missing input files (datasets, caches, checkpoints).
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed experiment configuration.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (non-convergence, degenerate inputs).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace wavpers

#endif // WAVPERS_ERRORS_HPP
