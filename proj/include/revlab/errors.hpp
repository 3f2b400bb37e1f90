#ifndef REVLAB_ERRORS_HPP
#define REVLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace revlab {

// Input or configuration rejected before any computation ran.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A point left the validated domain of a map or chart.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical procedure failed to converge or produced non-finite values.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace revlab

#endif
