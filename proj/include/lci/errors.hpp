#pragma once

#include <stdexcept>
#include <string>

namespace lci {

// Error taxonomy mirrored by the CLI exit codes.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibilityError : std::runtime_error {
    explicit InfeasibilityError(const std::string& what) : std::runtime_error(what) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int parse = 2;
inline constexpr int validation = 3;
inline constexpr int infeasibility = 4;
inline constexpr int non_convergence = 5;
}  // namespace exit_code

}  // namespace lci
