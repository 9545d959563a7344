#ifndef BASIC_ERRORS_HPP
#define BASIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace basic {

/// Invalid argument or precondition violation.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, long line = -1)
        : std::runtime_error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

/// Numerical failure (eigensolver non-convergence, degenerate scale, ...).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace basic

#endif // BASIC_ERRORS_HPP
