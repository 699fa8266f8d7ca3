#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synpat {

// Malformed input text. line() is 1-based, 0 when not tied to a line.
class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A configuration value outside its documented domain.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A per-tick firing probability outside [0, 1].
class invalid_probability : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace synpat
