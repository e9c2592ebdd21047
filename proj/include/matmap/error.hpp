#ifndef MATMAP_ERROR_HPP
#define MATMAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace matmap {

/// Broad failure categories, chosen so callers (and the C API / CLI exit
/// codes) can map them without string matching.
enum class ErrorKind {
    parse,    ///< malformed scenario/log/time text, schema violation
    io,       ///< file could not be read or written
    invalid,  ///< argument violates a documented precondition or invariant
    domain    ///< value outside the mathematical domain of an operation
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_parse(const std::string& msg) { throw Error(ErrorKind::parse, msg); }
[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorKind::io, msg); }
[[noreturn]] inline void throw_invalid(const std::string& msg) { throw Error(ErrorKind::invalid, msg); }
[[noreturn]] inline void throw_domain(const std::string& msg) { throw Error(ErrorKind::domain, msg); }

} // namespace matmap

#endif
