#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zipfcode {

// Root of every error thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on a numeric argument was violated (rank < 1, N < 2, p outside (0, 1], ...).
class domain_error : public error {
public:
    using error::error;
};

class dimension_mismatch : public error {
public:
    using error::error;
};

class empty_input : public error {
public:
    using error::error;
};

// The statistic is undefined for the input (all values tied, zero mean length, ...).
class degenerate_input : public error {
public:
    using error::error;
};

// A root search left its bracket. `boundary` is the bracket end the estimate ran into.
class non_convergence : public error {
public:
    non_convergence(const std::string& what, double boundary)
        : error(what), boundary_(boundary) {}
    double boundary() const noexcept { return boundary_; }

private:
    double boundary_;
};

class malformed_stream : public error {
public:
    malformed_stream(const std::string& what, std::size_t position)
        : error(what + " (at symbol " + std::to_string(position) + ")"), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class resource_exhausted : public error {
public:
    using error::error;
};

class parse_error : public error {
public:
    parse_error(const std::string& what, std::size_t line)
        : error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class duplicate_token : public parse_error {
public:
    duplicate_token(const std::string& token, std::size_t line)
        : parse_error("duplicate token '" + token + "'", line), token_(token) {}
    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

// Invalid UTF-8. `offset` is the byte offset of the first bad byte in the stream.
class encoding_error : public error {
public:
    explicit encoding_error(std::size_t offset)
        : error("invalid UTF-8 at byte offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace zipfcode
