#pragma once

#include <stdexcept>
#include <string>

namespace luinv {

/// Malformed user input: label text, state files, descriptor strings, flags.
class parse_error : public std::invalid_argument {
public:
    explicit parse_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation would exceed a configured size bound.
class resource_error : public std::length_error {
public:
    explicit resource_error(const std::string& what) : std::length_error(what) {}
};

}  // namespace luinv
