#pragma once

#include <stdexcept>
#include <string>

namespace teachset {

/// Toolkit-wide error type. Thrown for precondition violations and I/O failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace teachset
