#pragma once

#include <stdexcept>
#include <string>

namespace dfo {

/// Raised when an operation receives arguments outside its contract
/// (unknown element, field index out of range, unsupported dimension, ...).
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dfo
