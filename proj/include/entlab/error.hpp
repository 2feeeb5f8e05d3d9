#pragma once

#include <stdexcept>
#include <string>

namespace entlab {

// Precondition or domain failure raised by library operations. The message is
// the stable, user-facing reason (e.g. "empty sample").
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid experiment or CLI configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace entlab
