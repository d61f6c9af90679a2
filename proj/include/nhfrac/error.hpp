#pragma once

#include <stdexcept>
#include <string>

namespace nhfrac {

// Every contract violation in the library surfaces as this type; the message
// starts with a short keyword ("asymmetric", "nesting", ...) callers can match.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nhfrac
