#pragma once

#include <stdexcept>
#include <string>

namespace seqbell {

/// A root, tangent, or threshold that the caller asked for does not exist.
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed form was evaluated outside the region where it is real-valued.
class OutOfDomain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Kraus operators of an instrument do not resolve the identity.
class InvalidInstrument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace seqbell
