#pragma once

#include <stdexcept>
#include <string>

namespace vsse {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside an operation's domain (e.g. PRG index 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed or non-canonical encoding.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Two derived table keys collided on insert.
class CollisionError : public Error {
 public:
  using Error::Error;
};

// A location the token says must exist is missing from the cloud index.
class IncompleteIndexError : public Error {
 public:
  using Error::Error;
};

// The cloud cannot assemble a proof because a T_sig position is missing.
class ProofUnavailableError : public Error {
 public:
  using Error::Error;
};

// Owner-side input violations (duplicates, deleting a pair never added, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace vsse
