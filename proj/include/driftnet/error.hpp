#pragma once

#include <stdexcept>
#include <string>

namespace driftnet {

// Bad caller input: unknown ids, wrong shapes, violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed file content (JSON, XMLBIF, CSV headers).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evidence has probability zero under the model.
class ImpossibleEvidence : public std::domain_error {
 public:
  ImpossibleEvidence() : std::domain_error("impossible evidence") {}
};

// Query would exceed an enumeration cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class DegenerateData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace driftnet
