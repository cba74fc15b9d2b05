#pragma once

#include <stdexcept>
#include <string>

namespace twistquant {

// Operands come from different group backends or different groups.
class BackendMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A cochain failed the cocycle test required by the operation.
class NotACocycle : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A translation does not map the sample lattice into itself.
class OffLattice : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed group, dual, cochain or experiment description.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twistquant
