#pragma once

#include <stdexcept>
#include <string>

namespace addsum {

// Invalid argument, class mismatch, or inapplicable (function, k) combination.
// The CLI rejects these during validation; exit code 2.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A work-limit guard tripped (oracle enumerations too large); exit code 3.
class GuardRefusal : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Requested tolerance is unreachable with the configured resources.
// Carries the best achievable bound; exit code 4.
class PrecisionRefusal : public std::runtime_error {
public:
  PrecisionRefusal(const std::string& what, double achievable)
      : std::runtime_error(what), achievable_bound(achievable) {}
  double achievable_bound = 0.0;
};

// A checked internal invariant failed; exit code 5.
class InvariantFailure : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace addsum
