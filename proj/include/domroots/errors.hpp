#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace domroots {

// Input outside an operation's mathematical domain (zero polynomial, constant
// where a degree >= 1 is needed, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke a documented precondition (non-monic, non-square-free, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Certified root isolation hit the precision ceiling without producing a
// certificate. Never converted into a guess.
class EscalationError : public std::runtime_error {
 public:
  EscalationError(const std::string& what, std::string poly)
      : std::runtime_error(what), poly_(std::move(poly)) {}
  const std::string& polynomial() const { return poly_; }

 private:
  std::string poly_;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t cardinality)
      : std::runtime_error(what), cardinality_(cardinality) {}
  std::uint64_t cardinality() const { return cardinality_; }

 private:
  std::uint64_t cardinality_;
};

// An internal cross-check failed (audit mismatch, theorem-level identity
// violated). Always fatal.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A fit was asked for with fewer than three usable points.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace domroots
