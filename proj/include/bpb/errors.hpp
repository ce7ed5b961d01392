// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bpb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector/operator dimensions do not agree.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Malformed domain object (nonpositive atom weight, ragged matrix, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateRestriction : public Error {
 public:
  using Error::Error;
};

// An input violates a hypothesis of the called operation.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The near-attainment hypothesis ‖Tf‖ > 1 − η fails. Carries the gate
// formula together with the measured and required values.
class GateError : public PreconditionError {
 public:
  GateError(std::string formula, std::string measured, std::string gate)
      : PreconditionError("gate failure: requires " + formula + " (measured " + measured +
                          ", gate " + gate + ")"),
        formula_(std::move(formula)),
        measured_(std::move(measured)),
        gate_(std::move(gate)) {}

  const std::string& formula() const noexcept { return formula_; }
  const std::string& measured() const noexcept { return measured_; }
  const std::string& gate() const noexcept { return gate_; }

 private:
  std::string formula_;
  std::string measured_;
  std::string gate_;
};

// A construction step produced an empty or unusable set.
class ConstructionFailure : public Error {
 public:
  using Error::Error;
};

// A branch that the underlying estimates rule out was reached.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace bpb
