#pragma once

#include <stdexcept>
#include <string>

namespace heis {

// A caller-supplied value violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invariance criteria exist only for the non-normal closed subgroups.
class UnsupportedSubgroupError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Integration produced a non-finite state.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double blowup_time)
      : std::runtime_error(what), blowup_time_(blowup_time) {}

  double blowup_time() const noexcept { return blowup_time_; }

 private:
  double blowup_time_;
};

}  // namespace heis
