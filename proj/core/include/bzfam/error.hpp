#pragma once

#include <stdexcept>
#include <string>

namespace bzfam {

/// Input rejected by an operation's precondition (bad data, unsupported
/// support, out-of-bound sizes). The CLI maps this to exit status 1.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The data contradicts the family model (non-closed trace fibers,
/// monotonicity-inconsistent valuations, ...). The CLI maps this to exit
/// status 2.
class ModelViolation : public std::runtime_error {
 public:
  ModelViolation(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

namespace detail {
[[noreturn]] void internal_failure(const char* expr, const char* file, int line,
                                   const std::string& message);
}  // namespace detail

}  // namespace bzfam

// Internal invariant; failure is a bug in this library, never bad input.
#define BZFAM_CHECK(cond, msg)                                              \
  do {                                                                      \
    if (!(cond)) ::bzfam::detail::internal_failure(#cond, __FILE__, __LINE__, \
                                                   (msg));                  \
  } while (false)
