#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace reludist {

// Base of every exception thrown by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class zero_vector_error : public error {
  public:
    using error::error;
};

class dimension_mismatch_error : public error {
  public:
    using error::error;
};

// An angle (or other bounded argument) lies outside its domain by more than the rounding slack.
class domain_error : public error {
  public:
    using error::error;
};

class invalid_argument_error : public error {
  public:
    using error::error;
};

class size_overflow_error : public error {
  public:
    using error::error;
};

class all_trials_degenerate_error : public error {
  public:
    using error::error;
};

// The two rival expectations are too close to be told apart at the requested trial count.
class hypotheses_too_close_error : public error {
  public:
    hypotheses_too_close_error(const std::string &what, std::uint64_t required_trials) :
        error(what), required_trials_(required_trials) {}

    /// Trial count that would make the hypotheses separable; 0 when no finite count suffices.
    [[nodiscard]] std::uint64_t required_trials() const noexcept { return required_trials_; }

  private:
    std::uint64_t required_trials_;
};

class too_few_points_error : public error {
  public:
    using error::error;
};

class infeasible_geometry_error : public error {
  public:
    using error::error;
};

}  // namespace reludist
