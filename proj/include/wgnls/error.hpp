#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wgnls {

/// Failure categories surfaced by the library. The CLI maps some of these
/// to dedicated process exit codes.
enum class ErrorCode {
  odd_mode_count,
  non_positive_period,
  bad_dimension,
  invalid_argument,
  no_euclidean_direction,
  empty_range,
  empty_shell,
  empty_trajectory,
  window_not_covered,
  insufficient_sampling,
  under_resolved,
  boundary_mass_exceeded,
  non_finite,
  sub_threshold,
  domain_error,
  parse_error,
  validation_error,
  io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wgnls
