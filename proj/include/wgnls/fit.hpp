#pragma once

#include <span>

namespace wgnls {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double residual_rms = 0.0;
  int points = 0;
};

/// Ordinary least squares y = slope x + intercept. With zero spread in y the
/// fit is exact and r_squared is 1.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// OLS of log y against log x. All values must be positive and finite, except
/// that an all-equal y (zeros included) yields slope 0 with r_squared 1.
LineFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace wgnls
