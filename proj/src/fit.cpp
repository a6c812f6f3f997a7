#include "wgnls/fit.hpp"

#include "wgnls/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace wgnls {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::invalid_argument, "fit needs paired samples");
  if (x.size() < 2) throw Error(ErrorCode::invalid_argument, "fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::invalid_argument, "fit abscissae are all equal");
  LineFit fit;
  fit.points = static_cast<int>(x.size());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.residual_rms = std::sqrt(ss_res / n);
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

LineFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::invalid_argument, "fit needs paired samples");
  if (!y.empty() && std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; }) &&
      std::isfinite(y[0]) && y[0] >= 0.0) {
    std::vector<double> lx;
    for (double v : x) lx.push_back(std::log(v));
    LineFit fit = fit_line(lx, std::vector<double>(x.size(), 0.0));
    fit.intercept = y[0] > 0.0 ? std::log(y[0]) : std::nan("");
    return fit;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw Error(ErrorCode::domain_error, "power-law fit needs positive finite values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly);
}

}  // namespace wgnls
