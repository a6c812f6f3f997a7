// Acceptance suite: one PASS/FAIL line per primary criterion.
//
//   acceptance [filter]   runs the criteria whose name contains `filter`.

#include "oracles.hpp"
#include "support.hpp"

#include "wgnls/dynamics.hpp"
#include "wgnls/functionals.hpp"
#include "wgnls/multipliers.hpp"
#include "wgnls/probes.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;  // 0: no runtime requirement
  std::function<Outcome()> run;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Gaussian bump centred at the lattice point m0 with seeded phases, so the
// field carries momentum close to mass * xi0.
SpectralField shifted_gaussian(const GridSpec& g, const std::vector<int>& m0, double width,
                               std::uint64_t seed) {
  ComplexArray c = ComplexArray::Zero(g.size());
  std::vector<double> xi0(3);
  for (int a = 0; a < 3; ++a) xi0[a] = two_pi * m0[a] / g.direction(a).period;
  for (Eigen::Index p = 0; p < g.size(); ++p) {
    double r2 = 0.0;
    for (int a = 0; a < 3; ++a) r2 += std::pow(g.xi(a)[p] - xi0[a], 2);
    c[p] = std::exp(-r2 / (2 * width * width)) * rng::random_phase(seed, 0, static_cast<std::uint64_t>(p));
  }
  SpectralField f(g, std::move(c));
  f.coeffs() /= std::sqrt(mass(f));
  return f;
}

double norm3(const std::vector<double>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// ---------------------------------------------------------------------------

Outcome transforms() {
  const GridSpec g = torus3(32);
  const SpatialField f = to_spatial(random_spectral(g, 2024));
  const SpatialField back = to_spatial(to_spectral(f));
  const double roundtrip = rel_diff(back.values(), f.values());
  const double plancherel = std::abs(l2_norm(f) - l2_norm(to_spectral(f))) / l2_norm(f);
  return {roundtrip <= 1e-12 && plancherel <= 1e-12,
          fmt("roundtrip=%.2e plancherel=%.2e (limit 1e-12)", roundtrip, plancherel)};
}

Outcome propagator() {
  const GridSpec g = torus3(8, two_pi);
  const SpectralField w = plane_wave_data(g, 1.0, {1, 0, 0});
  const SpectralField evolved = free_propagate(w, std::numbers::pi);
  const Eigen::Index at = g.flat_index(std::vector<int>{1, 0, 0});
  const double phase = std::abs(evolved.coeffs()[at] + w.coeffs()[at]) / std::abs(w.coeffs()[at]);

  const GridSpec wg({Direction::euclidean(8), Direction::torus(1), Direction::torus(1)}, {32, 8, 8});
  double group = 0.0;
  for (const GridSpec& grid : {torus3(16, two_pi), wg}) {
    const SpectralField f = random_spectral(grid, 4);
    const SpectralField two = free_propagate(free_propagate(f, 0.3), 0.45);
    const SpectralField one = free_propagate(f, 0.75);
    group = std::max(group, rel_diff(two.coeffs(), one.coeffs()));
  }
  return {phase <= 1e-12 && group <= 1e-12,
          fmt("|U(pi)e1 + e1|/|e1|=%.2e group-law=%.2e (limit 1e-12)", phase, group)};
}

Outcome constant_solution() {
  const GridSpec g = torus3(16);
  const Complex c = std::polar(1.0, 0.3);
  double worst = 0.0;
  evolve(constant_data(g, c), {1e-3, 1.0, 1, true}, [&](double t, const SpectralField& u) {
    const Complex expected = c * std::polar(1.0, -std::norm(c) * t);
    worst = std::max(worst, (to_spatial(u).values() - expected).abs().maxCoeff());
  });
  return {worst <= 1e-12, fmt("max|u - c e^{-i|c|^2 t}|=%.2e over 1000 steps (limit 1e-12)", worst)};
}

Outcome conservation() {
  const GridSpec g = torus3(32, two_pi);
  const SpectralField u0 = shifted_gaussian(g, {3, -2, 1}, 1.5, 11);
  const double m0 = mass(u0);
  const std::vector<double> p0 = momentum(u0);
  double mass_drift = 0.0, momentum_drift = 0.0;
  evolve(u0, {1e-3, 2.0, 1, true}, [&](double, const SpectralField& u) {
    mass_drift = std::max(mass_drift, std::abs(mass(u) - m0) / m0);
    const std::vector<double> p = momentum(u);
    momentum_drift = std::max(momentum_drift, norm3({p[0] - p0[0], p[1] - p0[1], p[2] - p0[2]}) / norm3(p0));
  });

  auto energy_drift = [&](double dt) {
    const double e0 = energy(u0);
    double drift = 0.0;
    evolve(u0, {dt, 0.5, 1, true},
           [&](double, const SpectralField& u) { drift = std::max(drift, std::abs(energy(u) - e0)); });
    return drift;
  };
  const double coarse = energy_drift(4e-3);
  const double fine = energy_drift(2e-3);
  const double ratio = coarse / fine;
  const bool pass = mass_drift <= 1e-11 && momentum_drift <= 1e-9 && ratio >= 3.4 && ratio <= 4.6;
  return {pass, fmt("mass=%.2e (<=1e-11, 2000 steps) momentum=%.2e (<=1e-9) "
                    "energy drift(dt)/drift(dt/2)=%.3f in [3.4,4.6]",
                    mass_drift, momentum_drift, ratio)};
}

Outcome multiplier_bounds() {
  const GridSpec g = torus3(64);
  const double s = 5.0 / 6.0;
  bool pass = true;
  std::string detail;
  for (double N : {8.0, 16.0, 32.0}) {
    const SandwichReport sw = check_smoothing_sandwich(g, N, s);
    const IBasicReport ib = check_ibasic(g, N, s, 1.0 / 6.0);
    pass = pass && sw.passed && sw.min_value >= 1.0 && sw.max_value <= 3 * std::pow(N, 1 - s) &&
           ib.max_ratio <= 4.0;
    detail += fmt("N=%g: m<xi>^{1-s} in [%.4f, %.4f] of [1, %.4f], ibasic=%.4f; ", N, sw.min_value,
                  sw.max_value, sw.upper_bound, ib.max_ratio);
  }
  return {pass, detail};
}

Outcome dealiasing() {
  const GridSpec g = torus3(16);
  const SpectralField f = band_limited(g, two_pi * 3, 21);
  const ComplexArray exact = triple_convolution(f);
  const double err = (cubic_term(f, true).coeffs() - exact).abs().maxCoeff() / exact.abs().maxCoeff();
  return {err <= 1e-12, fmt("padded vs triple convolution rel. max error=%.2e (limit 1e-12)", err)};
}

Outcome xsb_separability() {
  const GridSpec g = torus3(16, two_pi);
  const SpectralField u0 = random_spectral(g, 77);
  // Default sampling rule: dt = 0.1 / max|xi|^2, here 1/1470.
  const double dt = 0.1 / (g.max_norm() * g.max_norm());
  const int count = static_cast<int>(std::lround(1.0 / dt));
  const Trajectory traj = free_trajectory(u0, 1.0 / count, count);
  const WindowSpec w{0.0, 1.0};
  const double chi_norm = cutoff_hb_norm(w, 0.6);
  bool pass = true;
  std::string detail = fmt("dt=1/%d ", count);
  for (double s : {0.0, 1.0}) {
    const double measured = xsb_norm(traj, s, w, 0.6);
    const double expected = sobolev_norm(u0, s) * chi_norm;
    const double rel = std::abs(measured / expected - 1);
    pass = pass && rel <= 0.01;
    detail += fmt("s=%g: rel. error %.2e; ", s, rel);
  }
  return {pass, detail + "(limit 1e-2, b=0.6)"};
}

Outcome bilinear_sweep_check() {
  BilinearProbeSpec base;
  base.N2 = 4;
  base.trials = 8;
  base.T = 0.99;
  base.seed = 2024;
  const std::vector<double> N1{8, 16, 32};
  bool pass = true;
  std::string detail;
  struct Case {
    const char* label;
    GridSpec grid;
  };
  // N counts lattice frequency |xi|. Period 3 puts 26 lattice points in the
  // N2 = 4 shell while 64 modes still resolve 2 N1 = 64.
  const std::vector<Case> cases{
      {"T^3(lambda=3) 64^3", torus3(64, 3.0)},
      {"RxT^2(L=8,lambda=1) 192x24x24",
       GridSpec({Direction::euclidean(8), Direction::torus(1), Direction::torus(1)}, {192, 24, 24})}};
  for (const auto& c : cases) {
    const ProbeReport r = bilinear_sweep(c.grid, N1, base);
    const double worst = r.summary_value("max_ratio_over_bound");
    const double growth = r.summary_value("max_step_growth_ratio_over_bound");
    pass = pass && worst <= 4.0 && growth <= 2.0;
    detail += fmt("%s: max ratio/bound=%.3f (<=4) max step growth of mean ratio/bound=%.3f (<=2), "
                  "max ratio/N2^{1/2}=%.3f; ",
                  c.label, worst, growth, r.summary_value("max_ratio_over_n2sqrt"));
  }
  return {pass, detail};
}

DriftExperimentSpec drift_spec() {
  DriftExperimentSpec spec;
  spec.N_list = {4, 8, 16, 32};
  spec.s = 0.85;
  spec.t_loc = 0.5;
  spec.dt = 1e-4;
  spec.record_stride = 100;
  spec.dealias = false;
  return spec;
}

// Period 1.5 keeps max N = 32 under a quarter of the lattice max (129.9) and
// the data tail reaching 4 max N, with the first shell (4.19) as close to
// N = 4 as that allows.
GridSpec drift_grid() { return torus3(64, 1.5); }

SpectralField drift_data(const GridSpec& g) { return decaying_tail_data(g, 0.85, 128, 1, 1.0); }

Outcome almost_conservation() {
  const GridSpec g = drift_grid();
  const SpectralField u0 = drift_data(g);
  DriftExperimentSpec spec = drift_spec();
  const LineFit main = almost_conservation_experiment(u0, spec).fit("drift_slope");
  spec.s = 1.0;
  const LineFit identity = almost_conservation_experiment(u0, spec).fit("drift_slope");
  // Below min(N)/2 = 2 this lattice holds only the zero mode.
  spec.s = 0.85;
  const LineFit band = almost_conservation_experiment(constant_data(g, 1.0), spec).fit("drift_slope");
  const bool pass = main.slope <= -0.8 && main.r_squared >= 0.9 && std::abs(identity.slope) <= 0.1 &&
                    std::abs(band.slope) <= 0.1;
  return {pass, fmt("s=0.85: slope=%.3f (<=-0.8) R^2=%.4f (>=0.9); null s=1: slope=%.2e; "
                    "null band-limited: slope=%.2e (|.|<=0.1)",
                    main.slope, main.r_squared, identity.slope, band.slope)};
}

Outcome d_drift() {
  const GridSpec g = drift_grid();
  const ProbeReport r = dmod_drift_experiment(drift_data(g), drift_spec());
  const LineFit f = r.fit("drift_slope");
  return {f.slope <= -0.8 && f.r_squared >= 0.9,
          fmt("slope=%.3f (<=-0.8) R^2=%.4f (>=0.9)", f.slope, f.r_squared)};
}

Outcome schedule() {
  const Schedule edge = imethod_schedule(Rational(5, 6), 16);
  const Schedule mid = imethod_schedule(Rational(11, 12), 16);
  const Schedule one = imethod_schedule(Rational(1), 16);
  bool sub_error = false;
  try {
    imethod_schedule_strict(Rational(5, 6), 16);
  } catch (const Error& e) {
    sub_error = e.code() == ErrorCode::sub_threshold;
  }
  const bool pass = edge.sub_threshold && sub_error && edge.t_exponent == Rational(0) &&
                    !mid.sub_threshold && mid.lambda_exponent == Rational(1, 5) &&
                    mid.t_exponent == Rational(3, 5) && mid.energy_exponent == Rational(1, 3) &&
                    one.lambda_exponent == Rational(0) && one.t_exponent == Rational(1) &&
                    one.energy_exponent == Rational(0);
  return {pass, "5/6 -> SubThreshold; 11/12 -> (" + mid.lambda_exponent.str() + ", " + mid.t_exponent.str() +
                    ", " + mid.energy_exponent->str() + ") with energy exponent 2(1-s)/(6s-5); 1 -> (" +
                    one.lambda_exponent.str() + ", " + one.t_exponent.str() + ", " +
                    one.energy_exponent->str() + ")"};
}

Outcome scaling() {
  const GridSpec g = torus3(16, two_pi);
  const SpectralField u0 = smooth_random_data(g, 2.0, 5, 1.0);
  const double t = 0.5;
  const double dt = t / std::ceil(t / default_time_step(g));
  const double err = scaling_check(u0, 2.0, t, dt);
  return {err <= 1e-8, fmt("lambda=2 t=0.5 dt=%.3e: rel. error=%.2e (limit 1e-8)", dt, err)};
}

Outcome growth() {
  const GridSpec g = torus3(32, two_pi);
  const SpectralField profile = smooth_random_data(g, 2.0, 3, 1.0);
  GrowthSpec spec;
  spec.t_end = 50;
  spec.dt = 2e-3;
  spec.record_stride = 50;
  spec.delta = 0.1;
  spec.dealias = true;
  std::vector<double> sups, slopes;
  for (double A : {1.0, 4.0}) {
    SpectralField u0 = profile;
    u0.coeffs() *= A / sobolev_norm(profile, 2.0);
    const ProbeReport r = sobolev_growth_experiment(u0, spec);
    sups.push_back(r.summary_value("sup_ratio"));
    slopes.push_back(r.fit("h2_growth").slope);
  }
  const double spread = std::max(sups[0], sups[1]) / std::min(sups[0], sups[1]);
  const bool pass = std::isfinite(sups[0]) && std::isfinite(sups[1]) && spread <= 2.0 && slopes[0] <= 1.1 &&
                    slopes[1] <= 1.1;
  return {pass, fmt("sup R: A=1 %.4f, A=4 %.4f, spread x%.3f (<=2); H^2 growth exponent %.2e, %.2e (<=1.1)",
                    sups[0], sups[1], spread, slopes[0], slopes[1])};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const std::vector<Criterion> criteria{
      {"transform-exactness", 5, transforms},
      {"propagator-exactness", 0, propagator},
      {"constant-solution", 0, constant_solution},
      {"conservation", 0, conservation},
      {"multiplier-bounds", 10, multiplier_bounds},
      {"dealiasing", 0, dealiasing},
      {"xsb-separability", 0, xsb_separability},
      {"bilinear-sweep", 15 * 60, bilinear_sweep_check},
      {"almost-conservation", 20 * 60, almost_conservation},
      {"d-drift", 0, d_drift},
      {"schedule", 0, schedule},
      {"scaling-symmetry", 0, scaling},
      {"growth-envelope", 20 * 60, growth},
  };
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (c.name.find(filter) == std::string::npos) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    std::string timing = fmt("%.1f s", secs);
    if (c.budget_seconds > 0) {
      timing += fmt(" of %.0f s", c.budget_seconds);
      if (secs > c.budget_seconds) {
        out.pass = false;
        timing += " OVER BUDGET";
      }
    }
    std::printf("%s  %-22s %s [%s]\n", out.pass ? "PASS" : "FAIL", c.name.c_str(), out.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
