#include "oracles.hpp"
#include "support.hpp"

#include "wgnls/error.hpp"
#include "wgnls/functionals.hpp"
#include "wgnls/multipliers.hpp"
#include "wgnls/probes.hpp"

#include <doctest.h>

using namespace testing;

TEST_CASE("constant field") {
  const GridSpec g = torus3(16);
  const Complex c(0.7, -0.4);
  const SpectralField f = constant_data(g, c);
  CHECK(mass(f) == doctest::Approx(std::norm(c)).epsilon(1e-14));
  CHECK(energy(f) == doctest::Approx(0.25 * std::pow(std::norm(c), 2)).epsilon(1e-13));
  for (double p : momentum(f)) CHECK(std::abs(p) < 1e-15);
  CHECK(sobolev_norm(f, 1.0) == doctest::Approx(std::abs(c)).epsilon(1e-14));
  CHECK(sobolev_norm(f, 2.0) == doctest::Approx(std::abs(c)).epsilon(1e-14));
  CHECK(modified_energy_I(f, two_pi * 2, 0.9) == doctest::Approx(energy(f)).epsilon(1e-13));
  CHECK(modified_energy_D(f, two_pi * 2) == doctest::Approx(energy(f)).epsilon(1e-13));

  const GridSpec big = torus3(8, 3.0);
  CHECK(mass(constant_data(big, c)) == doctest::Approx(27.0 * std::norm(c)).epsilon(1e-14));
}

TEST_CASE("spatial and spectral evaluations agree") {
  const GridSpec g = torus3(16);
  const SpectralField f = smooth_random_data(g, 10.0, 4, 1.0);
  const SpatialField u = to_spatial(f);
  CHECK(mass(u) == doctest::Approx(mass(f)).epsilon(1e-13));
  CHECK(energy(u) == doctest::Approx(energy(f)).epsilon(1e-13));
  // Quartic term against a direct sum on a 4x finer grid.
  const GridSpec fine = torus3(64);
  ComplexArray c = ComplexArray::Zero(fine.size());
  for (Eigen::Index p = 0; p < g.size(); ++p) {
    const auto idx = g.multi_index(p);
    std::vector<int> m{g.signed_mode(0, idx[0]), g.signed_mode(1, idx[1]), g.signed_mode(2, idx[2])};
    c[fine.flat_index(m)] = f.coeffs()[p];
  }
  const SpatialField uf = to_spatial(SpectralField(fine, c));
  const double direct = fine.cell_volume() * uf.values().abs2().square().sum();
  CHECK(quartic_integral(f) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("momentum") {
  const GridSpec g = torus3(16);
  SUBCASE("real field has none") {
    SpatialField u = random_spatial(g, 8);
    u.values() = u.values().real().cast<Complex>();
    for (double p : momentum(u)) CHECK(std::abs(p) < 1e-12);
  }
  SUBCASE("plane wave carries |a|^2 xi0") {
    const Complex a(0.6, 0.8);
    const std::vector<double> xi0{two_pi * 3, two_pi * -1, two_pi * 5};
    const std::vector<double> p = momentum(plane_wave(g, a, xi0));
    for (int ax = 0; ax < 3; ++ax) CHECK(p[ax] == doctest::Approx(std::norm(a) * xi0[ax]).epsilon(1e-12));
  }
}

TEST_CASE("Sobolev norms") {
  const GridSpec g = torus3(16);
  const Complex a(0.3, 0.4);
  const SpectralField f = plane_wave_data(g, a, {1, 2, 2});
  const double k2 = two_pi * two_pi * 9.0;
  for (double s : {0.0, 0.5, 1.0, 2.0})
    CHECK(sobolev_norm(f, s) == doctest::Approx(std::pow(1.0 + k2, s / 2) * std::abs(a)).epsilon(1e-13));

  const SpectralField r = random_spectral(g, 3);
  CHECK(sobolev_norm(r, 0.0) == doctest::Approx(std::sqrt(mass(r))).epsilon(1e-14));
  CHECK(sobolev_norm(r, 0.5) < sobolev_norm(r, 1.0));
}

TEST_CASE("modified energies") {
  const GridSpec g = torus3(32);
  const SpectralField f = smooth_random_data(g, 20.0, 9, 1.0);
  SUBCASE("cutoff above the lattice is the identity") {
    const double N = 4.0 * g.max_norm();
    CHECK(modified_energy_I(f, N, 0.9) == doctest::Approx(energy(f)).epsilon(1e-13));
    CHECK(modified_energy_D(f, N) == doctest::Approx(energy(f)).epsilon(1e-13));
  }
  SUBCASE("I damps and D amplifies the gradient energy") {
    double full = 0.0;
    for (const auto& c : gradient(f)) full += mass(c);
    for (double N : {two_pi, two_pi * 2, two_pi * 4}) {
      CHECK(gradient_energy_I(f, N, 0.9) <= full * (1 + 1e-14));
      CHECK(gradient_energy_D(f, N) >= full * (1 - 1e-14));
    }
    CHECK(gradient_energy_I(f, 4.0 * g.max_norm(), 0.9) == doctest::Approx(full).epsilon(1e-13));
  }
}

TEST_CASE("Lebesgue and space-time norms") {
  const GridSpec g = torus3(8);
  const Complex c(0.0, 2.0);
  SUBCASE("constant trajectory") {
    Trajectory traj(g);
    for (int n = 0; n <= 10; ++n) {
      traj.times.push_back(0.1 * n);
      traj.snapshots.push_back(constant_data(g, c));
    }
    for (double p : {1.0, 2.0, 10.0 / 3.0, infinity})
      for (double q : {2.0, 4.0, infinity}) CHECK(spacetime_norm(traj, p, q) == doctest::Approx(2.0).epsilon(1e-13));
  }
  SUBCASE("free plane wave has constant modulus") {
    const Trajectory traj = free_trajectory(plane_wave_data(g, 0.5, {1, 0, -2}), 0.01, 50);
    CHECK(spacetime_norm(traj, 10.0 / 3.0, 10.0 / 3.0) == doctest::Approx(0.5 * std::pow(0.5, 0.3)).epsilon(1e-12));
  }
  SUBCASE("single snapshot") {
    Trajectory traj(g);
    traj.times.push_back(0.0);
    traj.snapshots.push_back(random_spectral(g, 4));
    CHECK(spacetime_norm(traj, infinity, 4.0) == lebesgue_norm(to_spatial(traj.snapshots[0]), 4.0));
    CHECK(code_of([&] { spacetime_norm(traj, 2.0, 2.0); }) == ErrorCode::invalid_argument);
  }
  SUBCASE("errors") {
    CHECK(code_of([&] { spacetime_norm(Trajectory(g), 2.0, 2.0); }) == ErrorCode::empty_trajectory);
    CHECK(code_of([&] { lebesgue_norm(SpatialField(g), 0.5); }) == ErrorCode::invalid_argument);
  }
}

TEST_CASE("smooth window cutoff") {
  const WindowSpec w{1.0, 3.0};
  CHECK(w.chi(0.9) == 0.0);
  CHECK(w.chi(1.1) == 0.0);
  CHECK(w.chi(1.5) == 1.0);
  CHECK(w.chi(2.5) == 1.0);
  CHECK(w.chi(1.3) > 0.0);
  CHECK(w.chi(1.3) < 1.0);
  CHECK(w.chi(1.5 - 0.1) == doctest::Approx(1.0 - w.chi(1.125 + 0.1)).epsilon(1e-12));
  CHECK(w.chi(1.7) == doctest::Approx(w.chi(2.3)));
}

TEST_CASE("X^{s,b} of a free solution separates") {
  const GridSpec g = torus3(8, two_pi);
  const SpectralField u0 = random_spectral(g, 12);
  const double dt = 1.0 / 1024;
  const Trajectory traj = free_trajectory(u0, dt, 1024);
  const WindowSpec w{0.0, 1.0};
  for (double s : {0.0, 1.0}) {
    for (double b : {0.0, 0.6}) {
      const double expected = sobolev_norm(u0, s) * cutoff_hb_norm(w, b);
      CHECK(xsb_norm(traj, s, w, b) == doctest::Approx(expected).epsilon(1e-2));
    }
  }
  // b = 0 with the flat window is the L^2 space-time norm by Plancherel.
  const WindowSpec flat{0.0, 1.0, true};
  CHECK(xsb_norm(traj, 0.0, flat, 0.0) == doctest::Approx(std::sqrt(mass(u0))).epsilon(1e-12));
}

TEST_CASE("X^{s,b} errors") {
  const GridSpec g = torus3(8, two_pi);
  const SpectralField u0 = random_spectral(g, 2);
  const Trajectory traj = free_trajectory(u0, 1.0 / 64, 64);
  CHECK(code_of([&] { xsb_norm(Trajectory(g), 0.0, {0.0, 1.0}); }) == ErrorCode::empty_trajectory);
  CHECK(code_of([&] { xsb_norm(traj, 0.0, {0.0, 1.5}); }) == ErrorCode::window_not_covered);
  CHECK(code_of([&] { xsb_norm(traj, 0.0, {0.0, 0.51}); }) == ErrorCode::window_not_covered);
  CHECK(code_of([&] { xsb_norm(traj, 0.0, {0.5, 0.5}); }) == ErrorCode::invalid_argument);
  const Trajectory coarse = free_trajectory(u0, 0.25, 4);
  CHECK(code_of([&] { xsb_norm(coarse, 0.0, {0.0, 1.0}); }) == ErrorCode::insufficient_sampling);
}

TEST_CASE("diagnostics record") {
  const GridSpec g = torus3(16);
  const SpectralField f = smooth_random_data(g, 10.0, 1, 1.0);
  const DiagnosticsRecord plain = diagnostics(0.5, f);
  CHECK(plain.t == 0.5);
  CHECK(plain.mass == mass(f));
  CHECK(plain.energy == energy(f));
  CHECK(plain.momentum.size() == 3);
  CHECK(plain.h1 == sobolev_norm(f, 1.0));
  CHECK(plain.h2 == sobolev_norm(f, 2.0));
  CHECK_FALSE(plain.e_i.has_value());
  CHECK_FALSE(plain.e_d.has_value());

  const DiagnosticsRecord full = diagnostics(0.0, f, ModifiedEnergyParams{two_pi * 2, 0.9}, two_pi * 2);
  REQUIRE(full.e_i.has_value());
  REQUIRE(full.e_d.has_value());
  CHECK(*full.e_i == modified_energy_I(f, two_pi * 2, 0.9));
  CHECK(*full.e_d == modified_energy_D(f, two_pi * 2));
}
