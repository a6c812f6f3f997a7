#include "support.hpp"

#include "wgnls/error.hpp"
#include "wgnls/probes.hpp"

#include <doctest.h>

using namespace testing;

TEST_CASE("build_grid accepts torus and waveguide geometries") {
  const GridSpec t3 = build_grid(3, {Direction::torus(1), Direction::torus(1), Direction::torus(1)},
                                 {32, 32, 32});
  CHECK(t3.size() == 32 * 32 * 32);
  CHECK(t3.cell_volume() == doctest::Approx(1.0 / 32768).epsilon(1e-15));
  CHECK(t3.frequency_weight() == 1.0);
  CHECK_FALSE(t3.has_euclidean());

  const GridSpec wg =
      build_grid(3, {Direction::euclidean(16), Direction::torus(1), Direction::torus(1)},
                 {128, 32, 32});
  CHECK(wg.euclidean_count() == 1);
  CHECK(wg.cell_volume() == doctest::Approx(16.0 / 128 / 1024));
  CHECK(wg.frequency_weight() == doctest::Approx(1.0 / 16));
}

TEST_CASE("build_grid rejects invalid geometry") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::io_error;
  };
  const std::vector<Direction> t3{Direction::torus(1), Direction::torus(1), Direction::torus(1)};
  CHECK(code_of([&] { build_grid(3, t3, {31, 32, 32}); }) == ErrorCode::odd_mode_count);
  CHECK(code_of([&] {
          build_grid(3, {Direction::torus(0), Direction::torus(1), Direction::torus(1)}, {8, 8, 8});
        }) == ErrorCode::non_positive_period);
  CHECK(code_of([&] { build_grid(5, t3, {8, 8, 8}); }) == ErrorCode::bad_dimension);
  CHECK(code_of([&] { build_grid(1, {Direction::torus(1)}, {8}); }) == ErrorCode::bad_dimension);
}

TEST_CASE("lattice frequencies and Nyquist symmetry") {
  const GridSpec g({Direction::torus(2.0), Direction::torus(1.0), Direction::torus(0.5)}, {8, 6, 4});
  CHECK(g.axis_frequencies(0)[1] == doctest::Approx(two_pi / 2.0));
  CHECK(g.axis_frequencies(0)[7] == doctest::Approx(-two_pi / 2.0));
  CHECK(g.axis_frequencies(2)[1] == doctest::Approx(two_pi / 0.5));
  // Every retained xi has a retained partner -xi.
  for (Eigen::Index p = 0; p < g.size(); ++p) {
    if (g.nyquist_mask()[p]) continue;
    std::vector<int> m = g.multi_index(p);
    for (int a = 0; a < 3; ++a) m[a] = -g.signed_mode(a, m[a]);
    const Eigen::Index q = g.flat_index(m);
    CHECK_FALSE(g.nyquist_mask()[q]);
    for (int a = 0; a < 3; ++a) CHECK(g.xi(a)[q] == -g.xi(a)[p]);
  }
}

TEST_CASE("irrational periods are allowed") {
  const GridSpec g({Direction::torus(std::sqrt(2.0)), Direction::torus(1), Direction::torus(1)},
                   {8, 8, 8});
  const SpatialField f = random_spatial(g, 3);
  const SpectralField F = to_spectral(f);
  CHECK(l2_norm(to_spatial(F)) == doctest::Approx(l2_norm(F)).epsilon(1e-13));
}

TEST_CASE("constant field transforms to a delta at zero frequency") {
  const GridSpec g = torus3(16);
  const Complex c(0.3, -1.1);
  SpatialField f(g, ComplexArray::Constant(g.size(), c));
  const SpectralField F = to_spectral(f);
  CHECK(std::abs(F.coeffs()[0] - c) < 1e-12);
  CHECK(F.coeffs().tail(g.size() - 1).abs().maxCoeff() < 1e-12);

  const SpatialField back = to_spatial(F);
  CHECK((back.values() - c).abs().maxCoeff() < 1e-12);
}

TEST_CASE("plane wave is a single coefficient, and back") {
  const GridSpec g = torus3(16);
  const std::vector<int> m{2, -3, 5};
  const std::vector<double> xi0{two_pi * 2, two_pi * -3, two_pi * 5};
  const Complex a(0.5, 0.25);
  const SpectralField F = to_spectral(plane_wave(g, a, xi0));
  const Eigen::Index p = g.flat_index(m);
  CHECK(std::abs(F.coeffs()[p] - a) < 1e-12);
  ComplexArray rest = F.coeffs();
  rest[p] = 0.0;
  CHECK(rest.abs().maxCoeff() < 1e-12);

  const SpectralField delta = plane_wave_data(g, a, m);
  CHECK(rel_diff(to_spatial(delta).values(), plane_wave(g, a, xi0).values()) < 1e-13);
}

TEST_CASE("roundtrip and Plancherel on random data") {
  for (const GridSpec& g : {torus3(32), torus3(16, two_pi),
                            GridSpec({Direction::euclidean(16), Direction::torus(1),
                                      Direction::torus(1)},
                                     {64, 16, 16})}) {
    // Nyquist-free data is reproduced exactly; the transform itself zeroes Nyquist.
    const SpatialField f = to_spatial(random_spectral(g, 11));
    const SpatialField back = to_spatial(to_spectral(f));
    CHECK(rel_diff(back.values(), f.values()) < 1e-12);
    const SpectralField F = to_spectral(f);
    CHECK(std::abs(l2_norm(f) - l2_norm(F)) / l2_norm(f) < 1e-12);
  }
}

TEST_CASE("transforms are linear") {
  const GridSpec g = torus3(16);
  const SpatialField f = random_spatial(g, 1);
  const SpatialField h = random_spatial(g, 2);
  const Complex alpha(0.7, -2.0);
  const SpatialField combo(g, alpha * f.values() + h.values());
  const ComplexArray lhs = to_spectral(combo).coeffs();
  const ComplexArray rhs = alpha * to_spectral(f).coeffs() + to_spectral(h).coeffs();
  CHECK(rel_diff(lhs, rhs) < 1e-13);
}

TEST_CASE("spectral fields keep Nyquist coefficients at zero") {
  const GridSpec g = torus3(8);
  const SpectralField F(g, ComplexArray::Ones(g.size()));
  for (Eigen::Index p = 0; p < g.size(); ++p)
    if (g.nyquist_mask()[p]) CHECK(F.coeffs()[p] == Complex(0.0));
}

TEST_CASE("boundary mass fraction") {
  const GridSpec wg({Direction::euclidean(16), Direction::torus(1), Direction::torus(1)},
                    {128, 16, 16});
  SUBCASE("constant density gives the discrete shell fraction") {
    const SpatialField f(wg, ComplexArray::Ones(wg.size()));
    int outer = 0;
    for (int i = 0; i < 128; ++i) outer += std::abs(i / 128.0 - 0.5) > 0.45 ? 1 : 0;
    CHECK(boundary_mass_fraction(f) == doctest::Approx(outer / 128.0).epsilon(1e-14));
    CHECK(outer / 128.0 == doctest::Approx(0.1).epsilon(0.05));
  }
  SUBCASE("centered Gaussian of width L/20 has a negligible tail") {
    const SpatialField f = to_spatial(gaussian_bump_data(wg, 1.0, 16.0 / 20.0));
    CHECK(boundary_mass_fraction(f) < 1e-10);
  }
  SUBCASE("pure torus has no boundary") {
    const GridSpec g = torus3(8);
    CHECK_THROWS_AS(boundary_mass_fraction(SpatialField(g)), Error);
  }
}

TEST_CASE("padding keeps the trigonometric polynomial") {
  const GridSpec g = torus3(8);
  const SpectralField F = random_spectral(g, 5);
  const SpectralPadding pad(g, 2);
  CHECK(pad.padded_size() == 16 * 16 * 16);
  ComplexArray big;
  pad.pad(F.coeffs(), big);
  ComplexArray small(g.size());
  pad.truncate(big, small);
  CHECK(rel_diff(small, F.coeffs()) == 0.0);
  pad.to_physical(big);
  // Mass is the same quadrature on either grid for a band-limited field.
  const double padded_mass = pad.padded_cell_volume() * big.abs2().sum();
  CHECK(padded_mass == doctest::Approx(l2_norm(F) * l2_norm(F)).epsilon(1e-13));
}
