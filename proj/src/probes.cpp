#include "wgnls/probes.hpp"

#include "fft.hpp"
#include "wgnls/dynamics.hpp"
#include "wgnls/error.hpp"
#include "wgnls/multipliers.hpp"
#include "wgnls/parallel.hpp"
#include "wgnls/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

namespace wgnls {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double absent = std::numeric_limits<double>::quiet_NaN();

void scale_to_mass(ComplexArray& coeffs, const GridSpec& grid, double target) {
  const double m = grid.frequency_weight() * coeffs.abs2().sum();
  if (!(m > 0.0)) throw Error(ErrorCode::empty_shell, "initial data has no retained modes");
  coeffs *= std::sqrt(target / m);
}

void require_resolved(const GridSpec& grid, double top, const char* what) {
  if (grid.lattice_max() < top) {
    std::ostringstream msg;
    msg << what << ": lattice max frequency " << grid.lattice_max() << " is below " << top;
    throw Error(ErrorCode::under_resolved, msg.str());
  }
}

long sample_count(double T, double dt) {
  return std::max(1L, static_cast<long>(std::ceil(T / dt - 1e-9)));
}

std::vector<double> dyadic_pieces(const GridSpec& grid) {
  double top = 0.0;
  for (int a = 0; a < grid.dim(); ++a) top = std::max(top, grid.max_frequency(a));
  std::vector<double> out{1.0};
  while (out.back() / 2.0 < top) out.push_back(out.back() * 2.0);
  return out;
}

// Accumulates int_0^T ||P_M D_N u(t)||_{L^{10/3}}^{10/3} dt with the trapezoid
// rule as snapshots arrive, for every N and every dyadic M.
class SurrogateAccumulator {
 public:
  SurrogateAccumulator(const GridSpec& grid, std::vector<double> Ns)
      : grid_(grid), Ns_(std::move(Ns)), pieces_(dyadic_pieces(grid)) {
    integrals_.assign(Ns_.size(), std::vector<double>(pieces_.size(), 0.0));
    previous_ = integrals_;
  }

  void add(double t, const SpectralField& u) {
    std::vector<std::vector<double>> current = integrals_;
    for (std::size_t i = 0; i < Ns_.size(); ++i) {
      const SpectralField du = apply_D(u, Ns_[i]);
      for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const SpectralField piece =
            k == 0 ? project_leq(du, 1.0) : project_band(du, pieces_[k]);
        const double q = lebesgue_norm(to_spatial(piece), 10.0 / 3.0);
        current[i][k] = std::pow(q, 10.0 / 3.0);
      }
    }
    if (samples_ > 0) {
      const double h = t - last_t_;
      for (std::size_t i = 0; i < Ns_.size(); ++i)
        for (std::size_t k = 0; k < pieces_.size(); ++k)
          integrals_[i][k] += 0.5 * h * (previous_[i][k] + current[i][k]);
    } else {
      for (auto& row : integrals_) std::fill(row.begin(), row.end(), 0.0);
    }
    previous_ = std::move(current);
    last_t_ = t;
    ++samples_;
  }

  double value(std::size_t i) const {
    if (samples_ < 2) throw Error(ErrorCode::empty_trajectory, "surrogate needs two samples");
    double total = 0.0;
    for (std::size_t k = 0; k < pieces_.size(); ++k)
      total += std::min(1.0, pieces_[k] / Ns_[i]) * std::pow(integrals_[i][k], 0.3);
    return total;
  }

 private:
  GridSpec grid_;
  std::vector<double> Ns_;
  std::vector<double> pieces_;
  std::vector<std::vector<double>> integrals_;
  std::vector<std::vector<double>> previous_;
  double last_t_ = 0.0;
  long samples_ = 0;
};

std::vector<double> per_n_mean(const ProbeReport& r, const std::string& key, const std::string& col,
                               std::vector<double>& keys_out) {
  std::map<double, std::pair<double, int>> acc;
  const auto k = r.column(key);
  const auto v = r.column(col);
  for (std::size_t i = 0; i < k.size(); ++i) {
    acc[k[i]].first += v[i];
    acc[k[i]].second += 1;
  }
  std::vector<double> means;
  keys_out.clear();
  for (const auto& [key_value, sum] : acc) {
    keys_out.push_back(key_value);
    means.push_back(sum.first / sum.second);
  }
  return means;
}

}  // namespace

// ---------------------------------------------------------------------------
// Initial data

SpectralField random_annulus_data(const GridSpec& grid, const AnnulusDataSpec& spec) {
  const RealArray& k = grid.xi_norm();
  const MaskArray& nyq = grid.nyquist_mask();
  ComplexArray coeffs = ComplexArray::Zero(grid.size());
  bool any = false;
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    if (nyq[p] || !(k[p] > 0.5 * spec.N && k[p] <= spec.N)) continue;
    coeffs[p] = rng::complex_gaussian(spec.seed, spec.stream, static_cast<std::uint64_t>(p));
    any = true;
  }
  if (!any) {
    std::ostringstream msg;
    msg << "no lattice frequency with " << 0.5 * spec.N << " < |xi| <= " << spec.N;
    throw Error(ErrorCode::empty_shell, msg.str());
  }
  scale_to_mass(coeffs, grid, 1.0);
  return SpectralField(grid, std::move(coeffs));
}

SpectralField constant_data(const GridSpec& grid, Complex c) {
  ComplexArray coeffs = ComplexArray::Zero(grid.size());
  coeffs[0] = c / grid.frequency_weight();
  return SpectralField(grid, std::move(coeffs));
}

SpectralField plane_wave_data(const GridSpec& grid, Complex amplitude,
                              const std::vector<int>& signed_modes) {
  if (static_cast<int>(signed_modes.size()) != grid.dim())
    throw Error(ErrorCode::invalid_argument, "one mode index per axis is required");
  for (int a = 0; a < grid.dim(); ++a) {
    const int half = grid.modes(a) / 2;
    if (signed_modes[a] <= -half || signed_modes[a] >= half)
      throw Error(ErrorCode::invalid_argument, "plane-wave mode is outside the retained lattice");
  }
  ComplexArray coeffs = ComplexArray::Zero(grid.size());
  coeffs[grid.flat_index(signed_modes)] = amplitude / grid.frequency_weight();
  return SpectralField(grid, std::move(coeffs));
}

SpectralField decaying_tail_data(const GridSpec& grid, double s, double k_max,
                                 std::uint64_t seed, double mass) {
  const double decay = s + 1.5 + 0.01;
  const RealArray& k2 = grid.xi_norm_squared();
  const MaskArray& nyq = grid.nyquist_mask();
  ComplexArray coeffs = ComplexArray::Zero(grid.size());
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    if (nyq[p] || k2[p] > k_max * k_max) continue;
    coeffs[p] = std::pow(1.0 + k2[p], -0.5 * decay) *
                rng::random_phase(seed, 0, static_cast<std::uint64_t>(p));
  }
  scale_to_mass(coeffs, grid, mass);
  return SpectralField(grid, std::move(coeffs));
}

SpectralField smooth_random_data(const GridSpec& grid, double width, std::uint64_t seed,
                                 double mass) {
  const RealArray& k2 = grid.xi_norm_squared();
  ComplexArray coeffs(grid.size());
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    coeffs[p] = std::exp(-k2[p] / (2.0 * width * width)) *
                rng::random_phase(seed, 0, static_cast<std::uint64_t>(p));
  }
  SpectralField out(grid, std::move(coeffs));
  scale_to_mass(out.coeffs(), grid, mass);
  return out;
}

SpectralField gaussian_bump_data(const GridSpec& grid, Complex amplitude, double sigma) {
  SpatialField f(grid);
  const int d = grid.dim();
  std::vector<int> idx(d, 0);
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      if (grid.direction(a).kind != DirectionKind::euclidean_truncated) continue;
      const double c = grid.coordinate(a, idx[a]) - 0.5 * grid.direction(a).period;
      r2 += c * c;
    }
    f.values()[p] = amplitude * std::exp(-r2 / (2.0 * sigma * sigma));
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < grid.modes(a)) break;
      idx[a] = 0;
    }
  }
  return to_spectral(f);
}

// ---------------------------------------------------------------------------
// Reports

double ProbeReport::parameter(const std::string& name) const {
  for (const auto& [k, v] : parameters)
    if (k == name) return v;
  throw Error(ErrorCode::invalid_argument, "no parameter " + name);
}

double ProbeReport::summary_value(const std::string& name) const {
  for (const auto& [k, v] : summary)
    if (k == name) return v;
  throw Error(ErrorCode::invalid_argument, "no summary value " + name);
}

const LineFit& ProbeReport::fit(const std::string& name) const {
  for (const auto& f : fits)
    if (f.name == name) return f.fit;
  throw Error(ErrorCode::invalid_argument, "no fit " + name);
}

std::vector<double> ProbeReport::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorCode::invalid_argument, "no column " + name);
  const auto c = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.at(c));
  return out;
}

ProbeReport merge_reports(const std::vector<ProbeReport>& parts, const std::string& experiment) {
  if (parts.empty()) throw Error(ErrorCode::invalid_argument, "nothing to merge");
  ProbeReport out;
  out.experiment = experiment;
  out.grid = parts.front().grid;
  out.columns = parts.front().columns;
  out.seed = parts.front().seed;
  for (const auto& p : parts) {
    if (p.columns != out.columns) throw Error(ErrorCode::invalid_argument, "column mismatch");
    out.rows.insert(out.rows.end(), p.rows.begin(), p.rows.end());
    out.notes.insert(out.notes.end(), p.notes.begin(), p.notes.end());
    out.wall_seconds += p.wall_seconds;
  }
  std::sort(out.notes.begin(), out.notes.end());
  out.notes.erase(std::unique(out.notes.begin(), out.notes.end()), out.notes.end());
  return out;
}

// ---------------------------------------------------------------------------
// Bilinear and Strichartz probes

double bilinear_bound(int d, double lambda, double N1, double N2, double eps) {
  if (!(N2 >= 1.0) || N2 > N1)
    throw Error(ErrorCode::invalid_argument, "bilinear bound requires 1 <= N2 <= N1");
  if (!(lambda > 0.0)) throw Error(ErrorCode::invalid_argument, "lambda must be positive");
  const double loss = std::pow(N2, eps);
  switch (d) {
    case 2: return loss * std::sqrt(1.0 / lambda + N2 / N1);
    case 3: return loss * (1.0 / std::sqrt(lambda) + N2 / std::sqrt(N1));
    case 4: return loss * std::sqrt(N2 / lambda + N2 * N2 * N2 / N1);
    default: throw Error(ErrorCode::bad_dimension, "bilinear bound is defined for d = 2, 3, 4");
  }
}

double torus_scale(const GridSpec& grid) {
  double out = 0.0;
  for (const auto& dir : grid.directions())
    if (dir.kind == DirectionKind::torus) out = out == 0.0 ? dir.period : std::min(out, dir.period);
  return out == 0.0 ? 1.0 : out;
}

namespace {

struct TimeRule {
  std::vector<double> t, weight;
};

TimeRule trapezoid_rule(double T, long samples) {
  TimeRule r;
  const double dt = T / static_cast<double>(samples);
  for (long n = 0; n <= samples; ++n) {
    r.t.push_back(dt * static_cast<double>(n));
    r.weight.push_back((n == 0 || n == samples) ? 0.5 * dt : dt);
  }
  return r;
}

// Newton iteration on the Legendre recurrence, mapped from [-1, 1] to [0, T].
TimeRule gauss_legendre_rule(double T, int n) {
  TimeRule r;
  r.t.resize(n);
  r.weight.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.t[i] = 0.5 * T * (1.0 - x);
    r.t[n - 1 - i] = 0.5 * T * (1.0 + x);
    r.weight[i] = r.weight[n - 1 - i] = 0.5 * T * w;
  }
  return r;
}

int fft_friendly_size(int at_least) {
  for (int m = at_least + (at_least % 2);; m += 2) {
    int rest = m;
    for (int f : {2, 3, 5}) while (rest % f == 0) rest /= f;
    if (rest == 1) return m;
  }
}

struct Support {
  std::vector<Eigen::Index> padded;
  std::vector<Complex> coeff;
  std::vector<double> k2;
  double k2_min = 0.0, k2_max = 0.0;
};

double product_norm(const SpectralField& u, const SpectralField& v, const TimeRule* fixed, double T) {
  const GridSpec& grid = u.grid();
  if (!(v.grid() == grid)) throw Error(ErrorCode::invalid_argument, "fields on different grids");
  if (!(T > 0.0)) throw Error(ErrorCode::invalid_argument, "bad time sampling");
  const int d = grid.dim();
  const RealArray& k2 = grid.xi_norm_squared();

  std::vector<int> reach_u(d, 0), reach_v(d, 0);
  auto reach = [&](const SpectralField& f, std::vector<int>& r) {
    bool any = false;
    for (Eigen::Index p = 0; p < grid.size(); ++p) {
      if (f.coeffs()[p] == Complex(0.0)) continue;
      any = true;
      const std::vector<int> m = grid.multi_index(p);
      for (int a = 0; a < d; ++a) r[a] = std::max(r[a], std::abs(grid.signed_mode(a, m[a])));
    }
    return any;
  };
  if (!reach(u, reach_u) || !reach(v, reach_v)) return 0.0;

  // |uv|^2 has frequencies up to 2 (reach_u + reach_v) per axis; a grid with
  // more points than that integrates it exactly.
  std::vector<int> extents(d);
  Eigen::Index total = 1;
  for (int a = 0; a < d; ++a) {
    extents[a] = fft_friendly_size(2 * (reach_u[a] + reach_v[a]) + 1);
    total *= extents[a];
  }
  auto support = [&](const SpectralField& f) {
    Support s;
    s.k2_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index p = 0; p < grid.size(); ++p) {
      if (f.coeffs()[p] == Complex(0.0)) continue;
      const std::vector<int> m = grid.multi_index(p);
      Eigen::Index flat = 0;
      for (int a = 0; a < d; ++a) {
        int idx = grid.signed_mode(a, m[a]);
        if (idx < 0) idx += extents[a];
        flat = flat * extents[a] + idx;
      }
      s.padded.push_back(flat);
      s.coeff.push_back(f.coeffs()[p]);
      s.k2.push_back(k2[p]);
      s.k2_min = std::min(s.k2_min, k2[p]);
      s.k2_max = std::max(s.k2_max, k2[p]);
    }
    return s;
  };
  const Support A = support(u);
  const Support B = support(v);

  TimeRule rule;
  if (fixed != nullptr) {
    rule = *fixed;
  } else {
    // The integrand is a trigonometric polynomial in t with frequencies below
    // omega; Gauss-Legendre with omega T / 4 nodes plus a margin resolves it
    // to rounding.
    const double omega = (A.k2_max + B.k2_max) - (A.k2_min + B.k2_min);
    rule = gauss_legendre_rule(T, static_cast<int>(std::ceil(omega * T / 4.0)) + 24);
  }

  // Inverse transforms need the factor w = prod 1/P; the padded cell is 1 / (w total).
  const double w = grid.frequency_weight();
  const double h = 1.0 / (w * static_cast<double>(total));

  ComplexArray fu(total), fv(total);
  double integral = 0.0;
  for (std::size_t n = 0; n < rule.t.size(); ++n) {
    const double t = rule.t[n];
    fu.setZero();
    fv.setZero();
    for (std::size_t i = 0; i < A.padded.size(); ++i) fu[A.padded[i]] = A.coeff[i] * std::polar(1.0, -t * A.k2[i]);
    for (std::size_t j = 0; j < B.padded.size(); ++j) fv[B.padded[j]] = B.coeff[j] * std::polar(1.0, -t * B.k2[j]);
    fft::backward(fu, extents);
    fft::backward(fv, extents);
    integral += rule.weight[n] * h * w * w * w * w * (fu * fv).abs2().sum();
  }
  return std::sqrt(integral);
}

}  // namespace

double bilinear_product_norm(const SpectralField& u, const SpectralField& v, double T,
                             long samples) {
  if (samples < 1 || !(T > 0.0)) throw Error(ErrorCode::invalid_argument, "bad time sampling");
  const TimeRule rule = trapezoid_rule(T, samples);
  return product_norm(u, v, &rule, T);
}

double bilinear_product_norm(const SpectralField& u, const SpectralField& v, double T) {
  return product_norm(u, v, nullptr, T);
}

ProbeReport bilinear_probe(const GridSpec& grid, const BilinearProbeSpec& spec) {
  const auto start = Clock::now();
  if (!(spec.N2 >= 1.0) || spec.N2 > spec.N1)
    throw Error(ErrorCode::invalid_argument, "bilinear probe requires 1 <= N2 <= N1");
  if (!(spec.T > 0.0) || spec.T > 1.0)
    throw Error(ErrorCode::invalid_argument, "bilinear probe requires 0 < T <= 1");
  if (spec.trials < 1) throw Error(ErrorCode::invalid_argument, "trials must be >= 1");
  require_resolved(grid, 2.0 * spec.N1, "bilinear probe");

  const long samples = spec.dt > 0.0 ? sample_count(spec.T, spec.dt) : 0;
  const double lambda = torus_scale(grid);
  const int d = grid.dim();
  const double bound = bilinear_bound(d, lambda, spec.N1, spec.N2, 0.0);
  const double bound_sqrt = std::sqrt(spec.N2);

  const auto ratios = parallel_map<double>(static_cast<std::size_t>(spec.trials), [&](std::size_t i) {
    const auto trial = static_cast<std::uint64_t>(i);
    const SpectralField u = random_annulus_data(grid, {spec.N1, spec.seed, 2 * trial});
    const SpectralField v = random_annulus_data(grid, {spec.N2, spec.seed, 2 * trial + 1});
    const double norm = samples > 0 ? bilinear_product_norm(u, v, spec.T, samples)
                                     : bilinear_product_norm(u, v, spec.T);
    return norm / (l2_norm(u) * l2_norm(v));
  });

  ProbeReport report;
  report.experiment = "bilinear";
  report.grid = grid.describe();
  report.seed = spec.seed;
  report.parameters = {{"d", d},         {"lambda", lambda}, {"n1", spec.N1},
                       {"n2", spec.N2},  {"T", spec.T},      {"dt", samples > 0 ? spec.T / samples : absent},
                       {"trials", spec.trials}};
  report.columns = {"d",     "lambda",   "n1",           "n2",
                    "trial", "ratio",    "bound_d3",     "bound_n2sqrt",
                    "ratio_over_d3", "ratio_over_n2sqrt"};
  for (int i = 0; i < spec.trials; ++i) {
    const double r = ratios[i];
    report.rows.push_back({static_cast<double>(d), lambda, spec.N1, spec.N2,
                           static_cast<double>(i), r, bound, bound_sqrt, r / bound,
                           r / bound_sqrt});
  }
  if (grid.has_euclidean())
    report.notes.push_back(
        "annulus data fills the periodic box; the boundary-mass monitor is reported, not enforced");
  report.wall_seconds = seconds_since(start);
  return report;
}

ProbeReport bilinear_sweep(const GridSpec& grid, const std::vector<double>& N1_list,
                           const BilinearProbeSpec& base) {
  const auto start = Clock::now();
  std::vector<ProbeReport> parts;
  for (double N1 : N1_list) {
    BilinearProbeSpec spec = base;
    spec.N1 = N1;
    spec.dt = base.dt;
    parts.push_back(bilinear_probe(grid, spec));
  }
  ProbeReport out = merge_reports(parts, "bilinear");
  out.parameters = {{"d", grid.dim()}, {"lambda", torus_scale(grid)}, {"n2", base.N2},
                    {"T", base.T},     {"trials", base.trials}};
  double max_over_bound = 0.0, max_over_sqrt = 0.0;
  for (double r : out.column("ratio_over_d3")) max_over_bound = std::max(max_over_bound, r);
  for (double r : out.column("ratio_over_n2sqrt")) max_over_sqrt = std::max(max_over_sqrt, r);
  std::vector<double> keys;
  const auto means = per_n_mean(out, "n1", "ratio_over_d3", keys);
  double growth = 0.0;
  for (std::size_t i = 1; i < means.size(); ++i) growth = std::max(growth, means[i] / means[i - 1]);
  out.summary = {{"max_ratio_over_bound", max_over_bound},
                 {"max_ratio_over_n2sqrt", max_over_sqrt},
                 {"max_step_growth_ratio_over_bound", growth}};
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::ostringstream name;
    name << "mean_ratio_over_bound_n1_" << keys[i];
    out.summary.emplace_back(name.str(), means[i]);
  }
  if (keys.size() >= 2) {
    out.fits.push_back({"ratio_over_bound_vs_n1", fit_power_law(keys, means)});
  }
  out.wall_seconds = seconds_since(start);
  return out;
}

ProbeReport strichartz_probe(const GridSpec& grid, const StrichartzProbeSpec& spec) {
  const auto start = Clock::now();
  if (spec.N_list.empty()) throw Error(ErrorCode::invalid_argument, "empty N list");
  for (double N : spec.N_list) require_resolved(grid, 2.0 * N, "Strichartz probe");
  const std::vector<double> exps{10.0 / 3.0, 30.0 / 7.0, 15.0 / 2.0};

  struct Task {
    double N;
    int trial;
  };
  std::vector<Task> tasks;
  for (double N : spec.N_list)
    for (int t = 0; t < spec.trials; ++t) tasks.push_back({N, t});

  const auto results = parallel_map<std::vector<double>>(tasks.size(), [&](std::size_t i) {
    const Task task = tasks[i];
    const SpectralField u0 =
        random_annulus_data(grid, {task.N, spec.seed, static_cast<std::uint64_t>(task.trial)});
    const double dt = spec.dt > 0.0 ? spec.dt : 0.1 / (4.0 * task.N * task.N);
    const long samples = sample_count(spec.T, dt);
    const double h = spec.T / static_cast<double>(samples);
    std::vector<double> integral(exps.size(), 0.0);
    for (long n = 0; n <= samples; ++n) {
      const SpatialField u = to_spatial(free_propagate(u0, h * static_cast<double>(n)));
      const RealArray modulus = u.values().abs();
      const double weight = (n == 0 || n == samples) ? 0.5 * h : h;
      for (std::size_t e = 0; e < exps.size(); ++e)
        integral[e] += weight * grid.cell_volume() * modulus.pow(exps[e]).sum();
    }
    std::vector<double> out;
    for (std::size_t e = 0; e < exps.size(); ++e)
      out.push_back(std::pow(integral[e], 1.0 / exps[e]) / l2_norm(u0));
    return out;
  });

  ProbeReport report;
  report.experiment = "strichartz";
  report.grid = grid.describe();
  report.seed = spec.seed;
  report.parameters = {{"T", spec.T}, {"trials", spec.trials}};
  report.columns = {"n", "trial", "l10_3", "l30_7", "l15_2"};
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    report.rows.push_back({tasks[i].N, static_cast<double>(tasks[i].trial), results[i][0],
                           results[i][1], results[i][2]});
  }
  if (spec.N_list.size() >= 2) {
    for (const char* col : {"l10_3", "l30_7", "l15_2"}) {
      std::vector<double> keys;
      const auto means = per_n_mean(report, "n", col, keys);
      report.fits.push_back({std::string(col) + "_slope", fit_power_law(keys, means)});
    }
  }
  report.summary = {{"reference_slope_l30_7", 1.0 / 3.0}, {"reference_slope_l15_2", 5.0 / 6.0}};
  report.wall_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// Drift experiments

namespace {

void validate_drift(const SpectralField& u0, const DriftExperimentSpec& spec) {
  if (spec.N_list.size() < 2) throw Error(ErrorCode::invalid_argument, "need at least two N values");
  const double top = *std::max_element(spec.N_list.begin(), spec.N_list.end());
  if (top > u0.grid().lattice_max() / 4.0) {
    std::ostringstream msg;
    msg << "largest N = " << top << " exceeds a quarter of the lattice max "
        << u0.grid().lattice_max();
    throw Error(ErrorCode::under_resolved, msg.str());
  }
  for (double N : spec.N_list)
    if (!(N >= 1.0)) throw Error(ErrorCode::invalid_argument, "N must be >= 1");
}

ProbeReport drift_report(const char* name, const SpectralField& u0, const DriftExperimentSpec& spec,
                         const std::vector<double>& drift, double energy_drift, bool with_s) {
  ProbeReport report;
  report.experiment = name;
  report.grid = u0.grid().describe();
  report.parameters = {{"t_loc", spec.t_loc},
                       {"dt", spec.dt},
                       {"record_stride", spec.record_stride},
                       {"dealias", spec.dealias ? 1.0 : 0.0}};
  if (with_s) report.parameters.emplace_back("s", spec.s);
  report.columns = {"n", "s", "t_loc", "dt", "drift_sup"};
  for (std::size_t i = 0; i < spec.N_list.size(); ++i) {
    report.rows.push_back(
        {spec.N_list[i], with_s ? spec.s : absent, spec.t_loc, spec.dt, drift[i]});
  }
  report.fits.push_back({"drift_slope", fit_power_law(spec.N_list, drift)});
  report.summary = {{"energy_drift", energy_drift}};
  report.notes.push_back("local window chosen empirically; no constructive existence time is used");
  return report;
}

}  // namespace

ProbeReport almost_conservation_experiment(const SpectralField& u0, const DriftExperimentSpec& spec) {
  const auto start = Clock::now();
  validate_drift(u0, spec);
  if (!(spec.s >= 0.5) || spec.s > 1.0)
    throw Error(ErrorCode::invalid_argument, "s must lie in [1/2, 1]");
  const std::size_t n = spec.N_list.size();
  std::vector<double> e0(n), drift(n, 0.0);
  double energy0 = 0.0, energy_drift = 0.0;
  bool first = true;
  evolve(u0, {spec.dt, spec.t_loc, spec.record_stride, spec.dealias},
         [&](double, const SpectralField& u) {
           const double e = energy(u);
           for (std::size_t i = 0; i < n; ++i) {
             const double ei = modified_energy_I(u, spec.N_list[i], spec.s);
             if (first) e0[i] = ei;
             drift[i] = std::max(drift[i], std::abs(ei - e0[i]));
           }
           if (first) energy0 = e;
           energy_drift = std::max(energy_drift, std::abs(e - energy0));
           first = false;
         });
  ProbeReport report = drift_report("almost_i", u0, spec, drift, energy_drift, true);
  report.wall_seconds = seconds_since(start);
  return report;
}

ProbeReport dmod_drift_experiment(const SpectralField& u0, const DriftExperimentSpec& spec) {
  const auto start = Clock::now();
  validate_drift(u0, spec);
  const std::size_t n = spec.N_list.size();
  std::vector<double> e0(n), drift(n, 0.0);
  double energy0 = 0.0, energy_drift = 0.0;
  bool first = true;
  SurrogateAccumulator surrogate(u0.grid(), spec.N_list);
  evolve(u0, {spec.dt, spec.t_loc, spec.record_stride, spec.dealias},
         [&](double t, const SpectralField& u) {
           const double e = energy(u);
           for (std::size_t i = 0; i < n; ++i) {
             const double ei = modified_energy_D(u, spec.N_list[i]);
             if (first) e0[i] = ei;
             drift[i] = std::max(drift[i], std::abs(ei - e0[i]));
           }
           if (first) energy0 = e;
           energy_drift = std::max(energy_drift, std::abs(e - energy0));
           surrogate.add(t, u);
           first = false;
         });
  ProbeReport report = drift_report("almost_d", u0, spec, drift, energy_drift, false);
  report.columns.push_back("surrogate");
  for (std::size_t i = 0; i < n; ++i) report.rows[i].push_back(surrogate.value(i));
  report.wall_seconds = seconds_since(start);
  return report;
}

double dmod_surrogate(const Trajectory& traj, double N) {
  if (traj.empty()) throw Error(ErrorCode::empty_trajectory, "trajectory has no snapshots");
  SurrogateAccumulator acc(traj.grid, {N});
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) acc.add(traj.times[i], traj.snapshots[i]);
  return acc.value(0);
}

// ---------------------------------------------------------------------------
// Growth

ProbeReport sobolev_growth_experiment(const SpectralField& u0, const GrowthSpec& spec) {
  const auto start = Clock::now();
  if (!(spec.delta >= 0.0)) throw Error(ErrorCode::invalid_argument, "delta must be >= 0");
  const double A = sobolev_norm(u0, 2.0);
  ProbeReport report;
  report.experiment = "growth";
  report.grid = u0.grid().describe();
  report.parameters = {{"a", A},
                       {"delta", spec.delta},
                       {"t_end", spec.t_end},
                       {"dt", spec.dt},
                       {"record_stride", spec.record_stride},
                       {"dealias", spec.dealias ? 1.0 : 0.0}};
  report.columns = {"t", "h1", "h2", "envelope_ratio", "mass", "energy"};
  double sup = 0.0, t_sup = 0.0;
  evolve(u0, {spec.dt, spec.t_end, spec.record_stride, spec.dealias},
         [&](double t, const SpectralField& u) {
           const double h2 = sobolev_norm(u, 2.0);
           const double ratio = h2 / (A + std::pow(1.0 + t, 1.0 + spec.delta));
           if (ratio > sup) {
             sup = ratio;
             t_sup = t;
           }
           report.rows.push_back({t, sobolev_norm(u, 1.0), h2, ratio, mass(u), energy(u)});
         });
  std::vector<double> x, y;
  for (const auto& row : report.rows) {
    if (row[0] < 1.0) continue;
    x.push_back(std::log(1.0 + row[0]));
    y.push_back(std::log(row[2]));
  }
  if (x.size() >= 2) report.fits.push_back({"h2_growth", fit_line(x, y)});
  report.summary = {{"a", A},
                    {"sup_ratio", sup},
                    {"t_sup", t_sup},
                    {"sup_early", t_sup <= 0.1 * spec.t_end ? 1.0 : 0.0}};
  report.wall_seconds = seconds_since(start);
  return report;
}

// ---------------------------------------------------------------------------
// Schedule

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw Error(ErrorCode::domain_error, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
Rational operator/(Rational a, Rational b) {
  if (b.num == 0) throw Error(ErrorCode::domain_error, "division by zero");
  return {a.num * b.den, a.den * b.num};
}
bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }
bool operator<=(Rational a, Rational b) { return !(b < a); }

Rational parse_rational(const std::string& text) {
  const auto fail = [&] { return Error(ErrorCode::parse_error, "not a rational number: " + text); };
  if (text.empty()) throw fail();
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      std::size_t used_n = 0, used_d = 0;
      const long long n = std::stoll(text.substr(0, slash), &used_n);
      const std::string den_text = text.substr(slash + 1);
      const long long d = std::stoll(den_text, &used_d);
      if (used_n != slash || used_d != den_text.size()) throw fail();
      return {n, d};
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
      std::size_t used = 0;
      const long long n = std::stoll(text, &used);
      if (used != text.size()) throw fail();
      return {n, 1};
    }
    const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t decimals = text.size() - dot - 1;
    if (decimals == 0 || decimals > 15) throw fail();
    std::size_t used = 0;
    const long long n = std::stoll(digits, &used);
    if (used != digits.size()) throw fail();
    long long d = 1;
    for (std::size_t i = 0; i < decimals; ++i) d *= 10;
    return {n, d};
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw fail();
  }
}

Schedule imethod_schedule(const Rational& s, double N) {
  if (s <= Rational(1, 2) || Rational(1) < s)
    throw Error(ErrorCode::domain_error, "schedule requires 1/2 < s <= 1, got " + s.str());
  if (!(N >= 1.0)) throw Error(ErrorCode::invalid_argument, "N must be >= 1");
  Schedule out;
  out.s = s;
  out.N = N;
  const Rational one(1), two(2), five(5), six(6);
  out.lambda_exponent = two * (one - s) / (two * s - one);
  out.t_exponent = (six * s - five) / (two * s - one);
  out.sub_threshold = s <= Rational(5, 6);
  if (!out.sub_threshold) out.energy_exponent = two * (one - s) / (six * s - five);
  out.lambda = std::pow(N, out.lambda_exponent.value());
  out.T = std::pow(N, out.t_exponent.value());
  return out;
}

Schedule imethod_schedule_strict(const Rational& s, double N) {
  Schedule out = imethod_schedule(s, N);
  if (out.sub_threshold)
    throw Error(ErrorCode::sub_threshold,
                "s = " + s.str() + " is at or below the 5/6 threshold; the T exponent is not positive");
  return out;
}

// ---------------------------------------------------------------------------
// Scaling

double scaling_check(const SpectralField& u0, double lambda, double t, double dt, bool dealias) {
  auto final_state = [&](const SpectralField& start_field, double t_end, double step) {
    std::optional<SpectralField> last;
    const long n = step_count({step, t_end, 1, dealias});
    evolve(start_field, {step, t_end, static_cast<int>(n), dealias},
           [&](double, const SpectralField& u) { last = u; });
    return *last;
  };
  const SpectralField a = rescale(final_state(u0, t, dt), lambda);
  const SpectralField b = final_state(rescale(u0, lambda), lambda * lambda * t, lambda * lambda * dt);
  const SpectralField diff(b.grid(), a.coeffs() - b.coeffs());
  return l2_norm(diff) / l2_norm(u0);
}

}  // namespace wgnls
