#include "wgnls/config.hpp"

#include "wgnls/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace wgnls {

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::conserve: return "conserve";
    case Experiment::bilinear: return "bilinear";
    case Experiment::strichartz: return "strichartz";
    case Experiment::almost_i: return "almost_i";
    case Experiment::almost_d: return "almost_d";
    case Experiment::growth: return "growth";
    case Experiment::schedule: return "schedule";
    case Experiment::scaling: return "scaling";
  }
  return "unknown";
}

std::string_view to_string(Recipe r) noexcept {
  switch (r) {
    case Recipe::smooth: return "smooth";
    case Recipe::decaying_tail: return "decaying_tail";
    case Recipe::annulus: return "annulus";
    case Recipe::constant: return "constant";
    case Recipe::plane_wave: return "plane_wave";
    case Recipe::gaussian_bump: return "gaussian_bump";
  }
  return "unknown";
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

struct LineError {
  std::string message;
};

double to_double(const std::string& text) {
  std::string body = text;
  double factor = 1.0;
  if (body.size() >= 2 && body.substr(body.size() - 2) == "pi") {
    body = trim(body.substr(0, body.size() - 2));
    factor = std::numbers::pi;
    if (body.empty()) return factor;
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc() || ptr != body.data() + body.size() || !std::isfinite(v))
    throw LineError{"not a number: '" + text + "'"};
  return v * factor;
}

long long to_integer(const std::string& text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw LineError{"not an integer: '" + text + "'"};
  return v;
}

bool to_bool(const std::string& text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw LineError{"not a boolean: '" + text + "'"};
}

std::vector<double> to_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double(item));
  return out;
}

std::vector<int> to_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split_list(text)) out.push_back(static_cast<int>(to_integer(item)));
  return out;
}

Direction to_direction(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw LineError{"direction must be kind:length, got '" + text + "'"};
  const std::string kind = trim(text.substr(0, colon));
  const double length = to_double(trim(text.substr(colon + 1)));
  if (kind == "torus") return Direction::torus(length);
  if (kind == "euclidean") return Direction::euclidean(length);
  throw LineError{"unknown direction kind '" + kind + "'"};
}

template <typename E>
E to_enum(const std::string& text, std::initializer_list<E> values) {
  for (E v : values)
    if (to_string(v) == text) return v;
  throw LineError{"unknown value '" + text + "'"};
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"run.experiment",
       [](RunConfig& c, const std::string& v) {
         c.experiment = to_enum(v, {Experiment::conserve, Experiment::bilinear,
                                    Experiment::strichartz, Experiment::almost_i,
                                    Experiment::almost_d, Experiment::growth,
                                    Experiment::schedule, Experiment::scaling});
       }},
      {"run.seed",
       [](RunConfig& c, const std::string& v) {
         std::uint64_t seed = 0;
         const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
         if (ec != std::errc() || ptr != v.data() + v.size())
           throw LineError{"seed must be a non-negative 64-bit integer"};
         c.seed = seed;
       }},
      {"run.output", [](RunConfig& c, const std::string& v) { c.output = v; }},
      {"run.snapshots", [](RunConfig& c, const std::string& v) { c.snapshots = to_bool(v); }},
      {"grid.d",
       [](RunConfig& c, const std::string& v) {
         const auto d = to_integer(v);
         if (d < 2 || d > 4) throw LineError{"d must be 2, 3 or 4"};
         c.d = static_cast<int>(d);
       }},
      {"grid.directions",
       [](RunConfig& c, const std::string& v) {
         c.directions.clear();
         for (const auto& item : split_list(v)) c.directions.push_back(to_direction(item));
       }},
      {"grid.modes",
       [](RunConfig& c, const std::string& v) {
         c.modes = to_int_list(v);
       }},
      {"physics.s", [](RunConfig& c, const std::string& v) {
         try {
           c.s = parse_rational(v);
         } catch (const Error&) {
           throw LineError{"s must be a rational such as 11/12 or 0.85"};
         }
       }},
      {"physics.n", [](RunConfig& c, const std::string& v) { c.n = to_double(v); }},
      {"physics.n_list", [](RunConfig& c, const std::string& v) { c.n_list = to_double_list(v); }},
      {"physics.n2", [](RunConfig& c, const std::string& v) { c.n2 = to_double(v); }},
      {"physics.lambda", [](RunConfig& c, const std::string& v) { c.lambda = to_double(v); }},
      {"physics.delta", [](RunConfig& c, const std::string& v) { c.delta = to_double(v); }},
      {"physics.a", [](RunConfig& c, const std::string& v) { c.a = to_double(v); }},
      {"numerics.dt", [](RunConfig& c, const std::string& v) { c.dt = to_double(v); }},
      {"numerics.t_end", [](RunConfig& c, const std::string& v) { c.t_end = to_double(v); }},
      {"numerics.stride",
       [](RunConfig& c, const std::string& v) { c.stride = static_cast<int>(to_integer(v)); }},
      {"numerics.dealias", [](RunConfig& c, const std::string& v) { c.dealias = to_bool(v); }},
      {"numerics.boundary_threshold",
       [](RunConfig& c, const std::string& v) { c.boundary_threshold = to_double(v); }},
      {"numerics.trials",
       [](RunConfig& c, const std::string& v) { c.trials = static_cast<int>(to_integer(v)); }},
      {"numerics.probe_time", [](RunConfig& c, const std::string& v) { c.probe_time = to_double(v); }},
      {"initial.recipe",
       [](RunConfig& c, const std::string& v) {
         c.recipe = to_enum(v, {Recipe::smooth, Recipe::decaying_tail, Recipe::annulus,
                                Recipe::constant, Recipe::plane_wave, Recipe::gaussian_bump});
       }},
      {"initial.width", [](RunConfig& c, const std::string& v) { c.width = to_double(v); }},
      {"initial.amplitude", [](RunConfig& c, const std::string& v) { c.amplitude = to_double(v); }},
      {"initial.mass", [](RunConfig& c, const std::string& v) { c.mass = to_double(v); }},
      {"initial.k_max", [](RunConfig& c, const std::string& v) { c.k_max = to_double(v); }},
      {"initial.sigma", [](RunConfig& c, const std::string& v) { c.sigma = to_double(v); }},
      {"initial.shell", [](RunConfig& c, const std::string& v) { c.shell = to_double(v); }},
      {"initial.mode", [](RunConfig& c, const std::string& v) { c.mode = to_int_list(v); }},
  };
  return table;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::validation_error, what); }

void require(bool ok, const std::string& what) {
  if (!ok) invalid(what);
}

double axis_max(const RunConfig& c, std::size_t a) {
  return 2.0 * std::numbers::pi * (c.modes[a] / 2 - 1) / c.directions[a].period;
}

double lattice_max(const RunConfig& c) {
  double out = axis_max(c, 0);
  for (std::size_t a = 1; a < c.modes.size(); ++a) out = std::min(out, axis_max(c, a));
  return out;
}

double max_norm_squared(const RunConfig& c) {
  double out = 0.0;
  for (std::size_t a = 0; a < c.modes.size(); ++a) out += axis_max(c, a) * axis_max(c, a);
  return out;
}

void under_resolved(const std::string& what) { throw Error(ErrorCode::under_resolved, what); }

void validate_grid(const RunConfig& c) {
  require(!c.directions.empty(), "grid.directions is required");
  require(static_cast<int>(c.directions.size()) == c.d, "grid.directions must have d entries");
  require(c.modes.size() == c.directions.size(),
          "grid.modes and grid.directions must both have d entries");
  require(c.modes.size() >= 2 && c.modes.size() <= 4, "d must be 2, 3 or 4");
  for (std::size_t a = 0; a < c.modes.size(); ++a) {
    require(c.directions[a].period > 0.0, "NonPositivePeriod: direction " + std::to_string(a));
    require(c.modes[a] > 0 && c.modes[a] % 2 == 0,
            "OddModeCount: direction " + std::to_string(a) + " has " +
                std::to_string(c.modes[a]) + " modes");
  }
}

void validate_dynamics(const RunConfig& c) {
  require(c.modes.size() == 3, "evolution requires d = 3");
  for (int m : c.modes) require(m >= 8, "evolution requires at least 8 modes per direction");
  require(c.stride >= 1, "numerics.stride must be >= 1");
  require(c.boundary_threshold > 0.0, "numerics.boundary_threshold must be positive");
  const double dt = effective_time_step(c);
  require(dt > 0.0 && c.t_end > 0.0, "numerics.dt and numerics.t_end must be positive");
  const double steps = c.t_end / dt;
  const double rounded = std::round(steps);
  require(rounded >= 1.0 && std::abs(steps - rounded) <= 1e-9 * std::max(1.0, rounded),
          "numerics.t_end must be an integer multiple of numerics.dt");
  require(static_cast<long long>(rounded) % c.stride == 0,
          "numerics.stride must divide the number of steps");
}

void validate_recipe(const RunConfig& c) {
  switch (c.recipe) {
    case Recipe::smooth:
      require(c.width > 0.0 && c.mass > 0.0, "initial.width and initial.mass must be positive");
      break;
    case Recipe::decaying_tail:
      require(c.k_max > 0.0 && c.mass > 0.0, "initial.k_max and initial.mass must be positive");
      break;
    case Recipe::annulus:
      require(c.shell > 0.0, "initial.shell must be positive");
      require(c.shell / 2.0 < std::sqrt(max_norm_squared(c)), "EmptyShell: shell is above the lattice");
      break;
    case Recipe::constant: break;
    case Recipe::plane_wave:
      require(c.mode.size() == c.modes.size(), "initial.mode needs one signed index per direction");
      for (std::size_t a = 0; a < c.mode.size(); ++a)
        require(c.mode[a] > -c.modes[a] / 2 && c.mode[a] < c.modes[a] / 2,
                "initial.mode is outside the retained lattice");
      break;
    case Recipe::gaussian_bump: require(c.sigma > 0.0, "initial.sigma must be positive"); break;
  }
}

void validate_s(const RunConfig& c, bool strict) {
  require(c.s.has_value(), "physics.s is required");
  require(Rational(1, 2) < *c.s && *c.s <= Rational(1),
          "DomainError: s must satisfy 1/2 < s <= 1, got " + c.s->str());
  if (strict)
    require(Rational(5, 6) < *c.s, "SubThreshold: s = " + c.s->str() +
                                       " is at or below the 5/6 threshold");
}

void validate_n_list(const RunConfig& c, std::size_t min_size) {
  require(c.n_list.size() >= min_size,
          "physics.n_list needs at least " + std::to_string(min_size) + " entries");
  for (double N : c.n_list) require(N >= 1.0, "physics.n_list entries must be >= 1");
}

}  // namespace

GridSpec RunConfig::grid() const { return GridSpec(directions, modes); }

double effective_time_step(const RunConfig& c) {
  if (c.dt > 0.0) return c.dt;
  switch (c.experiment) {
    case Experiment::almost_i:
    case Experiment::almost_d: return DriftExperimentSpec{}.dt;
    case Experiment::conserve:
    case Experiment::growth:
    case Experiment::scaling: {
      if (c.modes.empty() || !(c.t_end > 0.0)) return 0.0;
      // The rule 0.1 / max|xi|^2, shortened so that it divides t_end.
      const double steps = std::ceil(c.t_end * max_norm_squared(c) / 0.1 - 1e-9);
      return c.t_end / steps;
    }
    default: return 0.0;
  }
}

void validate(const RunConfig& c) {
  if (c.needs_grid()) {
    validate_grid(c);
    validate_recipe(c);
  }
  switch (c.experiment) {
    case Experiment::conserve:
      validate_dynamics(c);
      if (c.s) validate_s(c, false);
      require(!c.s || c.n, "physics.s needs physics.n for the modified energy column");
      if (c.n) require(*c.n >= 1.0, "physics.n must be >= 1");
      break;
    case Experiment::bilinear: {
      validate_n_list(c, 1);
      require(c.n2 >= 1.0, "physics.n2 must be >= 1");
      for (double N1 : c.n_list) require(c.n2 <= N1, "physics.n2 must not exceed any N1");
      require(c.probe_time > 0.0 && c.probe_time <= 1.0, "numerics.probe_time must lie in (0, 1]");
      require(c.trials >= 1, "numerics.trials must be >= 1");
      require(c.dt >= 0.0, "numerics.dt must be >= 0");
      const double top = *std::max_element(c.n_list.begin(), c.n_list.end());
      if (lattice_max(c) < 2.0 * top)
        under_resolved("lattice max frequency " + std::to_string(lattice_max(c)) +
                       " cannot resolve 2 N1 = " + std::to_string(2.0 * top));
      break;
    }
    case Experiment::strichartz: {
      validate_n_list(c, 1);
      require(c.probe_time > 0.0, "numerics.probe_time must be positive");
      require(c.trials >= 1, "numerics.trials must be >= 1");
      require(c.dt >= 0.0, "numerics.dt must be >= 0");
      const double top = *std::max_element(c.n_list.begin(), c.n_list.end());
      if (lattice_max(c) < 2.0 * top)
        under_resolved("lattice max frequency " + std::to_string(lattice_max(c)) +
                       " cannot resolve 2 N = " + std::to_string(2.0 * top));
      break;
    }
    case Experiment::almost_i:
    case Experiment::almost_d: {
      validate_dynamics(c);
      if (c.experiment == Experiment::almost_i) validate_s(c, false);
      validate_n_list(c, 2);
      const double top = *std::max_element(c.n_list.begin(), c.n_list.end());
      if (top > lattice_max(c) / 4.0)
        under_resolved("largest N = " + std::to_string(top) +
                       " exceeds a quarter of the lattice max " + std::to_string(lattice_max(c)));
      break;
    }
    case Experiment::growth:
      validate_dynamics(c);
      require(c.delta >= 0.0, "physics.delta must be >= 0");
      if (c.a) require(*c.a > 0.0, "physics.a must be positive");
      break;
    case Experiment::schedule:
      validate_s(c, true);
      require(c.n || !c.n_list.empty(), "physics.n or physics.n_list is required");
      if (c.n) require(*c.n >= 1.0, "physics.n must be >= 1");
      for (double N : c.n_list) require(N >= 1.0, "physics.n_list entries must be >= 1");
      break;
    case Experiment::scaling:
      validate_dynamics(c);
      require(c.lambda > 0.0, "physics.lambda must be positive");
      break;
  }
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  static const std::vector<std::string> sections{"run", "grid", "physics", "numerics", "initial"};
  RunConfig cfg;
  std::string section;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(sections.begin(), sections.end(), section) == sections.end())
        fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    if (section.empty()) fail("key outside of any section");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) fail("unknown key " + key);
    if (value.empty()) fail("empty value for " + key);
    if (seen.count(key)) fail("duplicate key " + key + " (first on line " + std::to_string(seen[key]) + ")");
    seen[key] = line_no;
    try {
      it->second(cfg, value);
    } catch (const LineError& e) {
      fail(key + ": " + e.message);
    }
    cfg.echo.emplace_back(key, value);
  }
  if (!seen.count("run.experiment")) throw Error(ErrorCode::parse_error, "run.experiment is required");
  if (cfg.output.is_relative()) cfg.output = base_dir / cfg.output;
  // A single mode count applies to every direction.
  if (cfg.modes.size() == 1) cfg.modes.assign(static_cast<std::size_t>(cfg.d), cfg.modes.front());
  validate(cfg);
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace wgnls
