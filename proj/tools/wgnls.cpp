// wgnls: run, validate, schedule, version.

#include "wgnls/config.hpp"
#include "wgnls/run.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int report_failure(const wgnls::Error& e) {
  std::cerr << "wgnls: " << e.what() << '\n';
  return wgnls::exit_code_for(e.code());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral cubic NLS simulator and estimate probes"};
  app.require_subcommand(1);

  std::string run_path;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
  run_cmd->add_option("config", run_path, "Config file")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a config file");
  validate_cmd->add_option("config", validate_path, "Config file")->required();

  std::string s_text;
  double n = 1.0;
  auto* schedule_cmd = app.add_subcommand("schedule", "Print the scaling schedule exponents");
  schedule_cmd->add_option("--s", s_text, "Regularity, e.g. 11/12 or 0.9")->required();
  schedule_cmd->add_option("--n", n, "Frequency cutoff N")->required()->check(CLI::PositiveNumber);

  auto* version_cmd = app.add_subcommand("version", "Print the artifact version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wgnls::exit_validation;
  }

  try {
    if (*run_cmd) {
      const wgnls::RunConfig cfg = wgnls::parse_config(run_path);
      const wgnls::RunManifest m = wgnls::run(cfg);
      std::cout << "wrote " << m.outputs.size() << " files and manifest.json to "
                << cfg.output.string() << '\n';
    } else if (*validate_cmd) {
      const wgnls::RunConfig cfg = wgnls::parse_config(validate_path);
      std::cout << "ok: " << wgnls::to_string(cfg.experiment) << '\n';
    } else if (*schedule_cmd) {
      const auto s = wgnls::imethod_schedule(wgnls::parse_rational(s_text), n);
      std::cout << wgnls::format_schedule(s);
      if (s.sub_threshold) {
        std::cerr << "wgnls: SubThreshold: s <= 5/6, the time exponent is not positive\n";
        return wgnls::exit_validation;
      }
    } else if (*version_cmd) {
      std::cout << "wgnls " << WGNLS_VERSION << '\n';
    }
  } catch (const wgnls::Error& e) {
    return report_failure(e);
  } catch (const std::exception& e) {
    std::cerr << "wgnls: " << e.what() << '\n';
    return wgnls::exit_internal;
  }
  return wgnls::exit_ok;
}
