#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aniso/cli/commands.hpp"
#include "aniso/cli/config.hpp"
#include "aniso/errors.hpp"

namespace {

using namespace aniso::cli;

struct Overrides {
  std::string config_path;
  std::optional<std::string> hurst;
  std::optional<std::string> theta;
  std::optional<std::string> seed;
  std::optional<std::string> out;
  std::optional<std::string> tol;
  std::optional<std::string> paths;
};

RunConfig resolve(const Overrides& o) {
  RunConfig config = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.hurst) apply_setting(config, "model.hurst", *o.hurst);
  if (o.theta) apply_setting(config, "model.theta", *o.theta);
  if (o.seed) apply_setting(config, "run.seed", *o.seed);
  if (o.out) apply_setting(config, "run.out", *o.out);
  if (o.tol) apply_setting(config, "run.tol", *o.tol);
  if (o.paths) apply_setting(config, "run.paths", *o.paths);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic self-similar Gaussian fields: kernels, certificates, simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  Overrides o;
  app.add_option("--config", o.config_path, "key = value config file with [sections]");
  app.add_option("--hurst", o.hurst, "Hurst pair H1,H2");
  app.add_option("--theta", o.theta, "theta value or 'auto' (0.9 x analytic bound)");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--tol", o.tol, "numerical tolerance");
  app.add_option("--paths", o.paths, "Monte Carlo paths");

  using Command = int (*)(const RunConfig&);
  const std::pair<const char*, std::pair<const char*, Command>> commands[] = {
      {"kernel-eval", {"tabulate F_H, R0 and R_theta on a lag grid", cmd_kernel_eval}},
      {"verify", {"identity, spectral, Fourier and Gram checks", cmd_verify}},
      {"theta-bound", {"analytic admissible |theta|", cmd_theta_bound}},
      {"spectral", {"tables of a(x), b(x) and the main inequality margin", cmd_spectral}},
      {"simulate", {"sample the field on a grid", cmd_simulate}},
      {"test", {"Monte Carlo stationarity and not-fBs tests", cmd_test}},
  };
  Command selected = nullptr;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->callback([&selected, fn = entry.second] { selected = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    const RunConfig config = resolve(o);
    return selected(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const aniso::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailure;
  }
}
