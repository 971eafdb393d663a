// Runs one study from a config file and writes CSV tables plus a gnuplot script.
//
//   ucfem_run --experiment convergence --config configs/convergence.ini --out out/convergence
//
// Exit codes: 0 success, 2 bad arguments or config, 3 verification gate failed, 1 anything else.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ucfem/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"stabilized FEM for unique continuation of the Lame system: experiment driver"};
  std::string experiment, config_path, out_dir;
  long long seed = -1;
  int threads = 1;
  std::vector<std::string> overrides;
  app.add_option("--experiment", experiment, "study to run")
      ->required()
      ->check(CLI::IsMember(ucfem::experiment_names()));
  app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (default out/<experiment>)");
  app.add_option("--seed", seed, "noise seed, overrides noise.seed")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", threads, "independent runs solved in parallel")->check(CLI::PositiveNumber);
  app.add_option("--set", overrides, "extra key=value overrides, e.g. --set mesh.max_level=2");
  CLI11_PARSE(app, argc, argv);

  try {
    ucfem::Config config;
    if (!config_path.empty()) config = ucfem::Config::load(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ucfem::ConfigError("--set expects key=value, got '" + kv + "'");
      config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed >= 0) config.set("noise.seed", std::to_string(seed));
    if (out_dir.empty()) out_dir = "out/" + experiment;

    const auto output = ucfem::run_experiment(experiment, config, {threads});
    ucfem::write_output(output, out_dir);
    for (const auto& key : config.unused()) std::fprintf(stderr, "warning: config key '%s' was not used\n", key.c_str());
    for (const auto& f : output.files) std::printf("wrote %s/%s\n", out_dir.c_str(), f.name.c_str());
    for (const auto& [name, value] : output.scalars) std::printf("%s = %.6g\n", name.c_str(), value);
    return 0;
  } catch (const ucfem::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ucfem::GateError& e) {
    std::fprintf(stderr, "verification gate failed: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
