#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "timelens/commands.hpp"
#include "timelens/config.hpp"
#include "timelens/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum temporal imaging simulator"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_path;
  std::optional<double> tolerance;

  for (const std::string& name : timelens::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_path, "output file (default: output.path or stdout)");
    sub->add_option("--tolerance", tolerance, "oracle-compare relative tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : timelens::kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    timelens::RunConfig cfg = timelens::load_config(config_path);
    if (tolerance) {
      if (!(*tolerance > 0.0)) throw timelens::Error("config", "--tolerance must be positive");
      cfg.tolerance = *tolerance;
    }
    const timelens::RunResult result = timelens::run(command, cfg);
    const std::string target = !out_path.empty() ? out_path : cfg.output_path.value_or("");
    if (target.empty()) {
      std::cout << result.content;
    } else {
      std::ofstream out(target, std::ios::binary);
      if (!out) throw timelens::Error("cli", "cannot write '" + target + "'");
      out << result.content;
      if (!out) throw timelens::Error("cli", "failed writing '" + target + "'");
    }
    std::cerr << result.message << "\n";
    return result.status;
  } catch (const timelens::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.module() == "config" ? timelens::kExitUsage : timelens::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return timelens::kExitError;
  }
}
