#include <iostream>
#include <stdexcept>

#include "commands.hpp"
#include "riglab/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rig-lab: sparse random intersection graphs, simulation and theory"};
  app.require_subcommand(1);
  auto commands = riglab::cli::register_commands(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : riglab::cli::kExitUsage;
  }
  try {
    return commands.run();
  } catch (const riglab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return riglab::cli::kExitUsage;
}
