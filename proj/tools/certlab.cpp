// certlab: command-line front end for the experiments.
//
// Exit status: 0 when every assertion of the command held, 1 when one failed,
// 2 for configuration errors (bad config, missing files, budgets over caps).

#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "certlearn/errors.hpp"
#include "certlearn/harness.hpp"

namespace {

using certlearn::CommandResult;
using certlearn::ExperimentConfig;

const std::map<std::string, std::function<CommandResult(const ExperimentConfig&)>> kCommands{
    {"enumerate", certlearn::cmd_enumerate}, {"learn", certlearn::cmd_learn},
    {"reduce", certlearn::cmd_reduce},       {"tradeoff", certlearn::cmd_tradeoff},
    {"vcdim", certlearn::cmd_vcdim},         {"codes-test", certlearn::cmd_codes_test}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certificate-learning laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--seed", seed, "master seed for randomized components");
  app.add_option("--out", out_dir, "output directory");
  for (const auto& [name, fn] : kCommands) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto name = app.get_subcommands().front()->get_name();
  try {
    auto config = config_path.empty() ? certlearn::Config{} : certlearn::Config::load(config_path);
    if (seed) config.set("seed", std::to_string(*seed));
    if (!out_dir.empty()) config.set("out", out_dir);
    const auto cfg = ExperimentConfig::from_config(config);
    const auto result = kCommands.at(name)(cfg);
    for (const auto& line : result.report) std::cout << line << "\n";
    for (const auto& f : result.failures) std::cout << "FAIL " << f << "\n";
    std::cout << (result.ok() ? "status ok" : "status failed") << std::endl;
    return result.ok() ? 0 : 1;
  } catch (const std::invalid_argument& e) {  // ConfigError, ShapeError
    std::cerr << "certlab " << name << ": configuration error: " << e.what() << "\n";
    return 2;
  } catch (const certlearn::ParseError& e) {
    std::cerr << "certlab " << name << ": input error: " << e.what() << "\n";
    return 2;
  } catch (const certlearn::BudgetExceeded& e) {
    std::cerr << "certlab " << name << ": budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "certlab " << name << ": " << e.what() << "\n";
    return 1;
  }
}
