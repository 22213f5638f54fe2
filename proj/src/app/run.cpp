#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "mpf/app.hpp"
#include "mpf/error.hpp"

namespace mpf::app {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Reliability-weighted fusion of Naive Bayes and decision-tree classifiers", "mpf"};
  cli.require_subcommand(1);
  cli.fallthrough();

  Options options;
  std::string config_path, out_path;
  std::uint64_t seed = 0;
  cli.add_option("--config", config_path, "Run configuration (JSON)");
  cli.add_option("--out", out_path, "Output directory, overrides paths.out");
  cli.add_option("--seed", seed, "Master seed, overrides the config");
  cli.add_flag("--force", options.force, "Overwrite generated data");

  using Command = std::function<void(const Context&, std::ostream&)>;
  Command command;
  auto add = [&](const char* name, const char* help, Command fn) {
    cli.add_subcommand(name, help)->callback([&command, fn] { command = fn; });
  };
  add("generate", "Write a synthetic cohort CSV", cmd_generate);
  add("train", "Fit the fusion model on the configured data", cmd_train);
  add("evaluate", "Nested cross-validation report", cmd_evaluate);
  add("ablate", "Fusion-rule ablation on shared folds", cmd_ablate);
  add("report", "Summary text and plot-ready CSVs from saved reports", cmd_report);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << cli.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  if (!config_path.empty()) options.config = config_path;
  if (!out_path.empty()) options.out = out_path;
  if (cli.count("--seed") > 0) options.seed = seed;

  try {
    const Context ctx = resolve(options);
    command(ctx, out);
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParseError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const SchemaError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const EmptyInputError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const FitError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const ContractError& e) {
    err << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

}  // namespace mpf::app
