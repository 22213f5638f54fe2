#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mpf/dataset.hpp"
#include "mpf/fusion.hpp"
#include "mpf/serialize.hpp"
#include "mpf/synth.hpp"
#include "mpf/validation.hpp"

namespace mpf::app {

enum ExitCode : int { kOk = 0, kConfigError = 2, kDataError = 3, kRuntimeError = 4 };

inline constexpr const char* kConfigSchema = "mpf.config/1";

struct Paths {
  std::string data;  // empty: generate the synthetic cohort in memory
  std::string out = "out";
};

struct DataSection {
  std::string label = "label";
  std::vector<std::string> ordinal;
  std::vector<std::string> excluded;
  std::vector<std::string> drop_columns;
};

struct AblationSection {
  std::vector<std::string> roster{"mpf", "nb_only", "equal", "dt_heavy", "dt_only", "hard_vote"};
  std::string baseline = "nb_only";
  std::size_t k = 5;
  std::size_t min_minority_per_fold = 5;
  std::size_t permutation_iterations = 10000;
  double alpha = 0.05;
};

// One file drives every command. The master seed feeds every randomized step.
struct RunConfig {
  std::string schema = kConfigSchema;
  std::uint64_t seed = 20240917;
  Paths paths;
  DataSection data;
  CohortSpec cohort;
  PipelineConfig pipeline;
  EvaluationSettings evaluation;
  AblationSection ablation;

  // Pushes the master seed into every section.
  void apply_seed();
};

// Missing keys take defaults; unknown keys and bad values raise ConfigError.
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::filesystem::path& path);
Json config_to_json(const RunConfig& config);
void validate(const RunConfig& config);
std::string config_fingerprint(const RunConfig& config);

Dataset load_data(const RunConfig& config);
AblationSettings ablation_settings(const RunConfig& config);

struct Options {
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  bool force = false;
};

// Resolved config plus output directory, validated before any side effect.
struct Context {
  RunConfig config;
  std::filesystem::path out;
  std::string fingerprint;
  bool force = false;
};

Context resolve(const Options& options);

void cmd_generate(const Context& ctx, std::ostream& log);
void cmd_train(const Context& ctx, std::ostream& log);
void cmd_evaluate(const Context& ctx, std::ostream& log);
void cmd_ablate(const Context& ctx, std::ostream& log);
void cmd_report(const Context& ctx, std::ostream& log);

std::string render_summary(const EvaluationReport& report, const AblationReport* ablation);
std::string threshold_csv(const EvaluationReport& report);
std::string robustness_csv(const EvaluationReport& report);
std::string folds_csv(const EvaluationReport& report);
std::string ablation_csv(const AblationReport& report);

// Parses argv, runs one subcommand and maps failures to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mpf::app
