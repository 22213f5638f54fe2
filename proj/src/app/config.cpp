#include <fstream>
#include <set>

#include "mpf/app.hpp"
#include "mpf/error.hpp"
#include "mpf/fingerprint.hpp"

namespace mpf::app {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Paths, data, out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DataSection, label, ordinal, excluded, drop_columns)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AblationSection, roster, baseline, k, min_minority_per_fold,
                                   permutation_iterations, alpha)

namespace {

// Objects whose keys are user-chosen names.
const std::set<std::string> kFreeMaps{"/pipeline/engineering/reference",
                                      "/evaluation/interpretability/clinical_importance"};

void check_keys(const Json& user, const Json& defaults, const std::string& path) {
  if (user.is_object() && defaults.is_object()) {
    if (kFreeMaps.count(path)) return;
    for (const auto& [key, value] : user.items()) {
      const std::string child = path + "/" + key;
      if (!defaults.contains(key)) throw ConfigError("unknown config key '" + child + "'");
      check_keys(value, defaults.at(key), child);
    }
  } else if (user.is_array() && defaults.is_array() && !defaults.empty() &&
             defaults.front().is_object()) {
    for (std::size_t i = 0; i < user.size(); ++i) {
      check_keys(user[i], defaults.front(), path + "/" + std::to_string(i));
    }
  }
}

// Free maps are replaced wholesale rather than extended.
void merge(Json& base, const Json& patch, const std::string& path) {
  if (!base.is_object() || !patch.is_object() || kFreeMaps.count(path)) {
    base = patch;
    return;
  }
  for (const auto& [key, value] : patch.items()) merge(base[key], value, path + "/" + key);
}

}  // namespace

void RunConfig::apply_seed() {
  cohort.seed = seed;
  pipeline.fusion.seed = seed;
  evaluation.seed = seed;
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["schema"] = c.schema;
  j["seed"] = c.seed;
  j["paths"] = c.paths;
  j["data"] = c.data;
  j["cohort"] = c.cohort;
  j["cohort"].erase("seed");
  j["pipeline"] = c.pipeline;
  j["pipeline"]["fusion"].erase("seed");
  j["evaluation"] = c.evaluation;
  j["evaluation"].erase("seed");
  j["ablation"] = c.ablation;
  return j;
}

RunConfig parse_config(const Json& user) {
  if (!user.is_object()) throw ConfigError("config must be a JSON object");
  const Json defaults = config_to_json(RunConfig{});
  check_keys(user, defaults, "");
  if (user.contains("schema") && user.at("schema") != kConfigSchema) {
    throw ConfigError(std::string("config schema must be ") + kConfigSchema);
  }
  Json merged = defaults;
  merge(merged, user, "");

  RunConfig c;
  try {
    c.schema = merged.at("schema").get<std::string>();
    c.seed = merged.at("seed").get<std::uint64_t>();
    c.paths = merged.at("paths").get<Paths>();
    c.data = merged.at("data").get<DataSection>();
    merged["cohort"]["seed"] = c.seed;
    c.cohort = merged.at("cohort").get<CohortSpec>();
    merged["pipeline"]["fusion"]["seed"] = c.seed;
    c.pipeline = merged.at("pipeline").get<PipelineConfig>();
    merged["evaluation"]["seed"] = c.seed;
    c.evaluation = merged.at("evaluation").get<EvaluationSettings>();
    c.ablation = merged.at("ablation").get<AblationSection>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }
  c.apply_seed();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void validate(const RunConfig& c) {
  if (c.schema != kConfigSchema) throw ConfigError("unsupported config schema " + c.schema);
  if (c.paths.out.empty()) throw ConfigError("paths.out must not be empty");
  if (c.data.label.empty()) throw ConfigError("data.label must not be empty");
  if (c.paths.data.empty()) c.cohort.validate();
  c.pipeline.fusion.validate();
  c.pipeline.engineering.validate();
  c.pipeline.constraints.validate();
  c.evaluation.validate();
  ablation_settings(c).validate();
}

// The output directory is excluded: where results land does not change them.
std::string config_fingerprint(const RunConfig& c) {
  Json j = config_to_json(c);
  j["paths"].erase("out");
  return fingerprint(j.dump());
}

AblationSettings ablation_settings(const RunConfig& c) {
  AblationSettings s;
  s.k = c.ablation.k;
  s.min_minority_per_fold = c.ablation.min_minority_per_fold;
  s.roster.clear();
  for (const auto& name : c.ablation.roster) {
    s.roster.push_back(rule_from_name(name, c.pipeline.fusion.alpha_nb, c.pipeline.fusion.alpha_dt));
  }
  rule_from_name(c.ablation.baseline);
  s.baseline = c.ablation.baseline;
  s.permutation_iterations = c.ablation.permutation_iterations;
  s.alpha = c.ablation.alpha;
  s.interpretability = c.evaluation.interpretability;
  s.seed = c.seed;
  return s;
}

Dataset load_data(const RunConfig& c) {
  Dataset ds;
  if (c.paths.data.empty()) {
    ds = generate_cohort(c.cohort);
  } else {
    const auto header = read_csv_header(c.paths.data);
    const auto schema = FeatureSchema::infer(header, c.data.label, c.data.ordinal, c.data.excluded);
    ds = load_csv(c.paths.data, schema);
  }
  if (!c.data.drop_columns.empty()) ds = drop_leakage_columns(ds, c.data.drop_columns);
  return ds;
}

}  // namespace mpf::app
