#include <fstream>
#include <ostream>
#include <sstream>

#include "mpf/app.hpp"
#include "mpf/error.hpp"

namespace mpf::app {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("missing input " + path.string(), 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const fs::path& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + " is not valid JSON: " + e.what(), 0);
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

Context resolve(const Options& options) {
  Context ctx;
  ctx.config = options.config ? load_config(*options.config) : parse_config(Json::object());
  if (options.seed) {
    ctx.config.seed = *options.seed;
    ctx.config.apply_seed();
  }
  if (options.out) ctx.config.paths.out = options.out->string();
  validate(ctx.config);
  ctx.out = ctx.config.paths.out;
  ctx.fingerprint = config_fingerprint(ctx.config);
  ctx.force = options.force;
  return ctx;
}

void cmd_generate(const Context& ctx, std::ostream& log) {
  const fs::path csv = ctx.out / "cohort.csv";
  const fs::path meta = ctx.out / "cohort.json";
  if (!ctx.force && (fs::exists(csv) || fs::exists(meta))) {
    throw ConfigError(csv.string() + " already exists; pass --force to overwrite");
  }
  const Dataset ds = generate_cohort(ctx.config.cohort);
  const PlantedTruth truth = planted_truth(ctx.config.cohort);
  ensure_dir(ctx.out);
  std::ostringstream text;
  write_csv(text, ds);
  write_file(csv, text.str());

  Json j;
  j["config_fingerprint"] = ctx.fingerprint;
  j["spec"] = truth.spec;
  j["n0"] = truth.n0;
  j["n1"] = truth.n1;
  j["names"] = truth.names;
  j["mean0"] = truth.mean0;
  j["mean1"] = truth.mean1;
  j["sd"] = truth.sd;
  write_file(meta, dump_json(j));
  log << "wrote " << csv.string() << " (" << ds.n() << " rows, " << ds.count(1)
      << " anomalies)\n";
}

void cmd_train(const Context& ctx, std::ostream& log) {
  const Dataset ds = load_data(ctx.config);
  const FusionModel model = fit_fusion(ds, ctx.config.pipeline);
  ensure_dir(ctx.out);

  Json doc = model_document(model);
  doc["config_fingerprint"] = ctx.fingerprint;
  write_file(ctx.out / "model.json", dump_json(doc));

  Json s;
  s["config_fingerprint"] = ctx.fingerprint;
  s["n"] = ds.n();
  s["n1"] = ds.count(1);
  s["n0"] = ds.count(0);
  s["weight_mode"] = model.config.weight_mode;
  s["alpha"] = model.alpha;
  s["tau"] = model.config.tau;
  s["bandwidth"] = model.reliability.bandwidth;
  s["weight_estimate"] = model.weight_estimate;
  s["model_columns"] = model.model_column_names();
  s["schema_fingerprint"] = model.schema_fingerprint;
  write_file(ctx.out / "train_summary.json", dump_json(s));
  log << "trained on " << ds.n() << " rows; alpha = (" << model.alpha[0] << ", "
      << model.alpha[1] << "), tau = " << model.config.tau << "\n";
}

void cmd_evaluate(const Context& ctx, std::ostream& log) {
  const Dataset ds = load_data(ctx.config);
  EvaluationReport report = evaluate(ds, ctx.config.pipeline, ctx.config.evaluation);
  report.config_fingerprint = ctx.fingerprint;
  ensure_dir(ctx.out);
  write_file(ctx.out / "report.json", dump_json(Json(report)));
  write_file(ctx.out / "folds.csv", folds_csv(report));
  log << "sensitivity " << report.sensitivity.mean << " (sd " << report.sensitivity.sd
      << "), grade " << to_string(report.grade) << "\n";
}

void cmd_ablate(const Context& ctx, std::ostream& log) {
  const Dataset ds = load_data(ctx.config);
  AblationReport report = run_ablation(ds, ctx.config.pipeline, ablation_settings(ctx.config));
  report.config_fingerprint = ctx.fingerprint;
  ensure_dir(ctx.out);
  write_file(ctx.out / "ablation.json", dump_json(Json(report)));
  log << "ablation: " << report.rows.size() << " configurations, " << report.comparisons.size()
      << " comparisons against " << report.baseline << "\n";
}

void cmd_report(const Context& ctx, std::ostream& log) {
  const fs::path report_path = ctx.out / "report.json";
  EvaluationReport report;
  try {
    report = read_json(report_path).get<EvaluationReport>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(report_path.string() + " does not hold an evaluation report: " + e.what(), 0);
  }
  std::optional<AblationReport> ablation;
  const fs::path ablation_path = ctx.out / "ablation.json";
  if (fs::exists(ablation_path)) {
    try {
      ablation = read_json(ablation_path).get<AblationReport>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(ablation_path.string() + " does not hold an ablation report: " + e.what(),
                       0);
    }
  }
  write_file(ctx.out / "summary.txt", render_summary(report, ablation ? &*ablation : nullptr));
  write_file(ctx.out / "threshold_curve.csv", threshold_csv(report));
  write_file(ctx.out / "robustness.csv", robustness_csv(report));
  if (ablation) write_file(ctx.out / "ablation.csv", ablation_csv(*ablation));
  log << "wrote summary.txt for grade " << to_string(report.grade) << "\n";
}

}  // namespace mpf::app
