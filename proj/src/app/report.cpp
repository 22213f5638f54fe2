#include <charconv>
#include <sstream>

#include "mpf/app.hpp"

namespace mpf::app {

namespace {

// Shortest round-trip form for CSV cells.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : "NA"; }

std::string fx(double v, int digits = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::string fx(const std::optional<double>& v, int digits = 4) {
  return v ? fx(*v, digits) : "undefined";
}

std::string interval(const Interval& i) {
  return "[" + fx(i.lo) + ", " + fx(i.hi) + "] (" + i.method + ")";
}

}  // namespace

std::string render_summary(const EvaluationReport& r, const AblationReport* ablation) {
  std::ostringstream os;
  os << "Evaluation summary\n";
  os << "config fingerprint: " << r.config_fingerprint << "\n";
  os << "seed: " << r.seed << "\n";
  os << "data: " << r.provenance << ", n = " << r.n << " (" << r.n1 << " anomalies, " << r.n0
     << " normals)\n";
  os << "design: " << r.outer_k << "-fold outer CV x " << r.repeats << " repeat(s), " << r.inner_k
     << "-fold inner CV\n\n";

  os << "grade: " << to_string(r.grade) << "\n";
  os << "composite score: " << fx(r.composite.value) << "\n";
  os << "sensitivity: " << fx(r.sensitivity.mean) << " +/- " << fx(r.sensitivity.sd) << "\n";
  os << "specificity: " << fx(r.specificity.mean) << " +/- " << fx(r.specificity.sd) << "\n";
  os << "interpretability: " << fx(r.interpretability.mean) << " (rule "
     << fx(r.interpretability_components.rule) << ", prob "
     << fx(r.interpretability_components.prob) << ", feature "
     << fx(r.interpretability_components.feature) << ", clinical "
     << fx(r.interpretability_components.clinical) << ")\n";
  os << "pooled counts: TP " << r.pooled.tp << ", FN " << r.pooled.fn << ", TN " << r.pooled.tn
     << ", FP " << r.pooled.fp << "\n";
  os << "pooled sensitivity: " << fx(r.pooled_rates.sens) << ", exact "
     << interval(r.sensitivity_exact) << ", " << interval(r.sensitivity_bca.interval) << "\n";
  os << "pooled specificity: " << fx(r.pooled_rates.spec) << ", exact "
     << interval(r.specificity_exact) << ", " << interval(r.specificity_bca.interval) << "\n\n";

  os << "per-fold results:\n";
  for (const auto& f : r.folds) {
    os << "  repeat " << f.repeat << " fold " << f.fold << ": tau " << fx(f.tau, 2)
       << ", sensitivity " << fx(f.rates.sens) << ", specificity " << fx(f.rates.spec)
       << ", interpretability " << fx(f.interpretability.total) << "\n";
  }

  os << "\ncomparisons:\n";
  for (const auto& c : r.comparisons) {
    os << "  " << c.name << " vs " << c.baseline << ": delta sensitivity "
       << fx(c.delta_sensitivity) << ", McNemar p " << fx(c.mcnemar.p_value) << ", permutation p "
       << fx(c.permutation.p_value) << ", Holm " << (c.holm_rejected ? "reject" : "retain")
       << " at " << fx(c.holm_threshold) << ", Hedges g " << fx(c.hedges_d) << "\n";
  }

  os << "\nweights: closed form (" << fx(r.weights.closed_form[0]) << ", "
     << fx(r.weights.closed_form[1]) << "), grid (" << fx(r.weights.grid[0], 2) << ", "
     << fx(r.weights.grid[1], 2) << ")\n  " << r.weights.note << "\n";
  os << "power: n_eff " << fx(r.power.result.n_eff, 2) << ", power " << fx(r.power.result.power)
     << " at |delta| " << fx(r.power.delta, 2) << "\n  " << r.power.note << "\n";
  os << "sample size: n = " << r.sample_size.result.n << "\n  " << r.sample_size.note << "\n";
  os << "generalization bound: " << fx(r.bound.terms.total) << " (empirical "
     << fx(r.bound.terms.empirical) << ", minority " << fx(r.bound.terms.minority)
     << ", imbalance " << fx(r.bound.terms.imbalance) << ", complexity "
     << fx(r.bound.terms.constraint) << ")\n";

  os << "\nnoise robustness:\n";
  for (const auto& p : r.robustness) {
    os << "  level " << fx(p.level, 2) << ": sensitivity " << fx(p.sensitivity) << "\n";
  }

  if (ablation) {
    os << "\nablation (tau " << fx(ablation->tau, 2) << ", baseline " << ablation->baseline
       << "):\n";
    for (const auto& row : ablation->rows) {
      os << "  " << row.rule.name << ": sensitivity " << fx(row.sensitivity.mean) << " +/- "
         << fx(row.sensitivity.sd) << ", specificity " << fx(row.specificity)
         << ", interpretability " << fx(row.interpretability) << "\n";
    }
    for (const auto& c : ablation->comparisons) {
      os << "  " << c.name << " vs " << c.baseline << ": McNemar p " << fx(c.mcnemar.p_value)
         << ", permutation p " << fx(c.permutation.p_value) << ", Holm "
         << (c.holm_rejected ? "reject" : "retain") << "\n";
    }
  }

  if (!r.notes.empty()) {
    os << "\nnotes:\n";
    for (const auto& n : r.notes) os << "  - " << n << "\n";
  }
  return os.str();
}

std::string threshold_csv(const EvaluationReport& r) {
  std::string out = "tau,sensitivity,specificity\n";
  for (const auto& p : r.threshold_curve) {
    out += num(p.tau) + "," + num(p.sensitivity) + "," + num(p.specificity) + "\n";
  }
  return out;
}

std::string robustness_csv(const EvaluationReport& r) {
  std::string out = "noise_level,sensitivity\n";
  for (const auto& p : r.robustness) out += num(p.level) + "," + num(p.sensitivity) + "\n";
  return out;
}

std::string folds_csv(const EvaluationReport& r) {
  std::string out =
      "repeat,fold,tau,alpha_nb,alpha_dt,tp,fp,tn,fn,sensitivity,specificity,interpretability,"
      "composite\n";
  for (const auto& f : r.folds) {
    out += std::to_string(f.repeat) + "," + std::to_string(f.fold) + "," + num(f.tau) + "," +
           num(f.alpha[0]) + "," + num(f.alpha[1]) + "," + std::to_string(f.counts.tp) + "," +
           std::to_string(f.counts.fp) + "," + std::to_string(f.counts.tn) + "," +
           std::to_string(f.counts.fn) + "," + num(f.rates.sens) + "," + num(f.rates.spec) + "," +
           num(f.interpretability.total) + "," + num(f.composite) + "\n";
  }
  return out;
}

std::string ablation_csv(const AblationReport& r) {
  std::string out =
      "config,alpha_nb,alpha_dt,hard_vote,sensitivity_mean,sensitivity_sd,specificity,"
      "interpretability,mcnemar_p,permutation_p,holm_threshold,holm_rejected,hedges_g\n";
  for (const auto& row : r.rows) {
    out += row.rule.name + "," + num(row.rule.alpha[0]) + "," + num(row.rule.alpha[1]) + "," +
           (row.rule.hard_vote ? "1" : "0") + "," + num(row.sensitivity.mean) + "," +
           num(row.sensitivity.sd) + "," + num(row.specificity) + "," +
           num(row.interpretability);
    const Comparison* cmp = nullptr;
    for (const auto& c : r.comparisons) {
      if (c.name == row.rule.name) cmp = &c;
    }
    if (cmp) {
      out += "," + num(cmp->mcnemar.p_value) + "," + num(cmp->permutation.p_value) + "," +
             num(cmp->holm_threshold) + "," + (cmp->holm_rejected ? "1" : "0") + "," +
             num(cmp->hedges_d);
    } else {
      out += ",NA,NA,NA,NA,NA";
    }
    out += "\n";
  }
  return out;
}

}  // namespace mpf::app
