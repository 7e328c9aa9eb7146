#include "acker/report.hpp"

#include <charconv>

#include "acker/error.hpp"
#include "csv_util.hpp"

namespace acker {

std::string_view experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Evaluate: return "evaluate";
    case ExperimentKind::FixedKSweep: return "fixed_k";
    case ExperimentKind::LSweep: return "l_sweep";
    case ExperimentKind::KmaxSweep: return "kmax_sweep";
    case ExperimentKind::Roc: return "roc";
    case ExperimentKind::Correlation: return "correlation";
  }
  throw ConfigError("unknown experiment kind");
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell(const std::optional<double>& v, const char* absent) {
  return v ? format_double(*v) : std::string(absent);
}

}  // namespace

std::string render_report_csv(const SweepReport& report) {
  std::string out = "value,mean_acc,std_acc,pearson_r,roc_auc\n";
  for (const SweepRow& row : report.rows) {
    out += std::to_string(row.value);
    out += ',';
    out += format_double(row.mean_acc);
    out += ',';
    out += format_double(row.std_acc);
    out += ',';
    out += cell(row.pearson, "");
    out += ',';
    out += cell(row.auc, "");
    out += '\n';
  }
  return out;
}

std::string render_report_text(const SweepReport& report) {
  std::string out;
  out += "experiment: ";
  out += experiment_kind_name(report.kind);
  out += '\n';
  out += "method: " + report.method_desc + '\n';
  out += "folds: " + std::to_string(report.folds) + '\n';
  out += "seed: " + std::to_string(report.seed) + '\n';
  out += report.param_name + " mean_acc std_acc pearson_r roc_auc\n";
  for (const SweepRow& row : report.rows) {
    out += std::to_string(row.value);
    out += ' ';
    out += format_double(row.mean_acc);
    out += ' ';
    out += format_double(row.std_acc);
    out += ' ';
    out += cell(row.pearson, "-");
    out += ' ';
    out += cell(row.auc, "-");
    out += '\n';
  }
  return out;
}

std::string render_predictions_csv(std::span<const PredictionRow> rows,
                                   const LabelDictionary& labels) {
  std::string out = "point_id,predicted,chosen_k,expected_accuracy\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const PredictionRow& row = rows[i];
    out += std::to_string(i);
    out += ',';
    out += csv::escape(labels.name(row.predicted), ',');
    out += ',';
    if (row.chosen_k) out += std::to_string(*row.chosen_k);
    out += ',';
    if (row.score) out += format_double(*row.score);
    out += '\n';
  }
  return out;
}

}  // namespace acker
