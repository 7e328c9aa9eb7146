#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acker/geo.hpp"

namespace acker {

enum class ExperimentKind { Evaluate, FixedKSweep, LSweep, KmaxSweep, Roc, Correlation };

std::string_view experiment_kind_name(ExperimentKind kind);

struct SweepRow {
  uint32_t value = 0;  // the swept parameter value (k, l or k_max)
  double mean_acc = 0.0;
  double std_acc = 0.0;
  std::optional<double> pearson;
  std::optional<double> auc;
};

struct SweepReport {
  ExperimentKind kind = ExperimentKind::Evaluate;
  std::string param_name;   // "k", "l" or "k_max"
  std::string method_desc;  // e.g. "acker(feature=max_dist, range=1..50)"
  int folds = 0;
  uint64_t seed = 0;
  std::vector<SweepRow> rows;  // parameter values strictly increasing
};

// Shortest round-trip decimal representation (locale independent);
// identical inputs always render identical bytes.
std::string format_double(double v);

// CSV has a fixed five-column header; absent metrics render as empty
// cells. The text format carries the run header plus the same table.
std::string render_report_csv(const SweepReport& report);
std::string render_report_text(const SweepReport& report);

struct PredictionRow {
  ClassId predicted = 0;
  std::optional<uint32_t> chosen_k;  // empty for standard kNN
  std::optional<double> score;       // empty for standard kNN
};

// Columns: point_id,predicted,chosen_k,expected_accuracy
std::string render_predictions_csv(std::span<const PredictionRow> rows,
                                   const LabelDictionary& labels);

}  // namespace acker
