#include <doctest.h>

#include <string>
#include <vector>

#include "acker/report.hpp"

using namespace acker;

TEST_CASE("format_double renders shortest round-trip decimals") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "-0");
  CHECK(format_double(1e-17) == "1e-17");
  CHECK(format_double(12345.0) == "12345");
}

TEST_CASE("experiment kind names") {
  CHECK(experiment_kind_name(ExperimentKind::Evaluate) == "evaluate");
  CHECK(experiment_kind_name(ExperimentKind::FixedKSweep) == "fixed_k");
  CHECK(experiment_kind_name(ExperimentKind::LSweep) == "l_sweep");
  CHECK(experiment_kind_name(ExperimentKind::KmaxSweep) == "kmax_sweep");
  CHECK(experiment_kind_name(ExperimentKind::Roc) == "roc");
  CHECK(experiment_kind_name(ExperimentKind::Correlation) == "correlation");
}

namespace {

SweepReport sample_report() {
  SweepReport report;
  report.kind = ExperimentKind::LSweep;
  report.param_name = "l";
  report.method_desc = "acker(feature=max_dist, range=1..50)";
  report.folds = 10;
  report.seed = 42;
  SweepRow first;
  first.value = 5;
  first.mean_acc = 0.85;
  first.std_acc = 0.01;
  first.pearson = 0.4;
  first.auc = 0.7;
  SweepRow second;
  second.value = 10;
  second.mean_acc = 0.5;
  second.std_acc = 0.0;
  report.rows = {first, second};
  return report;
}

}  // namespace

TEST_CASE("report CSV rendering is byte-stable") {
  const std::string want =
      "value,mean_acc,std_acc,pearson_r,roc_auc\n"
      "5,0.85,0.01,0.4,0.7\n"
      "10,0.5,0,,\n";
  CHECK(render_report_csv(sample_report()) == want);
}

TEST_CASE("report text rendering is byte-stable") {
  const std::string want =
      "experiment: l_sweep\n"
      "method: acker(feature=max_dist, range=1..50)\n"
      "folds: 10\n"
      "seed: 42\n"
      "l mean_acc std_acc pearson_r roc_auc\n"
      "5 0.85 0.01 0.4 0.7\n"
      "10 0.5 0 - -\n";
  CHECK(render_report_text(sample_report()) == want);
}

TEST_CASE("prediction CSV quotes labels and leaves kNN cells empty") {
  LabelDictionary labels;
  labels.intern("alpha");
  labels.intern("with,comma");
  labels.intern("say \"hi\"");

  std::vector<PredictionRow> rows(3);
  rows[0].predicted = 0;
  rows[0].chosen_k = 7;
  rows[0].score = 0.92;
  rows[1].predicted = 1;  // standard kNN row: no k, no score
  rows[2].predicted = 2;
  rows[2].chosen_k = 3;
  rows[2].score = 1.0;

  const std::string want =
      "point_id,predicted,chosen_k,expected_accuracy\n"
      "0,alpha,7,0.92\n"
      "1,\"with,comma\",,\n"
      "2,\"say \"\"hi\"\"\",3,1\n";
  CHECK(render_predictions_csv(rows, labels) == want);
}

TEST_CASE("rendering an empty report keeps only the header") {
  SweepReport report;
  report.kind = ExperimentKind::FixedKSweep;
  report.param_name = "k";
  report.method_desc = "knn";
  report.folds = 5;
  report.seed = 1;
  CHECK(render_report_csv(report) == "value,mean_acc,std_acc,pearson_r,roc_auc\n");
}
