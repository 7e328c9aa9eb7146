#include "acker/acker.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acker/classifier.hpp"
#include "acker/data_io.hpp"
#include "acker/error.hpp"
#include "acker/evaluation.hpp"
#include "acker/knn.hpp"
#include "acker/parallel.hpp"
#include "acker/report.hpp"

struct acker_dataset_t {
  acker::Dataset data;
};

struct acker_points_t {
  std::vector<acker::GeoPoint> points;
};

struct acker_model_t {
  explicit acker_model_t(acker::Dataset ds) : train(std::move(ds)) {}

  acker::TrainingSet train;
  bool adaptive = false;
  uint32_t fixed_k = 1;
  acker::AckerConfig config;   // adaptive only
  acker::FeatureIndexSet fidx; // adaptive only
};

struct acker_result_t {
  std::vector<acker::PredictionRow> rows;
  acker::LabelDictionary labels;
};

struct acker_report_t {
  acker::SweepReport report;
};

namespace {

thread_local std::string g_last_error;

acker_status_t fail(acker_status_t code, std::string message) {
  g_last_error = std::move(message);
  return code;
}

// Exceptions never cross the C boundary; they map onto status codes here.
template <typename Fn>
acker_status_t guarded(Fn&& fn) {
  try {
    fn();
    return ACKER_OK;
  } catch (const acker::ConfigError& e) {
    return fail(ACKER_ERROR_CONFIG, e.what());
  } catch (const acker::DataError& e) {
    return fail(ACKER_ERROR_DATA, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ACKER_ERROR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(ACKER_ERROR_RUNTIME, e.what());
  } catch (...) {
    return fail(ACKER_ERROR_RUNTIME, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

acker::CsvSchema to_schema(const acker_csv_schema_t* s) {
  acker::CsvSchema schema;
  if (s == nullptr) return schema;
  if (s->lon_column != nullptr) schema.lon_column = s->lon_column;
  if (s->lat_column != nullptr) schema.lat_column = s->lat_column;
  if (s->label_column != nullptr) schema.label_column = s->label_column;
  if (s->delimiter != 0) schema.delimiter = s->delimiter;
  schema.has_header = s->has_header != 0;
  return schema;
}

std::string require(const char* value, const char* what) {
  if (value == nullptr || *value == '\0') {
    throw acker::ConfigError(std::string("missing required setting: ") + what);
  }
  return value;
}

acker::FeatureKind parse_feature(const char* name) {
  const std::string text = require(name, "feature");
  const auto kind = acker::feature_from_name(text);
  if (!kind) throw acker::ConfigError("unknown feature '" + text + "'");
  return *kind;
}

unsigned effective_threads(uint32_t threads) { return threads == 0 ? 1u : threads; }

}  // namespace

extern "C" {

const char* acker_version(void) { return "0.1.0"; }

const char* acker_last_error(void) { return g_last_error.c_str(); }

void acker_string_free(char* s) { std::free(s); }

/* ------------------------------------------------------------ datasets */

acker_status_t acker_dataset_load_csv(const char* path,
                                      const acker_csv_schema_t* schema,
                                      acker_dataset_t** out) {
  if (out == nullptr) return fail(ACKER_ERROR_CONFIG, "out pointer is NULL");
  *out = nullptr;
  return guarded([&] {
    auto data = acker::load_csv(require(path, "path"), to_schema(schema));
    *out = new acker_dataset_t{std::move(data)};
  });
}

acker_status_t acker_dataset_generate(const char* generator, uint64_t count,
                                      uint32_t classes, double noise_rate,
                                      uint64_t seed, acker_dataset_t** out) {
  if (out == nullptr) return fail(ACKER_ERROR_CONFIG, "out pointer is NULL");
  *out = nullptr;
  return guarded([&] {
    const std::string name = require(generator, "generator");
    const auto kind = acker::generator_from_name(name);
    if (!kind) throw acker::ConfigError("unknown generator '" + name + "'");
    acker::SyntheticSpec spec;
    spec.kind = *kind;
    spec.count = count;
    spec.classes = classes;
    spec.noise_rate = noise_rate;
    spec.seed = seed;
    *out = new acker_dataset_t{acker::generate(spec)};
  });
}

acker_status_t acker_dataset_write_csv(const acker_dataset_t* dataset,
                                       const char* path) {
  if (dataset == nullptr) return fail(ACKER_ERROR_CONFIG, "dataset is NULL");
  return guarded([&] { acker::write_csv(dataset->data, require(path, "path")); });
}

size_t acker_dataset_size(const acker_dataset_t* dataset) {
  return dataset == nullptr ? 0 : dataset->data.size();
}

size_t acker_dataset_classes(const acker_dataset_t* dataset) {
  return dataset == nullptr ? 0 : dataset->data.labels().size();
}

void acker_dataset_free(acker_dataset_t* dataset) { delete dataset; }

acker_status_t acker_points_load_csv(const char* path,
                                     const acker_csv_schema_t* schema,
                                     acker_points_t** out) {
  if (out == nullptr) return fail(ACKER_ERROR_CONFIG, "out pointer is NULL");
  *out = nullptr;
  return guarded([&] {
    auto pts = acker::load_points_csv(require(path, "path"), to_schema(schema));
    *out = new acker_points_t{std::move(pts)};
  });
}

size_t acker_points_size(const acker_points_t* points) {
  return points == nullptr ? 0 : points->points.size();
}

void acker_points_free(acker_points_t* points) { delete points; }

/* -------------------------------------------------------------- models */

acker_status_t acker_model_knn(const acker_dataset_t* train, uint32_t k,
                               acker_model_t** out) {
  if (out == nullptr) return fail(ACKER_ERROR_CONFIG, "out pointer is NULL");
  *out = nullptr;
  if (train == nullptr) return fail(ACKER_ERROR_CONFIG, "training dataset is NULL");
  return guarded([&] {
    if (k < 1 || k > train->data.size()) {
      throw acker::ConfigError("k=" + std::to_string(k) +
                               " must lie in [1, " +
                               std::to_string(train->data.size()) + "]");
    }
    auto model = std::make_unique<acker_model_t>(train->data);
    model->adaptive = false;
    model->fixed_k = k;
    *out = model.release();
  });
}

acker_status_t acker_model_acker(const acker_dataset_t* train,
                                 const char* feature, const char* range,
                                 uint32_t l, acker_model_t** out) {
  if (out == nullptr) return fail(ACKER_ERROR_CONFIG, "out pointer is NULL");
  *out = nullptr;
  if (train == nullptr) return fail(ACKER_ERROR_CONFIG, "training dataset is NULL");
  return guarded([&] {
    acker::AckerConfig config;
    config.kind = parse_feature(feature);
    config.range = acker::KRange::parse(require(range, "range"));
    config.l = l;
    if (l < 1 || l > train->data.size()) {
      throw acker::ConfigError("l=" + std::to_string(l) +
                               " must lie in [1, " +
                               std::to_string(train->data.size()) + "]");
    }
    auto model = std::make_unique<acker_model_t>(train->data);
    model->adaptive = true;
    model->config = config;
    model->fidx =
        acker::FeatureIndexSet::build(model->train, config.kind, config.range);
    *out = model.release();
  });
}

void acker_model_free(acker_model_t* model) { delete model; }

/* ------------------------------------------------------ classification */

acker_status_t acker_model_classify(const acker_model_t* model,
                                    const acker_points_t* queries,
                                    uint32_t threads, acker_result_t** out) {
  if (out == nullptr) return fail(ACKER_ERROR_CONFIG, "out pointer is NULL");
  *out = nullptr;
  if (model == nullptr) return fail(ACKER_ERROR_CONFIG, "model is NULL");
  if (queries == nullptr) return fail(ACKER_ERROR_CONFIG, "queries is NULL");
  return guarded([&] {
    const auto& pts = queries->points;
    auto result = std::make_unique<acker_result_t>();
    result->labels = model->train.dataset().labels();
    result->rows.resize(pts.size());
    if (model->adaptive) {
      const auto preds = acker::acker_classify_batch(
          model->train, model->fidx, pts, model->config,
          effective_threads(threads));
      for (size_t i = 0; i < preds.size(); ++i) {
        result->rows[i] = {preds[i].predicted, preds[i].chosen_k,
                           preds[i].expected_accuracy};
      }
    } else {
      auto* rows = result->rows.data();
      acker::parallel_for(pts.size(), effective_threads(threads),
                          [&, rows](size_t begin, size_t end) {
                            for (size_t i = begin; i < end; ++i) {
                              const auto vote = acker::knn_classify(
                                  model->train, pts[i], model->fixed_k);
                              rows[i] = {vote.predicted, std::nullopt,
                                         std::nullopt};
                            }
                          });
    }
    *out = result.release();
  });
}

size_t acker_result_size(const acker_result_t* result) {
  return result == nullptr ? 0 : result->rows.size();
}

acker_status_t acker_result_row(const acker_result_t* result, size_t index,
                                uint32_t* label, uint32_t* chosen_k,
                                double* expected_accuracy) {
  if (result == nullptr) return fail(ACKER_ERROR_CONFIG, "result is NULL");
  if (index >= result->rows.size()) {
    return fail(ACKER_ERROR_CONFIG,
                "row " + std::to_string(index) + " out of range [0, " +
                    std::to_string(result->rows.size()) + ")");
  }
  const auto& row = result->rows[index];
  if (label != nullptr) *label = row.predicted;
  if (chosen_k != nullptr) *chosen_k = row.chosen_k.value_or(0);
  if (expected_accuracy != nullptr)
    *expected_accuracy = row.score.value_or(-1.0);
  return ACKER_OK;
}

const char* acker_result_label_name(const acker_result_t* result,
                                    uint32_t label) {
  if (result == nullptr || label >= result->labels.size()) {
    g_last_error = "label id out of range";
    return nullptr;
  }
  return result->labels.name(label).c_str();
}

acker_status_t acker_result_to_csv(const acker_result_t* result,
                                   char** out_csv) {
  if (out_csv == nullptr) return fail(ACKER_ERROR_CONFIG, "out pointer is NULL");
  *out_csv = nullptr;
  if (result == nullptr) return fail(ACKER_ERROR_CONFIG, "result is NULL");
  return guarded([&] {
    *out_csv = dup_string(
        acker::render_predictions_csv(result->rows, result->labels));
  });
}

void acker_result_free(acker_result_t* result) { delete result; }

/* --------------------------------------------------------- experiments */

acker_status_t acker_run_experiment(const acker_dataset_t* data,
                                    const acker_experiment_t* config,
                                    acker_report_t** out) {
  if (out == nullptr) return fail(ACKER_ERROR_CONFIG, "out pointer is NULL");
  *out = nullptr;
  if (data == nullptr) return fail(ACKER_ERROR_CONFIG, "dataset is NULL");
  if (config == nullptr) return fail(ACKER_ERROR_CONFIG, "experiment config is NULL");
  return guarded([&] {
    const std::string experiment = require(config->experiment, "experiment");
    const int folds = config->folds == 0 ? 10 : static_cast<int>(config->folds);
    const unsigned threads = effective_threads(config->threads);
    const uint64_t seed = config->seed;
    acker::SweepReport report;

    if (experiment == "evaluate") {
      const std::string method = require(config->method, "method");
      acker::Method m;
      if (method == "standard_knn") {
        if (config->k == 0) {
          throw acker::ConfigError("standard_knn evaluation requires k >= 1");
        }
        m = acker::FixedK{config->k};
      } else if (method == "acker") {
        acker::AckerConfig ac;
        ac.kind = parse_feature(config->feature);
        ac.range = acker::KRange::parse(require(config->range, "range"));
        ac.l = config->l == 0 ? 1 : config->l;
        m = ac;
      } else {
        throw acker::ConfigError("unknown method '" + method + "'");
      }
      report = acker::evaluate_report(data->data, m, folds, seed, threads);
    } else if (experiment == "sweep_fixed_k") {
      const auto ks = acker::KRange::parse(require(config->values, "values"));
      report = acker::sweep_fixed_k(data->data, ks.values(), folds, seed, threads);
    } else if (experiment == "sweep_l") {
      const auto kind = parse_feature(config->feature);
      const auto range = acker::KRange::parse(require(config->range, "range"));
      const auto ls = acker::KRange::parse(require(config->values, "values"));
      report = acker::sweep_l(data->data, kind, range, ls.values(), folds, seed,
                              threads);
    } else if (experiment == "sweep_kmax") {
      const auto kind = parse_feature(config->feature);
      const auto kmaxes = acker::KRange::parse(require(config->values, "values"));
      const uint32_t l = config->l == 0 ? 1 : config->l;
      report = acker::sweep_kmax(data->data, kind, l, kmaxes.values(), folds,
                                 seed, threads);
    } else if (experiment == "roc") {
      const auto kind = parse_feature(config->feature);
      // A nonzero k pins the candidate range to that single value; the
      // adaptive step then only scores, it cannot change k.
      const auto range = config->k != 0
                             ? acker::KRange({config->k})
                             : acker::KRange::parse(require(config->range, "range"));
      const auto ls = acker::KRange::parse(require(config->values, "values"));
      report = acker::sweep_l(data->data, kind, range, ls.values(), folds, seed,
                              threads, acker::ExperimentKind::Roc);
    } else {
      throw acker::ConfigError("unknown experiment '" + experiment + "'");
    }
    *out = new acker_report_t{std::move(report)};
  });
}

acker_status_t acker_report_render(const acker_report_t* report,
                                   const char* format, char** out_text) {
  if (out_text == nullptr) return fail(ACKER_ERROR_CONFIG, "out pointer is NULL");
  *out_text = nullptr;
  if (report == nullptr) return fail(ACKER_ERROR_CONFIG, "report is NULL");
  return guarded([&] {
    const std::string fmt = require(format, "format");
    if (fmt == "csv") {
      *out_text = dup_string(acker::render_report_csv(report->report));
    } else if (fmt == "text") {
      *out_text = dup_string(acker::render_report_text(report->report));
    } else {
      throw acker::ConfigError("unknown report format '" + fmt + "'");
    }
  });
}

void acker_report_free(acker_report_t* report) { delete report; }

} /* extern "C" */
