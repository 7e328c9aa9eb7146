// Command-line front end. Deliberately a thin shell over the C API: every
// byte this tool emits comes from a library rendering call, so CLI output
// and library output cannot drift apart.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include <CLI11.hpp>
#include <json.hpp>

#include "acker/acker.h"

namespace {

struct DatasetFree {
  void operator()(acker_dataset_t* p) const { acker_dataset_free(p); }
};
struct PointsFree {
  void operator()(acker_points_t* p) const { acker_points_free(p); }
};
struct ModelFree {
  void operator()(acker_model_t* p) const { acker_model_free(p); }
};
struct ResultFree {
  void operator()(acker_result_t* p) const { acker_result_free(p); }
};
struct ReportFree {
  void operator()(acker_report_t* p) const { acker_report_free(p); }
};

using DatasetPtr = std::unique_ptr<acker_dataset_t, DatasetFree>;
using PointsPtr = std::unique_ptr<acker_points_t, PointsFree>;
using ModelPtr = std::unique_ptr<acker_model_t, ModelFree>;
using ResultPtr = std::unique_ptr<acker_result_t, ResultFree>;
using ReportPtr = std::unique_ptr<acker_report_t, ReportFree>;

std::string take_string(char* s) {
  std::string out = s == nullptr ? "" : s;
  acker_string_free(s);
  return out;
}

int fail_config(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

int fail_status(acker_status_t status) {
  std::cerr << "error: " << acker_last_error() << "\n";
  return static_cast<int>(status);
}

uint64_t fnv1a(std::string_view text) {
  uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Atomic-enough output: write a sibling temp file, then rename over the
// final path, so a failed run never leaves a partial file behind.
int write_output(const std::string& out_path, std::string_view content) {
  if (out_path.empty()) {
    std::cout << content;
    return 0;
  }
  const std::string tmp = out_path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      std::cerr << "error: cannot open '" << tmp << "' for writing\n";
      return 3;
    }
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      std::cerr << "error: failed while writing '" << tmp << "'\n";
      return 3;
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, out_path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    std::cerr << "error: cannot move '" << tmp << "' to '" << out_path << "'\n";
    return 3;
  }
  return 0;
}

struct DataOpts {
  std::string path;       // --data / --train
  std::string synthetic;  // generator name
  uint64_t count = 1000;
  uint32_t classes = 2;
  double noise = 0.0;
};

struct SchemaOpts {
  std::string lon_col = "lon";
  std::string lat_col = "lat";
  std::string label_col = "label";
  std::string delimiter = ",";
  bool no_header = false;
};

struct MethodOpts {
  std::string method;  // standard_knn | acker
  uint32_t k = 1;
  std::string feature = "max_dist";
  std::string range;
  uint32_t l = 1;
};

struct Opts {
  DataOpts data;
  SchemaOpts schema;
  MethodOpts method;
  std::string values;
  uint32_t fixed_k = 0;
  std::string queries;
  uint32_t folds = 10;
  uint64_t seed = 0;
  uint32_t threads = 1;
  std::string out;
  std::string format = "csv";
};

acker_csv_schema_t to_c_schema(const SchemaOpts& s) {
  acker_csv_schema_t schema{};
  schema.lon_column = s.lon_col.c_str();
  schema.lat_column = s.lat_col.c_str();
  schema.label_column = s.label_col.c_str();
  schema.delimiter = s.delimiter[0];
  schema.has_header = s.no_header ? 0 : 1;
  return schema;
}

int make_dataset(const DataOpts& d, const SchemaOpts& s, uint64_t seed,
                 const char* path_flag, DatasetPtr& out) {
  if (d.path.empty() == d.synthetic.empty()) {
    return fail_config(std::string("exactly one of ") + path_flag +
                       " and --synthetic is required");
  }
  acker_dataset_t* raw = nullptr;
  acker_status_t st;
  if (!d.path.empty()) {
    const acker_csv_schema_t schema = to_c_schema(s);
    st = acker_dataset_load_csv(d.path.c_str(), &schema, &raw);
  } else {
    st = acker_dataset_generate(d.synthetic.c_str(), d.count, d.classes,
                                d.noise, seed, &raw);
  }
  if (st != ACKER_OK) return fail_status(st);
  out.reset(raw);
  return 0;
}

// Canonical description of everything that determines the result (thread
// count deliberately excluded: it never changes output bytes).
std::string canon_config(const std::string& cmd, const DataOpts& d,
                         const SchemaOpts& s, const acker_experiment_t& ex,
                         const std::string& format) {
  const auto text = [](const char* p) { return p == nullptr ? "" : p; };
  std::ostringstream o;
  o << "cmd=" << cmd;
  if (!d.path.empty()) {
    o << ";data=file:" << d.path << ";schema=" << s.lon_col << ","
      << s.lat_col << "," << s.label_col << "," << s.delimiter << ","
      << (s.no_header ? "nohdr" : "hdr");
  } else {
    o << ";data=synthetic:" << d.synthetic << ",count=" << d.count
      << ",classes=" << d.classes << ",noise=" << d.noise;
  }
  o << ";experiment=" << text(ex.experiment) << ";method=" << text(ex.method)
    << ";k=" << ex.k << ";feature=" << text(ex.feature)
    << ";range=" << text(ex.range) << ";values=" << text(ex.values)
    << ";l=" << ex.l << ";folds=" << ex.folds << ";seed=" << ex.seed
    << ";format=" << format;
  return o.str();
}

int write_meta(const std::string& path, const std::string& command,
               uint64_t seed, const std::string& canon, double wall_ms) {
  nlohmann::json j;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = canon;
  j["config_hash"] = hex64(fnv1a(canon));
  j["wall_time_ms"] = wall_ms;
  return write_output(path, j.dump(2) + "\n");
}

int run_experiment_cmd(const std::string& cli_name, const char* api_name,
                       const Opts& o, uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  DatasetPtr data;
  if (const int rc = make_dataset(o.data, o.schema, seed, "--data", data)) {
    return rc;
  }

  acker_experiment_t ex{};
  ex.experiment = api_name;
  ex.folds = o.folds;
  ex.seed = seed;
  ex.threads = o.threads;
  ex.l = o.method.l;
  const std::string_view name = api_name;
  if (name == "evaluate") {
    ex.method = o.method.method.c_str();
    ex.k = o.method.k;
  }
  if (name == "roc") ex.k = o.fixed_k;
  if (!o.method.feature.empty()) ex.feature = o.method.feature.c_str();
  if (!o.method.range.empty()) ex.range = o.method.range.c_str();
  if (!o.values.empty()) ex.values = o.values.c_str();

  acker_report_t* raw = nullptr;
  acker_status_t st = acker_run_experiment(data.get(), &ex, &raw);
  if (st != ACKER_OK) return fail_status(st);
  const ReportPtr report(raw);

  char* text = nullptr;
  st = acker_report_render(report.get(), o.format.c_str(), &text);
  if (st != ACKER_OK) return fail_status(st);
  const std::string content = take_string(text);

  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  if (const int rc = write_output(o.out, content)) return rc;
  if (!o.out.empty()) {
    const std::string canon = canon_config(cli_name, o.data, o.schema, ex, o.format);
    return write_meta(o.out + ".meta.json", cli_name, seed, canon, wall_ms);
  }
  return 0;
}

int cmd_classify(const Opts& o, uint64_t seed) {
  DatasetPtr train;
  if (const int rc = make_dataset(o.data, o.schema, seed, "--train", train)) {
    return rc;
  }

  acker_points_t* praw = nullptr;
  const acker_csv_schema_t schema = to_c_schema(o.schema);
  acker_status_t st = acker_points_load_csv(o.queries.c_str(), &schema, &praw);
  if (st != ACKER_OK) return fail_status(st);
  const PointsPtr queries(praw);

  acker_model_t* mraw = nullptr;
  if (o.method.method == "standard_knn") {
    st = acker_model_knn(train.get(), o.method.k, &mraw);
  } else {
    st = acker_model_acker(train.get(), o.method.feature.c_str(),
                           o.method.range.c_str(), o.method.l, &mraw);
  }
  if (st != ACKER_OK) return fail_status(st);
  const ModelPtr model(mraw);

  acker_result_t* rraw = nullptr;
  st = acker_model_classify(model.get(), queries.get(), o.threads, &rraw);
  if (st != ACKER_OK) return fail_status(st);
  const ResultPtr result(rraw);

  char* text = nullptr;
  st = acker_result_to_csv(result.get(), &text);
  if (st != ACKER_OK) return fail_status(st);
  return write_output(o.out, take_string(text));
}

int cmd_generate(const Opts& o, uint64_t seed) {
  if (o.data.synthetic.empty()) return fail_config("--synthetic is required");
  acker_dataset_t* raw = nullptr;
  const acker_status_t st =
      acker_dataset_generate(o.data.synthetic.c_str(), o.data.count,
                             o.data.classes, o.data.noise, seed, &raw);
  if (st != ACKER_OK) return fail_status(st);
  const DatasetPtr data(raw);

  const std::string tmp = o.out + ".tmp";
  if (const acker_status_t ws = acker_dataset_write_csv(data.get(), tmp.c_str());
      ws != ACKER_OK) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    return fail_status(ws);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, o.out, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    std::cerr << "error: cannot move '" << tmp << "' to '" << o.out << "'\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Geo-spatial k-nearest-neighbor classification with per-point "
      "adaptive k"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(acker_version()));

  Opts o;

  const auto add_data = [&o](CLI::App* cmd, const char* path_flag,
                             const char* what) {
    cmd->add_option(path_flag, o.data.path, what);
    cmd->add_option("--synthetic", o.data.synthetic,
                    "synthetic generator: separable_halves | "
                    "noisy_dense_plus_sparse_checkerboard | "
                    "uniform_random_labels");
    cmd->add_option("--count", o.data.count, "synthetic point count")
        ->capture_default_str();
    cmd->add_option("--classes", o.data.classes, "synthetic class count")
        ->capture_default_str();
    cmd->add_option("--noise", o.data.noise,
                    "synthetic label-noise rate in [0, 1)")
        ->capture_default_str();
  };

  const auto add_schema = [&o](CLI::App* cmd) {
    cmd->add_option("--lon-col", o.schema.lon_col,
                    "longitude column: header name or 0-based position")
        ->capture_default_str();
    cmd->add_option("--lat-col", o.schema.lat_col,
                    "latitude column: header name or 0-based position")
        ->capture_default_str();
    cmd->add_option("--label-col", o.schema.label_col,
                    "label column: header name or 0-based position")
        ->capture_default_str();
    cmd->add_option("--delimiter", o.schema.delimiter, "field delimiter")
        ->capture_default_str();
    cmd->add_flag("--no-header", o.schema.no_header,
                  "the file has no header row; columns are positions");
  };

  const auto add_run = [&o](CLI::App* cmd, bool with_folds) {
    if (with_folds) {
      cmd->add_option("--folds", o.folds, "cross-validation folds")
          ->capture_default_str();
    }
    cmd->add_option("--seed", o.seed,
                    "random seed; omitted = drawn once and logged");
    cmd->add_option("--threads", o.threads, "worker threads (results do not "
                                            "depend on this)")
        ->capture_default_str();
    cmd->add_option("--out", o.out, "output path (default: stdout)");
    if (with_folds) {
      cmd->add_option("--format", o.format, "report format")
          ->check(CLI::IsMember({"csv", "text"}))
          ->capture_default_str();
    }
  };

  const auto add_feature = [&o](CLI::App* cmd) {
    cmd->add_option("--feature", o.method.feature,
                    "k-environment feature: avg_dist | max_dist | "
                    "max_avg_comb | lat_lon")
        ->check(CLI::IsMember(
            {"avg_dist", "max_dist", "max_avg_comb", "lat_lon"}))
        ->capture_default_str();
  };

  const auto add_method = [&o, &add_feature](CLI::App* cmd) {
    cmd->add_option("--method", o.method.method, "standard_knn | acker")
        ->check(CLI::IsMember({"standard_knn", "acker"}))
        ->required();
    cmd->add_option("--k", o.method.k, "fixed k for standard_knn")
        ->capture_default_str();
    add_feature(cmd);
    cmd->add_option("--range", o.method.range,
                    "candidate k values, '1..50' or '1,5,25'");
    cmd->add_option("--l", o.method.l,
                    "similar training points per expected-accuracy estimate")
        ->capture_default_str();
  };

  CLI::App* classify =
      app.add_subcommand("classify", "Classify query points against a "
                                     "training set");
  add_data(classify, "--train", "training CSV of labeled points");
  add_schema(classify);
  classify->add_option("--queries", o.queries, "CSV of query points")
      ->required();
  add_method(classify);
  add_run(classify, /*with_folds=*/false);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Cross-validate one configuration");
  add_data(evaluate, "--data", "CSV of labeled points");
  add_schema(evaluate);
  add_method(evaluate);
  add_run(evaluate, /*with_folds=*/true);

  CLI::App* sweep_k = app.add_subcommand(
      "sweep-fixed-k", "Cross-validate standard kNN over a list of k");
  add_data(sweep_k, "--data", "CSV of labeled points");
  add_schema(sweep_k);
  sweep_k->add_option("--values", o.values, "k values, '1..50' or '1,5,25'")
      ->required();
  add_run(sweep_k, /*with_folds=*/true);

  CLI::App* sweep_l = app.add_subcommand(
      "sweep-l", "Cross-validate the adaptive classifier over a list of l");
  add_data(sweep_l, "--data", "CSV of labeled points");
  add_schema(sweep_l);
  add_feature(sweep_l);
  sweep_l->add_option("--range", o.method.range,
                      "candidate k values, '1..50' or '1,5,25'")
      ->required();
  sweep_l->add_option("--values", o.values, "l values, '10,50,100'")
      ->required();
  add_run(sweep_l, /*with_folds=*/true);

  CLI::App* sweep_kmax = app.add_subcommand(
      "sweep-kmax", "Cross-validate the adaptive classifier over candidate "
                    "ranges 1..k_max");
  add_data(sweep_kmax, "--data", "CSV of labeled points");
  add_schema(sweep_kmax);
  add_feature(sweep_kmax);
  sweep_kmax->add_option("--l", o.method.l,
                         "similar training points per estimate")
      ->capture_default_str();
  sweep_kmax->add_option("--values", o.values, "k_max values, '10,50,200'")
      ->required();
  add_run(sweep_kmax, /*with_folds=*/true);

  CLI::App* roc = app.add_subcommand(
      "roc", "Score quality of the expected-accuracy estimate (Pearson r "
             "and ROC AUC per l)");
  add_data(roc, "--data", "CSV of labeled points");
  add_schema(roc);
  add_feature(roc);
  roc->add_option("--range", o.method.range,
                  "candidate k values the adaptive step searches");
  roc->add_option("--fixed-k", o.fixed_k,
                  "pin the candidate range to exactly {k}");
  roc->add_option("--values", o.values, "l values, '10,50,100'")->required();
  add_run(roc, /*with_folds=*/true);

  CLI::App* generate =
      app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  generate->add_option("--synthetic", o.data.synthetic,
                       "generator: separable_halves | "
                       "noisy_dense_plus_sparse_checkerboard | "
                       "uniform_random_labels")
      ->required();
  generate->add_option("--count", o.data.count, "point count")
      ->capture_default_str();
  generate->add_option("--classes", o.data.classes, "class count")
      ->capture_default_str();
  generate->add_option("--noise", o.data.noise, "label-noise rate in [0, 1)")
      ->capture_default_str();
  generate->add_option("--seed", o.seed,
                       "random seed; omitted = drawn once and logged");
  generate->add_option("--out", o.out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* active = app.get_subcommands().front();
  if (active->count_all() > 0 && o.schema.delimiter.size() != 1) {
    return fail_config("--delimiter must be a single character");
  }

  uint64_t seed = o.seed;
  if (active->count("--seed") == 0) {
    std::random_device rd;
    seed = (static_cast<uint64_t>(rd()) << 32) ^ rd();
  }
  std::cerr << "[acker] seed: " << seed << "\n";

  if (active == classify) return cmd_classify(o, seed);
  if (active == evaluate) return run_experiment_cmd("evaluate", "evaluate", o, seed);
  if (active == sweep_k) {
    return run_experiment_cmd("sweep-fixed-k", "sweep_fixed_k", o, seed);
  }
  if (active == sweep_l) return run_experiment_cmd("sweep-l", "sweep_l", o, seed);
  if (active == sweep_kmax) {
    return run_experiment_cmd("sweep-kmax", "sweep_kmax", o, seed);
  }
  if (active == roc) {
    if (o.fixed_k == 0 && o.method.range.empty()) {
      return fail_config("roc requires --range or --fixed-k");
    }
    if (o.fixed_k != 0 && !o.method.range.empty()) {
      return fail_config("use either --fixed-k or --range, not both");
    }
    return run_experiment_cmd("roc", "roc", o, seed);
  }
  if (active == generate) return cmd_generate(o, seed);
  return fail_config("unknown subcommand");
}
