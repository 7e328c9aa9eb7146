#include "acker/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "acker/error.hpp"
#include "acker/parallel.hpp"
#include "acker/rng.hpp"

namespace acker {

// ---------------------------------------------------------------- folds

FoldPlan FoldPlan::make(size_t n, int folds, uint64_t seed) {
  if (folds < 2) throw ConfigError("fold count must be >= 2");
  if (static_cast<size_t>(folds) > n)
    throw ConfigError("fold count " + std::to_string(folds) +
                      " exceeds dataset size " + std::to_string(n));

  std::vector<uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  Rng rng(seed);
  rng.shuffle(perm);

  const size_t base = n / static_cast<size_t>(folds);
  const size_t extra = n % static_cast<size_t>(folds);
  std::vector<int> fold_of(n);
  size_t pos = 0;
  for (int f = 0; f < folds; ++f) {
    const size_t len = base + (static_cast<size_t>(f) < extra ? 1 : 0);
    for (size_t i = 0; i < len; ++i) fold_of[perm[pos++]] = f;
  }

  FoldPlan plan;
  plan.fold_count = folds;
  plan.seed = seed;
  plan.test_rows.resize(folds);
  plan.train_rows.resize(folds);
  for (uint32_t i = 0; i < n; ++i) {
    for (int f = 0; f < folds; ++f) {
      if (fold_of[i] == f)
        plan.test_rows[f].push_back(i);
      else
        plan.train_rows[f].push_back(i);
    }
  }
  return plan;
}

size_t FoldPlan::min_train_size() const {
  size_t m = SIZE_MAX;
  for (const auto& rows : train_rows) m = std::min(m, rows.size());
  return m;
}

// --------------------------------------------------------------- metrics

std::optional<double> pearson_r(std::span<const double> scores,
                                std::span<const uint8_t> correct) {
  if (scores.size() != correct.size())
    throw ConfigError("pearson_r: sequence lengths differ");
  if (scores.size() < 2) throw ConfigError("pearson_r: need at least 2 pairs");

  const double n = static_cast<double>(scores.size());
  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    sx += scores[i];
    sy += correct[i];
  }
  const double mx = sx / n;
  const double my = sy / n;

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const double dx = scores[i] - mx;
    const double dy = correct[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

std::optional<double> roc_auc(std::span<const double> scores,
                              std::span<const uint8_t> correct) {
  if (scores.size() != correct.size())
    throw ConfigError("roc_auc: sequence lengths differ");
  const size_t n = scores.size();
  size_t positives = 0;
  for (uint8_t c : correct) positives += c != 0;
  const size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;

  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return scores[a] < scores[b];
  });

  // Midranks over tie groups; ranks are 1-based. Rank sums are exact in
  // doubles (integers and halves far below 2^53).
  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t t = i; t <= j; ++t)
      if (correct[order[t]] != 0) rank_sum_pos += midrank;
    i = j + 1;
  }

  const double np = static_cast<double>(positives);
  const double nn = static_cast<double>(negatives);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

// ---------------------------------------------------------------- run_cv

namespace {

void summarize(CvResult& result, int folds) {
  double sum = 0.0;
  for (double a : result.fold_acc) sum += a;
  result.mean_acc = sum / static_cast<double>(folds);
  double var = 0.0;
  for (double a : result.fold_acc) {
    const double d = a - result.mean_acc;
    var += d * d;
  }
  result.std_acc = std::sqrt(var / static_cast<double>(folds));
}

std::string describe(const Method& method) {
  if (const auto* fixed = std::get_if<FixedK>(&method))
    return "standard_knn(k=" + std::to_string(fixed->k) + ")";
  const auto& cfg = std::get<AckerConfig>(method);
  return "acker(feature=" + std::string(feature_name(cfg.kind)) +
         ", range=" + cfg.range.to_string() + ", l=" + std::to_string(cfg.l) +
         ")";
}

void check_fixed_k(uint32_t k, size_t min_train) {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (k > min_train)
    throw ConfigError("k=" + std::to_string(k) +
                      " exceeds the smallest fold training size " +
                      std::to_string(min_train));
}

void check_acker(const AckerConfig& cfg, size_t min_train) {
  if (cfg.range.empty()) throw ConfigError("candidate range is empty");
  if (cfg.range.max() + 1 > min_train)
    throw ConfigError("range max " + std::to_string(cfg.range.max()) +
                      " needs fold training sizes of at least " +
                      std::to_string(cfg.range.max() + 1) + ", smallest is " +
                      std::to_string(min_train));
  if (cfg.l > min_train)
    throw ConfigError("l=" + std::to_string(cfg.l) +
                      " exceeds the smallest fold training size " +
                      std::to_string(min_train));
}

}  // namespace

CvResult run_cv(const Dataset& data, const Method& method, int folds,
                uint64_t seed, unsigned threads) {
  const FoldPlan plan = FoldPlan::make(data.size(), folds, seed);
  const size_t min_train = plan.min_train_size();
  if (const auto* fixed = std::get_if<FixedK>(&method))
    check_fixed_k(fixed->k, min_train);
  else
    check_acker(std::get<AckerConfig>(method), min_train);

  CvResult result;
  for (int f = 0; f < folds; ++f) {
    const auto& test = plan.test_rows[f];
    const TrainingSet train(data.subset(plan.train_rows[f]));

    std::vector<EvalRecord> fold_records(test.size());
    if (const auto* fixed = std::get_if<FixedK>(&method)) {
      const uint32_t k = fixed->k;
      parallel_for(test.size(), threads, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
          const GeoPoint& p = data[test[i]].point;
          const VoteResult vote = knn_classify(train, p, k);
          fold_records[i] = {data[test[i]].label, vote.predicted, k,
                             std::nullopt, f};
        }
      });
    } else {
      const auto& cfg = std::get<AckerConfig>(method);
      const FeatureIndexSet fidx =
          FeatureIndexSet::build(train, cfg.kind, cfg.range, threads);
      std::vector<GeoPoint> queries(test.size());
      for (size_t i = 0; i < test.size(); ++i) queries[i] = data[test[i]].point;
      const auto predictions =
          acker_classify_batch(train, fidx, queries, cfg, threads);
      for (size_t i = 0; i < test.size(); ++i) {
        fold_records[i] = {data[test[i]].label, predictions[i].predicted,
                           predictions[i].chosen_k,
                           predictions[i].expected_accuracy, f};
      }
    }

    size_t correct = 0;
    for (const EvalRecord& r : fold_records) correct += r.truth == r.predicted;
    result.fold_acc.push_back(static_cast<double>(correct) /
                              static_cast<double>(test.size()));
    result.records.insert(result.records.end(), fold_records.begin(),
                          fold_records.end());
  }
  summarize(result, folds);
  return result;
}

// ---------------------------------------------------------------- sweeps

namespace {

void check_swept_values(const std::vector<uint32_t>& values, const char* what) {
  if (values.empty())
    throw ConfigError(std::string(what) + ": no values to sweep");
  uint32_t prev = 0;
  for (uint32_t v : values) {
    if (v < 1) throw ConfigError(std::string(what) + ": values must be >= 1");
    if (v <= prev)
      throw ConfigError(std::string(what) +
                        ": values must be strictly increasing");
    prev = v;
  }
}

struct PerValueAccumulator {
  // one slot per swept value
  std::vector<std::vector<double>> fold_acc;         // [value][fold]
  std::vector<std::vector<double>> pooled_scores;    // [value][record]
  std::vector<std::vector<uint8_t>> pooled_correct;  // [value][record]

  PerValueAccumulator(size_t values, int folds, bool with_scores)
      : fold_acc(values), pooled_scores(with_scores ? values : 0),
        pooled_correct(with_scores ? values : 0) {
    for (auto& v : fold_acc) v.reserve(folds);
  }

  void add_fold(size_t value_pos, std::span<const uint8_t> correct,
                std::span<const double> scores) {
    size_t hits = 0;
    for (uint8_t c : correct) hits += c;
    fold_acc[value_pos].push_back(static_cast<double>(hits) /
                                  static_cast<double>(correct.size()));
    if (!pooled_scores.empty()) {
      pooled_scores[value_pos].insert(pooled_scores[value_pos].end(),
                                      scores.begin(), scores.end());
      pooled_correct[value_pos].insert(pooled_correct[value_pos].end(),
                                       correct.begin(), correct.end());
    }
  }

  SweepRow row(size_t value_pos, uint32_t value, int folds) const {
    SweepRow row;
    row.value = value;
    double sum = 0.0;
    for (double a : fold_acc[value_pos]) sum += a;
    row.mean_acc = sum / static_cast<double>(folds);
    double var = 0.0;
    for (double a : fold_acc[value_pos]) {
      const double d = a - row.mean_acc;
      var += d * d;
    }
    row.std_acc = std::sqrt(var / static_cast<double>(folds));
    if (!pooled_scores.empty()) {
      row.pearson = pearson_r(pooled_scores[value_pos], pooled_correct[value_pos]);
      row.auc = roc_auc(pooled_scores[value_pos], pooled_correct[value_pos]);
    }
    return row;
  }
};

}  // namespace

SweepReport sweep_fixed_k(const Dataset& data, const std::vector<uint32_t>& ks,
                          int folds, uint64_t seed, unsigned threads) {
  check_swept_values(ks, "fixed-k sweep");
  const FoldPlan plan = FoldPlan::make(data.size(), folds, seed);
  check_fixed_k(ks.back(), plan.min_train_size());

  PerValueAccumulator acc(ks.size(), folds, false);
  const uint32_t k_max = ks.back();

  for (int f = 0; f < folds; ++f) {
    const auto& test = plan.test_rows[f];
    const TrainingSet train(data.subset(plan.train_rows[f]));
    const Dataset& tds = train.dataset();

    // One neighbor pass per test point votes every k prefix at once;
    // each prefix vote equals a direct knn_classify at that k.
    std::vector<uint8_t> correct(test.size() * ks.size());
    parallel_for(test.size(), threads, [&](size_t begin, size_t end) {
      VoteAccumulator votes(tds.labels().size());
      for (size_t i = begin; i < end; ++i) {
        const GeoPoint& p = data[test[i]].point;
        const ClassId truth = data[test[i]].label;
        const NeighborList neighbors = train.spatial().k_nearest(p, k_max);
        votes.reset();
        size_t next = 0;
        for (uint32_t k = 1; k <= k_max && next < ks.size(); ++k) {
          votes.add(tds[neighbors[k - 1].index].label);
          if (ks[next] == k) {
            correct[i * ks.size() + next] = votes.winner() == truth;
            ++next;
          }
        }
      }
    });

    std::vector<uint8_t> per_value(test.size());
    for (size_t v = 0; v < ks.size(); ++v) {
      for (size_t i = 0; i < test.size(); ++i)
        per_value[i] = correct[i * ks.size() + v];
      acc.add_fold(v, per_value, {});
    }
  }

  SweepReport report;
  report.kind = ExperimentKind::FixedKSweep;
  report.param_name = "k";
  report.method_desc = "standard_knn";
  report.folds = folds;
  report.seed = seed;
  for (size_t v = 0; v < ks.size(); ++v)
    report.rows.push_back(acc.row(v, ks[v], folds));
  return report;
}

SweepReport sweep_l(const Dataset& data, FeatureKind kind, const KRange& range,
                    const std::vector<uint32_t>& ls, int folds, uint64_t seed,
                    unsigned threads, ExperimentKind tag) {
  check_swept_values(ls, "l sweep");
  if (range.empty()) throw ConfigError("candidate range is empty");
  const FoldPlan plan = FoldPlan::make(data.size(), folds, seed);
  AckerConfig probe{kind, range, ls.back()};
  check_acker(probe, plan.min_train_size());

  PerValueAccumulator acc(ls.size(), folds, true);
  const auto& kvals = range.values();
  const uint32_t k_max = range.max();
  const uint32_t l_max = ls.back();
  const bool k_dep = feature_k_dependent(kind);

  for (int f = 0; f < folds; ++f) {
    const auto& test = plan.test_rows[f];
    const TrainingSet train(data.subset(plan.train_rows[f]));
    const Dataset& tds = train.dataset();
    const FeatureIndexSet fidx =
        FeatureIndexSet::build(train, kind, range, threads);

    // Per point and per l: chosen k, its score and the prediction. The
    // l values share one similar-point walk of length max(ls); counting
    // correct table entries over its prefixes scores every l at once,
    // which matches a direct run at that l exactly (prefix property).
    std::vector<double> best_score(test.size() * ls.size());
    std::vector<uint32_t> best_pred(test.size() * ls.size());

    parallel_for(test.size(), threads, [&](size_t begin, size_t end) {
      VoteAccumulator votes(tds.labels().size());
      std::vector<ClassId> predicted_at(kvals.size());
      std::vector<size_t> prefix_correct(ls.size());
      std::vector<double> best(ls.size());
      std::vector<size_t> best_pos(ls.size());
      std::vector<uint32_t> shared_similar;

      for (size_t i = begin; i < end; ++i) {
        const GeoPoint& p = data[test[i]].point;
        const NeighborList neighbors = train.spatial().k_nearest(p, k_max);

        votes.reset();
        size_t next = 0;
        double sum = 0.0;
        for (uint32_t k = 1; k <= k_max && next < kvals.size(); ++k) {
          votes.add(tds[neighbors[k - 1].index].label);
          sum += neighbors[k - 1].distance;
          if (kvals[next] == k) {
            predicted_at[next] = votes.winner();
            ++next;
          }
        }

        std::fill(best.begin(), best.end(), -1.0);
        std::fill(best_pos.begin(), best_pos.end(), 0);

        std::vector<uint32_t> similar;
        double run_sum = 0.0;
        size_t pos = 0;
        for (size_t kp = 0; kp < kvals.size(); ++kp) {
          const uint32_t k = kvals[kp];
          const std::vector<uint32_t>* sim = &similar;
          if (k_dep) {
            FeatureValue query;
            query.dim = feature_dimensionality(kind);
            while (pos < k) run_sum += neighbors[pos++].distance;
            const double avg = run_sum / static_cast<double>(k);
            const double max = neighbors[k - 1].distance;
            switch (kind) {
              case FeatureKind::AvgDist: query.components = {avg, 0.0}; break;
              case FeatureKind::MaxDist: query.components = {max, 0.0}; break;
              case FeatureKind::MaxAvgComb: query.components = {max, avg}; break;
              case FeatureKind::LatLon: break;
            }
            similar = fidx.most_similar(k, query, l_max);
          } else {
            if (kp == 0) {
              const FeatureValue query = feature_from_neighbors(kind, p, {}, 0);
              shared_similar = fidx.most_similar(k, query, l_max);
            }
            sim = &shared_similar;
          }

          size_t correct = 0;
          size_t li = 0;
          for (size_t s = 0; s < sim->size() && li < ls.size(); ++s) {
            correct += fidx.correct_at((*sim)[s], kp);
            if (s + 1 == ls[li]) {
              prefix_correct[li] = correct;
              ++li;
            }
          }
          for (size_t lj = 0; lj < ls.size(); ++lj) {
            const double score = static_cast<double>(prefix_correct[lj]) /
                                 static_cast<double>(ls[lj]);
            if (score > best[lj]) {
              best[lj] = score;
              best_pos[lj] = kp;
            }
          }
        }

        for (size_t lj = 0; lj < ls.size(); ++lj) {
          best_score[i * ls.size() + lj] = best[lj];
          best_pred[i * ls.size() + lj] = predicted_at[best_pos[lj]];
        }
      }
    });

    std::vector<uint8_t> correct(test.size());
    std::vector<double> scores(test.size());
    for (size_t lj = 0; lj < ls.size(); ++lj) {
      for (size_t i = 0; i < test.size(); ++i) {
        correct[i] = best_pred[i * ls.size() + lj] == data[test[i]].label;
        scores[i] = best_score[i * ls.size() + lj];
      }
      acc.add_fold(lj, correct, scores);
    }
  }

  SweepReport report;
  report.kind = tag;
  report.param_name = "l";
  report.method_desc = "acker(feature=" + std::string(feature_name(kind)) +
                       ", range=" + range.to_string() + ")";
  report.folds = folds;
  report.seed = seed;
  for (size_t lj = 0; lj < ls.size(); ++lj)
    report.rows.push_back(acc.row(lj, ls[lj], folds));
  return report;
}

SweepReport sweep_kmax(const Dataset& data, FeatureKind kind, uint32_t l,
                       const std::vector<uint32_t>& kmaxes, int folds,
                       uint64_t seed, unsigned threads) {
  check_swept_values(kmaxes, "k_max sweep");
  const KRange range = KRange::contiguous(kmaxes.back());
  const FoldPlan plan = FoldPlan::make(data.size(), folds, seed);
  AckerConfig probe{kind, range, l};
  check_acker(probe, plan.min_train_size());

  PerValueAccumulator acc(kmaxes.size(), folds, true);
  const uint32_t k_top = kmaxes.back();

  for (int f = 0; f < folds; ++f) {
    const auto& test = plan.test_rows[f];
    const TrainingSet train(data.subset(plan.train_rows[f]));

    // The full per-k score vector is computed once per point; every
    // smaller k_max is its prefix argmax, identical to a direct run with
    // that contiguous range.
    const FeatureIndexSet fidx =
        FeatureIndexSet::build(train, kind, range, threads);
    std::vector<GeoPoint> queries(test.size());
    for (size_t i = 0; i < test.size(); ++i) queries[i] = data[test[i]].point;
    AckerConfig cfg{kind, range, l};
    const auto predictions =
        acker_classify_batch(train, fidx, queries, cfg, threads, true);

    std::vector<double> best_score(test.size() * kmaxes.size());
    std::vector<ClassId> best_pred(test.size() * kmaxes.size());
    parallel_for(test.size(), threads, [&](size_t begin, size_t end) {
      for (size_t i = begin; i < end; ++i) {
        const auto& scores = predictions[i].per_k_scores;
        double best = -1.0;
        uint32_t best_k = 0;
        size_t vi = 0;
        ClassId cached_pred = 0;
        uint32_t cached_for = 0;
        for (uint32_t k = 1; k <= k_top && vi < kmaxes.size(); ++k) {
          if (scores[k - 1].second > best) {
            best = scores[k - 1].second;
            best_k = k;
          }
          if (kmaxes[vi] == k) {
            if (cached_for != best_k) {
              cached_pred =
                  knn_classify(train, queries[i], best_k).predicted;
              cached_for = best_k;
            }
            best_score[i * kmaxes.size() + vi] = best;
            best_pred[i * kmaxes.size() + vi] = cached_pred;
            ++vi;
          }
        }
      }
    });

    std::vector<uint8_t> correct(test.size());
    std::vector<double> scores(test.size());
    for (size_t v = 0; v < kmaxes.size(); ++v) {
      for (size_t i = 0; i < test.size(); ++i) {
        correct[i] = best_pred[i * kmaxes.size() + v] == data[test[i]].label;
        scores[i] = best_score[i * kmaxes.size() + v];
      }
      acc.add_fold(v, correct, scores);
    }
  }

  SweepReport report;
  report.kind = ExperimentKind::KmaxSweep;
  report.param_name = "k_max";
  report.method_desc = "acker(feature=" + std::string(feature_name(kind)) +
                       ", l=" + std::to_string(l) + ")";
  report.folds = folds;
  report.seed = seed;
  for (size_t v = 0; v < kmaxes.size(); ++v)
    report.rows.push_back(acc.row(v, kmaxes[v], folds));
  return report;
}

SweepReport evaluate_report(const Dataset& data, const Method& method,
                            int folds, uint64_t seed, unsigned threads) {
  const CvResult cv = run_cv(data, method, folds, seed, threads);

  SweepRow row;
  row.mean_acc = cv.mean_acc;
  row.std_acc = cv.std_acc;
  if (const auto* fixed = std::get_if<FixedK>(&method)) {
    row.value = fixed->k;
  } else {
    row.value = std::get<AckerConfig>(method).l;
    std::vector<double> scores;
    std::vector<uint8_t> correct;
    scores.reserve(cv.records.size());
    correct.reserve(cv.records.size());
    for (const EvalRecord& r : cv.records) {
      scores.push_back(*r.score);
      correct.push_back(r.truth == r.predicted);
    }
    row.pearson = pearson_r(scores, correct);
    row.auc = roc_auc(scores, correct);
  }

  SweepReport report;
  report.kind = ExperimentKind::Evaluate;
  report.param_name = std::holds_alternative<FixedK>(method) ? "k" : "l";
  report.method_desc = describe(method);
  report.folds = folds;
  report.seed = seed;
  report.rows.push_back(row);
  return report;
}

}  // namespace acker
