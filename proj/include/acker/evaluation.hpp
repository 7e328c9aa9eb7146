#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "acker/classifier.hpp"
#include "acker/report.hpp"

namespace acker {

// Deterministic fold assignment: a seeded permutation cut into
// contiguous blocks whose sizes differ by at most one. Fully determined
// by (n, folds, seed) on every platform.
struct FoldPlan {
  int fold_count = 0;
  uint64_t seed = 0;
  std::vector<std::vector<uint32_t>> test_rows;   // ascending per fold
  std::vector<std::vector<uint32_t>> train_rows;  // ascending complement

  static FoldPlan make(size_t n, int folds, uint64_t seed);

  size_t min_train_size() const;
};

struct EvalRecord {
  ClassId truth = 0;
  ClassId predicted = 0;
  uint32_t chosen_k = 0;
  std::optional<double> score;  // expected accuracy; absent for fixed k
  int fold = 0;
};

struct FixedK {
  uint32_t k = 1;
};

using Method = std::variant<FixedK, AckerConfig>;

struct CvResult {
  double mean_acc = 0.0;
  double std_acc = 0.0;  // population sigma across fold accuracies
  std::vector<double> fold_acc;
  std::vector<EvalRecord> records;  // fold order, test order within fold
};

// k-fold cross-validation. Each fold trains strictly on its own train
// side (indexes and feature tables are rebuilt per fold, so test points
// never leak into them).
CvResult run_cv(const Dataset& data, const Method& method, int folds,
                uint64_t seed, unsigned threads = 1);

// Sample Pearson correlation between scores and the 0/1 correctness
// indicator; empty result when either side is constant.
std::optional<double> pearson_r(std::span<const double> scores,
                                std::span<const uint8_t> correct);

// Rank-based ROC AUC (Mann-Whitney) treating correct=1 as positive;
// score ties contribute half credit. Empty result when only one class is
// present.
std::optional<double> roc_auc(std::span<const double> scores,
                              std::span<const uint8_t> correct);

// Parameter sweeps. All values of one sweep share a single FoldPlan, so
// rows are comparable; each row equals the corresponding run_cv result.
SweepReport sweep_fixed_k(const Dataset& data, const std::vector<uint32_t>& ks,
                          int folds, uint64_t seed, unsigned threads = 1);

// One feature index build per fold serves every l. Rows carry pooled
// Pearson r and ROC AUC of the per-point expected accuracy against the
// correctness indicator.
SweepReport sweep_l(const Dataset& data, FeatureKind kind, const KRange& range,
                    const std::vector<uint32_t>& ls, int folds, uint64_t seed,
                    unsigned threads = 1,
                    ExperimentKind tag = ExperimentKind::LSweep);

// One feature index build at the largest k_max per fold serves every
// smaller k_max, whose candidate ranges are prefixes.
SweepReport sweep_kmax(const Dataset& data, FeatureKind kind, uint32_t l,
                       const std::vector<uint32_t>& kmaxes, int folds,
                       uint64_t seed, unsigned threads = 1);

// Single-configuration report (one row) built from run_cv.
SweepReport evaluate_report(const Dataset& data, const Method& method,
                            int folds, uint64_t seed, unsigned threads = 1);

}  // namespace acker
