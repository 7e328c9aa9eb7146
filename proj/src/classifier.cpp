#include "acker/classifier.hpp"

#include "acker/error.hpp"
#include "acker/parallel.hpp"

namespace acker {

namespace {

void check_l(const FeatureIndexSet& fidx, uint32_t l) {
  if (l < 1 || l > fidx.point_count())
    throw ConfigError("l=" + std::to_string(l) + " outside [1, " +
                      std::to_string(fidx.point_count()) + "]");
}

size_t count_correct(const FeatureIndexSet& fidx,
                     const std::vector<uint32_t>& similar, size_t range_pos) {
  size_t correct = 0;
  for (uint32_t idx : similar) correct += fidx.correct_at(idx, range_pos);
  return correct;
}

}  // namespace

double expected_accuracy(const TrainingSet& train, const FeatureIndexSet& fidx,
                         const GeoPoint& p, uint32_t k, uint32_t l) {
  check_l(fidx, l);
  const size_t pos = fidx.range_position(k);
  const FeatureValue query = feature_value(fidx.kind(), train, p, k);
  const auto similar = fidx.most_similar(k, query, l);
  return static_cast<double>(count_correct(fidx, similar, pos)) /
         static_cast<double>(l);
}

Prediction acker_classify(const TrainingSet& train, const FeatureIndexSet& fidx,
                          const GeoPoint& p, const AckerConfig& config,
                          bool keep_scores) {
  if (config.kind != fidx.kind())
    throw ConfigError("config feature kind differs from the index");
  if (config.range.empty()) throw ConfigError("candidate range is empty");
  check_l(fidx, config.l);

  const auto& ks = config.range.values();
  const bool k_dep = feature_k_dependent(config.kind);

  // One neighbor pass of max(range) serves every candidate k; its k-th
  // prefix matches a direct k-nearest query bit for bit.
  NeighborList neighbors;
  if (k_dep) neighbors = train.spatial().k_nearest(p, config.range.max());

  // LatLon similarity does not depend on k, so its similar set is shared.
  std::vector<uint32_t> shared_similar;
  if (!k_dep) {
    const FeatureValue query = feature_from_neighbors(config.kind, p, {}, 0);
    shared_similar = fidx.most_similar(ks.front(), query, config.l);
  }

  Prediction out;
  double best = -1.0;
  uint32_t best_k = 0;
  if (keep_scores) out.per_k_scores.reserve(ks.size());

  double sum = 0.0;
  size_t next = 0;
  const uint32_t k_max = k_dep ? config.range.max() : ks.back();
  for (uint32_t k = 1; k <= k_max && next < ks.size(); ++k) {
    if (k_dep) sum += neighbors[k - 1].distance;
    if (ks[next] != k) continue;
    ++next;

    size_t correct;
    const size_t pos = fidx.range_position(k);
    if (k_dep) {
      FeatureValue query;
      query.dim = feature_dimensionality(config.kind);
      const double avg = sum / static_cast<double>(k);
      const double max = neighbors[k - 1].distance;
      switch (config.kind) {
        case FeatureKind::AvgDist: query.components = {avg, 0.0}; break;
        case FeatureKind::MaxDist: query.components = {max, 0.0}; break;
        case FeatureKind::MaxAvgComb: query.components = {max, avg}; break;
        case FeatureKind::LatLon: break;
      }
      const auto similar = fidx.most_similar(k, query, config.l);
      correct = count_correct(fidx, similar, pos);
    } else {
      correct = count_correct(fidx, shared_similar, pos);
    }

    const double score =
        static_cast<double>(correct) / static_cast<double>(config.l);
    if (keep_scores) out.per_k_scores.emplace_back(k, score);
    // Strict comparison keeps the smallest k among equal scores.
    if (score > best) {
      best = score;
      best_k = k;
    }
  }

  out.chosen_k = best_k;
  out.expected_accuracy = best;
  out.predicted = knn_classify(train, p, best_k).predicted;
  return out;
}

std::vector<Prediction> acker_classify_batch(
    const TrainingSet& train, const FeatureIndexSet& fidx,
    std::span<const GeoPoint> points, const AckerConfig& config,
    unsigned threads, bool keep_scores) {
  std::vector<Prediction> out(points.size());
  parallel_for(points.size(), threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i)
      out[i] = acker_classify(train, fidx, points[i], config, keep_scores);
  });
  return out;
}

}  // namespace acker
