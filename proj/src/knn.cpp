#include "acker/knn.hpp"

#include "acker/error.hpp"

namespace acker {

VoteResult knn_classify(const TrainingSet& train, const GeoPoint& p, size_t k,
                        std::optional<uint32_t> exclude) {
  const Dataset& ds = train.dataset();
  const NeighborList neighbors = train.spatial().k_nearest(p, k, exclude);
  VoteAccumulator votes(ds.labels().size());
  for (const Neighbor& n : neighbors) votes.add(ds[n.index].label);
  return {votes.winner(), votes.counts(), votes.tie()};
}

double accuracy(std::span<const ClassId> predictions,
                std::span<const ClassId> truths) {
  if (predictions.size() != truths.size())
    throw ConfigError("accuracy: sequence lengths differ");
  if (predictions.empty()) throw ConfigError("accuracy: empty sequences");
  size_t correct = 0;
  for (size_t i = 0; i < predictions.size(); ++i)
    correct += predictions[i] == truths[i];
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

}  // namespace acker
