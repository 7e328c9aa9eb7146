#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acker/geo.hpp"

namespace acker {

// Column selectors accept a header name or a 0-based position written as
// a number; files without a header must use positions.
struct CsvSchema {
  std::string lon_column = "lon";
  std::string lat_column = "lat";
  std::string label_column = "label";
  char delimiter = ',';
  bool has_header = true;
};

// Loads labeled points. Every malformed row fails the load with a
// diagnostic naming the data row (1-based, header excluded): missing
// fields, unparsable numbers and out-of-range coordinates are distinct
// errors. Label ids are interned in first-appearance order.
Dataset load_csv(const std::string& path, const CsvSchema& schema,
                 std::string dataset_name = "");

// Loads bare query points; the label column is ignored and may be absent.
std::vector<GeoPoint> load_points_csv(const std::string& path,
                                      const CsvSchema& schema);

// Writes "lon,lat,label" with shortest round-trip number formatting, so
// load_csv(write_csv(ds)) reproduces coordinates exactly.
void write_csv(const Dataset& dataset, const std::string& path);

enum class GeneratorKind {
  SeparableHalves,
  NoisyDensePlusSparseCheckerboard,
  UniformRandomLabels,
};

std::string_view generator_name(GeneratorKind kind);
std::optional<GeneratorKind> generator_from_name(std::string_view name);

// Deterministic synthetic datasets: equal spec, equal dataset, on any
// platform.
//
//   separable_halves: two classes split by the lon=0 axis with a margin;
//     nearest-neighbor classification is perfect at noise 0.
//   noisy_dense_plus_sparse_checkerboard: a dense Gaussian blob holding
//     two interleaved label stripes whose labels are flipped with
//     probability noise_rate (large k wins there), plus a distant sparse
//     noise-free checkerboard of tight clusters whose adjacent clusters
//     alternate class (k=1 wins there). No single fixed k suits both
//     regions.
//   uniform_random_labels: uniform points, labels drawn uniformly.
struct SyntheticSpec {
  GeneratorKind kind = GeneratorKind::UniformRandomLabels;
  uint64_t count = 1000;
  uint32_t classes = 2;
  double noise_rate = 0.0;  // [0, 1), dense blob only
  uint64_t seed = 0;

  // geometry knobs, defaults documented in the README
  double dense_sigma = 2.0;         // blob standard deviation
  double dense_stripe_width = 4.0;  // lat stripe width inside the blob
  double sparse_cell_size = 6.0;    // checkerboard cell edge (cluster pitch)
  uint32_t sparse_grid = 20;        // checkerboard cells per side
  double sparse_offset_lon = 40.0;  // checkerboard west edge
};

Dataset generate(const SyntheticSpec& spec);

}  // namespace acker
