#include <doctest.h>

#include <optional>
#include <vector>

#include "acker/error.hpp"
#include "acker/rng.hpp"
#include "acker/spatial.hpp"
#include "oracles.hpp"

using namespace acker;

namespace {

// Uniform cloud plus a coarse lattice (shared coordinates force distance
// ties) plus exact duplicates.
Dataset tie_rich_dataset(size_t n, uint64_t seed) {
  Dataset ds("tie_rich");
  Rng rng(seed);
  for (size_t i = 0; i < n; ++i) {
    GeoPoint p;
    if (i % 3 == 0) {
      p.lon = static_cast<double>(rng.below(7)) - 3.0;
      p.lat = static_cast<double>(rng.below(7)) - 3.0;
    } else {
      p.lon = rng.uniform(-5.0, 5.0);
      p.lat = rng.uniform(-5.0, 5.0);
    }
    ds.add(p, i % 2 ? "a" : "b");
    if (i % 11 == 0) ds.add(p, "a");  // exact duplicate, distinct index
  }
  return ds;
}

void check_equal(const NeighborList& got, const NeighborList& want) {
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].index == want[i].index);
    CHECK(got[i].distance == want[i].distance);
  }
}

}  // namespace

TEST_CASE("k_nearest equals the exhaustive scan, ties and exclusions included") {
  const Dataset ds = tie_rich_dataset(300, 17);
  const SpatialIndex index(ds);
  Rng rng(99);
  for (int q = 0; q < 60; ++q) {
    const GeoPoint query{rng.uniform(-6.0, 6.0), rng.uniform(-6.0, 6.0)};
    for (size_t k : {size_t{1}, size_t{2}, size_t{5}, size_t{17}, size_t{50},
                     ds.size() - 1, ds.size()}) {
      check_equal(index.k_nearest(query, k),
                  oracle::knn_scan(ds, query, k, std::nullopt));
      const uint32_t excl = static_cast<uint32_t>(rng.below(ds.size()));
      if (k <= ds.size() - 1)
        check_equal(index.k_nearest(query, k, excl),
                    oracle::knn_scan(ds, query, k, excl));
    }
  }
}

TEST_CASE("queries at training coordinates hit the duplicates first") {
  const Dataset ds = tie_rich_dataset(120, 3);
  const SpatialIndex index(ds);
  for (uint32_t i = 0; i < ds.size(); i += 7) {
    check_equal(index.k_nearest(ds[i].point, 10),
                oracle::knn_scan(ds, ds[i].point, 10, std::nullopt));
    check_equal(index.k_nearest(ds[i].point, 10, i),
                oracle::knn_scan(ds, ds[i].point, 10, i));
  }
}

TEST_CASE("all-identical points order purely by index") {
  Dataset ds("same");
  for (int i = 0; i < 40; ++i) ds.add({1.5, -2.5}, "x");
  const SpatialIndex index(ds);
  const NeighborList got = index.k_nearest({1.5, -2.5}, 7);
  REQUIRE(got.size() == 7);
  for (uint32_t i = 0; i < 7; ++i) {
    CHECK(got[i].index == i);
    CHECK(got[i].distance == 0.0);
  }
  const NeighborList excl = index.k_nearest({0.0, 0.0}, 3, 1);
  CHECK(excl[0].index == 0);
  CHECK(excl[1].index == 2);
  CHECK(excl[2].index == 3);
}

TEST_CASE("the k-nearest answer is a prefix of the (k+m)-nearest answer") {
  const Dataset ds = tie_rich_dataset(200, 41);
  const SpatialIndex index(ds);
  Rng rng(5);
  for (int q = 0; q < 20; ++q) {
    const GeoPoint query{rng.uniform(-6.0, 6.0), rng.uniform(-6.0, 6.0)};
    const NeighborList wide = index.k_nearest(query, 30);
    for (size_t k : {size_t{1}, size_t{4}, size_t{23}}) {
      const NeighborList narrow = index.k_nearest(query, k);
      REQUIRE(narrow.size() == k);
      for (size_t i = 0; i < k; ++i) {
        CHECK(narrow[i].index == wide[i].index);
        CHECK(narrow[i].distance == wide[i].distance);
      }
    }
  }
}

TEST_CASE("k bounds are enforced, clamp relaxes the upper one") {
  Dataset ds("small");
  for (int i = 0; i < 5; ++i) ds.add({double(i), 0.0}, "x");
  const SpatialIndex index(ds);
  const GeoPoint q{2.2, 0.0};
  CHECK_THROWS_AS(index.k_nearest(q, 0), ConfigError);
  CHECK_THROWS_AS(index.k_nearest(q, 6), ConfigError);
  CHECK_THROWS_AS(index.k_nearest(q, 5, uint32_t{2}), ConfigError);
  CHECK(index.k_nearest(q, 6, std::nullopt, true).size() == 5);
  CHECK(index.k_nearest(q, 99, uint32_t{2}, true).size() == 4);
  CHECK(index.k_nearest(q, 5).size() == 5);
}

TEST_CASE("rebuilding the index reproduces identical answers") {
  const Dataset ds = tie_rich_dataset(150, 8);
  const SpatialIndex a(ds);
  const SpatialIndex b(ds);
  Rng rng(12);
  for (int q = 0; q < 25; ++q) {
    const GeoPoint query{rng.uniform(-6.0, 6.0), rng.uniform(-6.0, 6.0)};
    check_equal(a.k_nearest(query, 13), b.k_nearest(query, 13));
  }
}
