#include <doctest.h>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "acker/error.hpp"
#include "acker/feature_index.hpp"
#include "acker/rng.hpp"
#include "oracles.hpp"

using namespace acker;

namespace {

constexpr FeatureKind kAllKinds[] = {FeatureKind::AvgDist, FeatureKind::MaxDist,
                                     FeatureKind::MaxAvgComb, FeatureKind::LatLon};

Dataset random_dataset(size_t n, uint64_t seed, int classes = 3) {
  Dataset ds("rand");
  Rng rng(seed);
  for (size_t i = 0; i < n; ++i) {
    const std::string name = "c" + std::to_string(rng.below(classes));
    ds.add({rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)}, name);
  }
  return ds;
}

}  // namespace

TEST_CASE("KRange construction and parsing") {
  CHECK(KRange::contiguous(5).values() == std::vector<uint32_t>{1, 2, 3, 4, 5});
  CHECK(KRange::parse("3..6").values() == std::vector<uint32_t>{3, 4, 5, 6});
  CHECK(KRange::parse("1,5,25").values() == std::vector<uint32_t>{1, 5, 25});
  CHECK(KRange::parse("7").values() == std::vector<uint32_t>{7});
  CHECK(KRange::parse(" 2 .. 4 ").values() == std::vector<uint32_t>{2, 3, 4});
  CHECK(KRange::parse("9..9").values() == std::vector<uint32_t>{9});

  CHECK_THROWS_AS(KRange::parse(""), ConfigError);
  CHECK_THROWS_AS(KRange::parse("0"), ConfigError);
  CHECK_THROWS_AS(KRange::parse("abc"), ConfigError);
  CHECK_THROWS_AS(KRange::parse("3..1"), ConfigError);
  CHECK_THROWS_AS(KRange::parse("2,2"), ConfigError);
  CHECK_THROWS_AS(KRange::parse("5,3"), ConfigError);
  CHECK_THROWS_AS(KRange::parse("1,"), ConfigError);
  CHECK_THROWS_AS(KRange(std::vector<uint32_t>{}), ConfigError);
  CHECK_THROWS_AS(KRange::contiguous(0), ConfigError);
}

TEST_CASE("KRange accessors and to_string round-trip") {
  const KRange contiguous = KRange::contiguous(50);
  CHECK(contiguous.max() == 50);
  CHECK(contiguous.size() == 50);
  CHECK(contiguous.to_string() == "1..50");
  CHECK(KRange::parse(contiguous.to_string()) == contiguous);

  const KRange sparse = KRange::parse("1,5,25");
  CHECK(sparse.to_string() == "1,5,25");
  CHECK(KRange::parse(sparse.to_string()) == sparse);
  CHECK(KRange::parse("7").to_string() == "7");

  CHECK(sparse.position_of(5) == size_t{1});
  CHECK(sparse.position_of(25) == size_t{2});
  CHECK_FALSE(sparse.position_of(2).has_value());
  CHECK_FALSE(sparse.position_of(26).has_value());
}

TEST_CASE("correctness table stores and compares cells") {
  CorrectnessTable t(3, 2);
  CHECK(t.points() == 3);
  CHECK(t.slots() == 2);
  CHECK_FALSE(t.at(1, 1));
  t.set(1, 1, true);
  t.set(2, 0, true);
  CHECK(t.at(1, 1));
  CHECK(t.at(2, 0));
  CHECK_FALSE(t.at(0, 0));
  CorrectnessTable u(3, 2);
  CHECK_FALSE(t == u);
  u.set(1, 1, true);
  u.set(2, 0, true);
  CHECK(t == u);
}

TEST_CASE("build validates its inputs") {
  const Dataset ds = random_dataset(10, 1);
  const TrainingSet train{ds};
  CHECK_THROWS_AS(FeatureIndexSet::build(train, FeatureKind::MaxDist,
                                         KRange::contiguous(10)),
                  ConfigError);  // k_max must leave one point out
  CHECK(FeatureIndexSet::build(train, FeatureKind::MaxDist,
                               KRange::contiguous(9))
            .point_count() == 10);
  const FeatureIndexSet fidx =
      FeatureIndexSet::build(train, FeatureKind::MaxDist, KRange::parse("2,4"));
  CHECK(fidx.range_position(4) == 1);
  CHECK_THROWS_AS(fidx.range_position(3), ConfigError);
}

TEST_CASE("stored feature values equal leave-one-out scans") {
  const Dataset ds = random_dataset(120, 77);
  const TrainingSet train{ds};
  for (FeatureKind kind : kAllKinds) {
    const KRange range = KRange::parse("1,3,9");
    const FeatureIndexSet fidx = FeatureIndexSet::build(train, kind, range);
    for (uint32_t i = 0; i < ds.size(); i += 13) {
      for (uint32_t k : range.values()) {
        const FeatureValue got = fidx.value_of(i, k);
        const FeatureValue want = oracle::feature_scan(kind, ds, ds[i].point, k, i);
        CHECK(got.components == want.components);
      }
    }
  }
}

TEST_CASE("correctness cells equal direct leave-one-out reclassification") {
  const Dataset ds = random_dataset(120, 31);
  const TrainingSet train{ds};
  const KRange range = KRange::contiguous(12);
  const FeatureIndexSet fidx =
      FeatureIndexSet::build(train, FeatureKind::MaxDist, range);
  for (uint32_t i = 0; i < ds.size(); ++i) {
    for (uint32_t k : range.values()) {
      const bool want =
          oracle::knn_classify_scan(ds, ds[i].point, k, i) == ds[i].label;
      CHECK(fidx.correct_at(i, fidx.range_position(k)) == want);
    }
  }
}

TEST_CASE("most_similar equals the exhaustive similarity sort") {
  const Dataset ds = random_dataset(120, 5);
  const TrainingSet train{ds};
  Rng rng(11);
  for (FeatureKind kind : kAllKinds) {
    const KRange range = KRange::parse("1,4,10");
    const FeatureIndexSet fidx = FeatureIndexSet::build(train, kind, range);
    for (uint32_t k : range.values()) {
      for (int q = 0; q < 8; ++q) {
        const GeoPoint p{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
        const FeatureValue query = oracle::feature_scan(kind, ds, p, k, std::nullopt);
        for (size_t l : {size_t{1}, size_t{7}, size_t{120}}) {
          CHECK(fidx.most_similar(k, query, l) ==
                oracle::most_similar_scan(ds, kind, query, k, l));
        }
      }
      // A stored value as the query forces exact feature-space ties.
      for (uint32_t i = 0; i < ds.size(); i += 29) {
        const FeatureValue query = fidx.value_of(i, k);
        CHECK(fidx.most_similar(k, query, 15) ==
              oracle::most_similar_scan(ds, kind, query, k, 15));
      }
    }
  }
}

TEST_CASE("duplicate coordinates produce exact ties most_similar must order") {
  Dataset ds("dups");
  Rng rng(2);
  for (int i = 0; i < 60; ++i) {
    const double lon = static_cast<double>(rng.below(4));
    const double lat = static_cast<double>(rng.below(4));
    ds.add({lon, lat}, i % 2 ? "a" : "b");
  }
  const TrainingSet train{ds};
  const FeatureIndexSet fidx =
      FeatureIndexSet::build(train, FeatureKind::MaxDist, KRange::contiguous(6));
  for (uint32_t k : {1u, 3u, 6u}) {
    for (int q = 0; q < 10; ++q) {
      const GeoPoint p{rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0)};
      const FeatureValue query =
          oracle::feature_scan(FeatureKind::MaxDist, ds, p, k, std::nullopt);
      CHECK(fidx.most_similar(k, query, 25) ==
            oracle::most_similar_scan(ds, FeatureKind::MaxDist, query, k, 25));
    }
  }
}

TEST_CASE("parallel build equals the single-threaded build") {
  const Dataset ds = random_dataset(150, 9);
  const TrainingSet train{ds};
  for (FeatureKind kind : {FeatureKind::MaxDist, FeatureKind::MaxAvgComb}) {
    const KRange range = KRange::contiguous(8);
    const FeatureIndexSet one = FeatureIndexSet::build(train, kind, range, 1);
    const FeatureIndexSet many = FeatureIndexSet::build(train, kind, range, 8);
    CHECK(one.table() == many.table());
    Rng rng(4);
    for (int q = 0; q < 10; ++q) {
      const GeoPoint p{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
      const FeatureValue query = oracle::feature_scan(kind, ds, p, 8, std::nullopt);
      CHECK(one.most_similar(8, query, 40) == many.most_similar(8, query, 40));
    }
  }
}

TEST_CASE("snapshot round-trips through a stream") {
  const Dataset ds = random_dataset(90, 13);
  const TrainingSet train{ds};
  for (FeatureKind kind : kAllKinds) {
    const FeatureIndexSet built =
        FeatureIndexSet::build(train, kind, KRange::parse("1,2,5"));
    std::stringstream buf;
    built.save(buf);
    const FeatureIndexSet loaded = FeatureIndexSet::load(buf);
    CHECK(loaded.kind() == built.kind());
    CHECK(loaded.range() == built.range());
    CHECK(loaded.point_count() == built.point_count());
    CHECK(loaded.table() == built.table());
    Rng rng(6);
    for (uint32_t k : {1u, 2u, 5u}) {
      for (uint32_t i = 0; i < ds.size(); i += 17)
        CHECK(loaded.value_of(i, k).components == built.value_of(i, k).components);
      const GeoPoint p{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
      const FeatureValue query = oracle::feature_scan(kind, ds, p, k, std::nullopt);
      CHECK(loaded.most_similar(k, query, 33) == built.most_similar(k, query, 33));
    }
  }
}

TEST_CASE("snapshot round-trips through a file and rejects garbage") {
  const Dataset ds = random_dataset(50, 21);
  const TrainingSet train{ds};
  const FeatureIndexSet built =
      FeatureIndexSet::build(train, FeatureKind::AvgDist, KRange::contiguous(4));
  const std::string path = "fidx_roundtrip.bin";
  built.save_file(path);
  const FeatureIndexSet loaded = FeatureIndexSet::load_file(path);
  CHECK(loaded.table() == built.table());
  CHECK(loaded.range() == built.range());
  std::remove(path.c_str());

  std::stringstream bad("not a snapshot at all");
  CHECK_THROWS_AS(FeatureIndexSet::load(bad), DataError);
  CHECK_THROWS_AS(FeatureIndexSet::load_file("no_such_file.bin"), DataError);
}
