#include <doctest.h>

#include <vector>

#include "acker/knn.hpp"
#include "acker/rng.hpp"
#include "oracles.hpp"

using namespace acker;

TEST_CASE("vote accumulator majority and tie rules") {
  VoteAccumulator acc(3);

  SUBCASE("plain majority") {
    acc.add(0);
    acc.add(1);
    acc.add(1);
    CHECK(acc.winner() == 1);
    CHECK_FALSE(acc.tie());
    CHECK(acc.counts() == std::vector<uint32_t>{1, 2, 0});
  }

  SUBCASE("count tie goes to the class seen nearest first") {
    acc.add(2);
    acc.add(0);
    acc.add(2);
    acc.add(0);
    CHECK(acc.winner() == 2);  // first member of class 2 has rank 0
    CHECK(acc.tie());
  }

  SUBCASE("k=1 is the nearest neighbor's class") {
    acc.add(1);
    CHECK(acc.winner() == 1);
    CHECK_FALSE(acc.tie());
  }

  SUBCASE("reset clears every counter") {
    acc.add(2);
    acc.add(2);
    acc.reset();
    acc.add(0);
    CHECK(acc.winner() == 0);
    CHECK(acc.counts() == std::vector<uint32_t>{1, 0, 0});
  }
}

TEST_CASE("knn_classify on a line with a hand-checked flip point") {
  Dataset ds("line");
  ds.add({0.0, 0.0}, "a");
  ds.add({1.0, 0.0}, "b");
  ds.add({2.0, 0.0}, "b");
  ds.add({3.0, 0.0}, "a");
  const TrainingSet train{ds};
  const GeoPoint q{0.9, 0.0};
  CHECK(knn_classify(train, q, 1).predicted == 1);  // nearest is "b" at 1.0
  CHECK(knn_classify(train, q, 3).predicted == 1);  // b,a,b
  const VoteResult full = knn_classify(train, q, 4);
  CHECK(full.tie);            // 2 vs 2
  CHECK(full.predicted == 1); // first "b" outranks first "a"
  CHECK(full.counts == std::vector<uint32_t>{2, 2});
}

TEST_CASE("knn_classify agrees with the exhaustive oracle") {
  Dataset ds("rand");
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const char* names[] = {"x", "y", "z"};
    ds.add({rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)},
           names[rng.below(3)]);
  }
  const TrainingSet train{ds};
  for (int q = 0; q < 40; ++q) {
    const GeoPoint query{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
    for (size_t k : {size_t{1}, size_t{2}, size_t{3}, size_t{7}, size_t{50}}) {
      CHECK(knn_classify(train, query, k).predicted ==
            oracle::knn_classify_scan(ds, query, k, std::nullopt));
    }
    const uint32_t excl = static_cast<uint32_t>(rng.below(ds.size()));
    CHECK(knn_classify(train, ds[excl].point, 5, excl).predicted ==
          oracle::knn_classify_scan(ds, ds[excl].point, 5, excl));
  }
}
