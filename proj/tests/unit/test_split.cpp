#include <doctest.h>

#include <map>
#include <set>

#include "oracles.hpp"
#include "stylo/error.hpp"
#include "stylo/split.hpp"

using namespace stylo;

namespace {

// `parents` groups of (human_chunk2, llm_a, llm_b) rows.
FeatureMatrix grouped(std::size_t parents) {
  FeatureMatrix m({"f_01"});
  for (std::size_t p = 0; p < parents; ++p) {
    for (const char* src : {"human_chunk2", "llm_a", "llm_b"}) {
      m.add_row({"p" + std::to_string(p) + "#" + src, src, 100, {static_cast<double>(p)}});
    }
  }
  return m;
}

}  // namespace

TEST_SUITE("split") {
  TEST_CASE("partition with whole parent groups") {
    const auto m = grouped(40);
    const auto s = split(m, {});
    CHECK(s.train_rows.size() + s.test_rows.size() == m.size());
    CHECK(s.train_rows.size() == 90);  // round(40 * 0.75) groups of 3
    std::set<std::size_t> all(s.train_rows.begin(), s.train_rows.end());
    for (auto i : s.test_rows) CHECK(all.insert(i).second);
    CHECK(all.size() == m.size());
    CHECK(std::is_sorted(s.train_rows.begin(), s.train_rows.end()));
    std::map<std::string, int> side;
    for (auto i : s.train_rows) side[parent_id(m[i].doc_id)] |= 1;
    for (auto i : s.test_rows) side[parent_id(m[i].doc_id)] |= 2;
    for (const auto& [parent, mask] : side) CHECK(mask != 3);
    CHECK(s.train.size() == s.train_rows.size());
    CHECK(s.test[0].doc_id == m[s.test_rows[0]].doc_id);
  }

  TEST_CASE("stratification keeps class proportions") {
    FeatureMatrix m({"f_01"});
    for (int i = 0; i < 30; ++i) m.add_row({"a" + std::to_string(i), "human_chunk2", 1, {1}});
    for (int i = 0; i < 10; ++i) m.add_row({"b" + std::to_string(i), "llm", 1, {1}});
    for (double f : {0.5, 0.6, 0.75, 0.9}) {
      DatasetSplit spec;
      spec.train_fraction = f;
      const auto s = split(m, spec);
      std::map<std::string, double> train;
      for (auto i : s.train_rows) train[m[i].source] += 1;
      CHECK(std::fabs(train["human_chunk2"] - 30 * f) <= 1);
      CHECK(std::fabs(train["llm"] - 10 * f) <= 1);
    }
  }

  TEST_CASE("same seed, same split; different seed, different split") {
    const auto m = grouped(50);
    DatasetSplit a;
    a.seed = 42;
    CHECK(split(m, a).train_rows == split(m, a).train_rows);
    DatasetSplit b = a;
    b.seed = 43;
    CHECK(split(m, a).train_rows != split(m, b).train_rows);
  }

  TEST_CASE("ungrouped splitting ignores parents") {
    const auto m = grouped(20);
    DatasetSplit spec;
    spec.group_by_parent = false;
    const auto s = split(m, spec);
    CHECK(s.train_rows.size() == 45);
    bool mixed = false;
    std::map<std::string, int> side;
    for (auto i : s.train_rows) side[parent_id(m[i].doc_id)] |= 1;
    for (auto i : s.test_rows) side[parent_id(m[i].doc_id)] |= 2;
    for (const auto& [parent, mask] : side) mixed |= mask == 3;
    CHECK(mixed);
  }

  TEST_CASE("invalid requests") {
    const auto m = grouped(4);
    for (double f : {0.0, 1.0, -0.2, 1.5}) {
      DatasetSplit spec;
      spec.train_fraction = f;
      CHECK_THROWS_AS(split(m, spec), ModelError);
    }
    FeatureMatrix lonely({"f_01"});
    lonely.add_row({"a", "x", 1, {1}});
    lonely.add_row({"b", "x", 1, {1}});
    lonely.add_row({"c", "y", 1, {1}});
    CHECK_THROWS_AS(split(lonely, {}), ModelError);
  }

  TEST_CASE("folds keep groups together and balance sizes") {
    const auto m = grouped(23);
    const auto folds = assign_folds(m, 5, 9);
    REQUIRE(folds.size() == m.size());
    std::map<std::string, std::size_t> fold_of;
    std::vector<std::size_t> sizes(5, 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto [it, fresh] = fold_of.emplace(parent_id(m[i].doc_id), folds[i]);
      if (!fresh) CHECK(it->second == folds[i]);
      ++sizes[folds[i]];
    }
    for (auto s : sizes) {
      CHECK(s >= 12);
      CHECK(s <= 15);
    }
    CHECK(assign_folds(m, 5, 9) == folds);
    CHECK_THROWS_AS(assign_folds(m, 1, 9), ModelError);
  }
}
