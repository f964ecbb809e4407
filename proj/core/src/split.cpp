#include "stylo/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "stylo/error.hpp"
#include "stylo/rng.hpp"

namespace stylo {

namespace {

struct Grouping {
  std::vector<std::vector<std::size_t>> groups;            // row indices per group
  std::map<std::string, std::vector<std::size_t>> strata;  // signature -> group indices
};

Grouping group_rows(const FeatureMatrix& m, bool by_parent, bool stratified) {
  Grouping g;
  std::map<std::string, std::size_t> key_to_group;
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::string key = by_parent ? parent_id(m[i].doc_id) : std::to_string(i);
    auto [it, inserted] = key_to_group.emplace(key, g.groups.size());
    if (inserted) g.groups.emplace_back();
    g.groups[it->second].push_back(i);
  }
  for (std::size_t gi = 0; gi < g.groups.size(); ++gi) {
    std::string signature;
    if (stratified) {
      std::vector<std::string> labels;
      for (auto r : g.groups[gi]) labels.push_back(m[r].source);
      std::sort(labels.begin(), labels.end());
      for (const auto& l : labels) signature += l + '\x1f';
    }
    g.strata[signature].push_back(gi);
  }
  return g;
}

void check_classes(const FeatureMatrix& m) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : m.rows()) ++counts[r.source];
  for (const auto& [label, n] : counts) {
    if (n < 2) throw ModelError("class '" + label + "' has fewer than 2 rows");
  }
}

}  // namespace

SplitResult split(const FeatureMatrix& matrix, const DatasetSplit& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ModelError("train_fraction must lie strictly between 0 and 1");
  }
  check_classes(matrix);
  auto g = group_rows(matrix, spec.group_by_parent, spec.stratified);

  Rng rng(spec.seed);
  std::vector<std::vector<std::size_t>*> strata;
  for (auto& [_, members] : g.strata) {
    rng.shuffle(members);
    strata.push_back(&members);
  }

  // Largest-remainder apportionment of train groups across strata.
  const auto total_groups = g.groups.size();
  const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(total_groups) * spec.train_fraction));
  std::vector<std::size_t> quota(strata.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < strata.size(); ++s) {
    const double ideal = static_cast<double>(strata[s]->size()) * spec.train_fraction;
    quota[s] = static_cast<std::size_t>(std::floor(ideal));
    assigned += quota[s];
    remainders.emplace_back(ideal - std::floor(ideal), s);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < target && k < remainders.size(); ++k, ++assigned) {
    ++quota[remainders[k].second];
  }

  std::vector<bool> in_train(matrix.size(), false);
  for (std::size_t s = 0; s < strata.size(); ++s) {
    for (std::size_t k = 0; k < quota[s]; ++k) {
      for (auto r : g.groups[(*strata[s])[k]]) in_train[r] = true;
    }
  }
  SplitResult out;
  for (std::size_t i = 0; i < matrix.size(); ++i) (in_train[i] ? out.train_rows : out.test_rows).push_back(i);
  out.train = matrix.select_rows(out.train_rows);
  out.test = matrix.select_rows(out.test_rows);
  return out;
}

std::vector<std::size_t> assign_folds(const FeatureMatrix& matrix, std::size_t folds, std::uint64_t seed,
                                      bool group_by_parent) {
  if (folds < 2) throw ModelError("need at least 2 folds");
  auto g = group_rows(matrix, group_by_parent, true);
  Rng rng(seed);
  std::vector<std::size_t> fold_of(matrix.size(), 0);
  std::size_t next = 0;
  for (auto& [_, members] : g.strata) {
    rng.shuffle(members);
    for (auto gi : members) {
      for (auto r : g.groups[gi]) fold_of[r] = next % folds;
      ++next;
    }
  }
  return fold_of;
}

}  // namespace stylo
