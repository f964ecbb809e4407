#include "stylo/compare.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "stylo/csv.hpp"
#include "stylo/error.hpp"
#include "stylo/stats.hpp"

namespace stylo {

namespace {

std::map<std::string, std::size_t> index_by_parent(const FeatureMatrix& m, std::set<std::string>& duplicates) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!out.emplace(parent_id(m[i].doc_id), i).second) duplicates.insert(parent_id(m[i].doc_id));
  }
  return out;
}

}  // namespace

std::vector<ComparisonResult> compare_features(const FeatureMatrix& human, const FeatureMatrix& llm,
                                               const CompareOptions& options) {
  if (human.feature_ids() != llm.feature_ids()) throw ModelError("feature columns differ between matrices");

  std::set<std::string> bad;
  const auto h_index = index_by_parent(human, bad);
  const auto l_index = index_by_parent(llm, bad);
  for (const auto& [id, _] : h_index) {
    if (!l_index.contains(id)) bad.insert(id);
  }
  for (const auto& [id, _] : l_index) {
    if (!h_index.contains(id)) bad.insert(id);
  }
  if (!bad.empty()) throw AlignmentError({bad.begin(), bad.end()});

  const auto& ids = human.feature_ids();
  const std::size_t tests = options.tests == 0 ? ids.size() : options.tests;
  std::vector<ComparisonResult> results;
  results.reserve(ids.size());
  for (std::size_t f = 0; f < ids.size(); ++f) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& [id, hi] : h_index) {
      const double h = human[hi].values[f];
      const double l = llm[l_index.at(id)].values[f];
      if (std::isfinite(h) && std::isfinite(l)) pairs.emplace_back(h, l);
    }
    ComparisonResult r;
    r.feature_id = ids[f];
    r.n_pairs = pairs.size();
    if (pairs.empty()) {
      r.human_mean = r.llm_mean = std::nan("");
      results.push_back(std::move(r));
      continue;
    }
    for (const auto& [h, l] : pairs) {
      r.human_mean += h;
      r.llm_mean += l;
    }
    r.human_mean /= static_cast<double>(pairs.size());
    r.llm_mean /= static_cast<double>(pairs.size());
    if (r.human_mean > 0 && r.llm_mean > 0) r.ratio = r.llm_mean / r.human_mean;

    const auto w = wilcoxon_signed_rank(pairs);
    r.all_zero = w.all_zero;
    r.p_raw = w.p;
    r.p_adjusted = bonferroni(w.p, tests);
    r.significant = r.p_adjusted < options.alpha;
    if (pairs.size() >= 2 && !w.all_zero) {
      try {
        r.cohen_d = cohen_d_paired(pairs);
      } catch (const ZeroVarianceError&) {
      }
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<ComparisonResult> order_by_importance(std::vector<ComparisonResult> results,
                                                  const ImportanceRanking& ranking) {
  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < ranking.size(); ++i) rank.emplace(ranking[i].first, i);
  std::stable_sort(results.begin(), results.end(), [&](const auto& a, const auto& b) {
    const auto ra = rank.find(a.feature_id);
    const auto rb = rank.find(b.feature_id);
    const auto ka = ra == rank.end() ? ranking.size() : ra->second;
    const auto kb = rb == rank.end() ? ranking.size() : rb->second;
    return ka < kb;
  });
  return results;
}

std::vector<ComparisonResult> order_by_log_ratio(std::vector<ComparisonResult> results) {
  std::stable_sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    if (a.ratio.has_value() != b.ratio.has_value()) return a.ratio.has_value();
    if (!a.ratio) return false;
    return std::fabs(std::log(*a.ratio)) > std::fabs(std::log(*b.ratio));
  });
  return results;
}

std::string comparison_csv(const std::vector<ComparisonResult>& results) {
  std::string out = "feature,human_rate,llm_rate,ratio,p_raw,p_adj,d,n,significant\n";
  for (const auto& r : results) {
    out += csv::join({r.feature_id, csv::format_number(r.human_mean), csv::format_number(r.llm_mean),
                      r.ratio ? csv::format_number(*r.ratio) : "NA", csv::format_number(r.p_raw),
                      csv::format_number(r.p_adjusted), r.cohen_d ? csv::format_number(*r.cohen_d) : "NA",
                      std::to_string(r.n_pairs), r.significant ? "true" : "false"}) +
           "\n";
  }
  return out;
}

nlohmann::json comparison_json(const std::vector<ComparisonResult>& results) {
  auto num = [](double v) -> nlohmann::json { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  auto opt = [&](const std::optional<double>& v) -> nlohmann::json { return v ? num(*v) : nlohmann::json(); };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"feature", r.feature_id},
                   {"human_rate", num(r.human_mean)},
                   {"llm_rate", num(r.llm_mean)},
                   {"ratio", opt(r.ratio)},
                   {"p_raw", num(r.p_raw)},
                   {"p_adj", num(r.p_adjusted)},
                   {"d", opt(r.cohen_d)},
                   {"n", r.n_pairs},
                   {"all_zero_differences", r.all_zero},
                   {"significant", r.significant}});
  }
  return arr;
}

}  // namespace stylo
