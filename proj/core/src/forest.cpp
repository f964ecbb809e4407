#include "stylo/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "stylo/error.hpp"
#include "stylo/rng.hpp"

namespace stylo {

namespace {

using Matrix = std::vector<std::vector<double>>;

std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

double sum_squares(const std::vector<double>& c) {
  double s = 0;
  for (double v : c) s += v * v;
  return s;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<std::size_t>& y, std::size_t classes, const ForestParams& params,
              std::size_t mtry, std::uint64_t seed)
      : x_(x), y_(y), classes_(classes), params_(params), mtry_(mtry), rng_(seed) {}

  DecisionTree build() {
    const std::size_t n = x_.size();
    if (params_.bootstrap) {
      samples_.resize(n);
      for (auto& s : samples_) s = static_cast<std::size_t>(rng_.below(n));
    } else {
      samples_.resize(n);
      std::iota(samples_.begin(), samples_.end(), std::size_t{0});
    }
    order_.resize(x_.front().size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});

    struct Pending {
      int node;
      std::size_t begin, end, depth;
    };
    DecisionTree tree;
    tree.nodes.emplace_back();
    std::vector<Pending> stack{{0, 0, n, 0}};
    while (!stack.empty()) {
      const Pending cur = stack.back();
      stack.pop_back();
      Split s = best_split(cur.begin, cur.end, cur.depth);
      if (s.feature < 0) {
        tree.nodes[cur.node].class_counts = counts(cur.begin, cur.end);
        continue;
      }
      auto mid = std::stable_partition(samples_.begin() + static_cast<std::ptrdiff_t>(cur.begin),
                                       samples_.begin() + static_cast<std::ptrdiff_t>(cur.end), [&](std::size_t r) {
                                         return x_[r][static_cast<std::size_t>(s.feature)] <= s.threshold;
                                       });
      const auto split_at = static_cast<std::size_t>(mid - samples_.begin());
      const int left = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& node = tree.nodes[cur.node];
      node.feature = s.feature;
      node.threshold = s.threshold;
      node.left = left;
      node.right = left + 1;
      node.impurity_decrease = s.decrease;
      stack.push_back({left + 1, split_at, cur.end, cur.depth + 1});
      stack.push_back({left, cur.begin, split_at, cur.depth + 1});
    }
    return tree;
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0;
    double decrease = 0;
  };

  std::vector<double> counts(std::size_t begin, std::size_t end) const {
    std::vector<double> c(classes_, 0.0);
    for (std::size_t i = begin; i < end; ++i) c[y_[samples_[i]]] += 1.0;
    return c;
  }

  Split best_split(std::size_t begin, std::size_t end, std::size_t depth) {
    Split best;
    const std::size_t n = end - begin;
    const auto total = counts(begin, end);
    const double nd = static_cast<double>(n);
    const double parent = nd - sum_squares(total) / nd;  // n * gini
    if (parent <= 0.0 || n < 2 * params_.min_samples_leaf) return best;
    if (params_.max_depth != 0 && depth >= params_.max_depth) return best;

    // Visit features in random order until mtry non-constant ones were scored.
    double best_score = -1.0;
    std::size_t visited = 0;
    const std::size_t p = order_.size();
    for (std::size_t i = 0; i < p && visited < mtry_; ++i) {
      const auto j = i + static_cast<std::size_t>(rng_.below(p - i));
      std::swap(order_[i], order_[j]);
      const std::size_t f = order_[i];
      buf_.clear();
      for (std::size_t k = begin; k < end; ++k) buf_.emplace_back(x_[samples_[k]][f], y_[samples_[k]]);
      std::sort(buf_.begin(), buf_.end());
      if (buf_.front().first == buf_.back().first) continue;
      ++visited;

      std::vector<double> left(classes_, 0.0);
      std::vector<double> right = total;
      double left_sq = 0, right_sq = sum_squares(total);
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::size_t c = buf_[k].second;
        left_sq += 2 * left[c] + 1;
        right_sq -= 2 * right[c] - 1;
        left[c] += 1;
        right[c] -= 1;
        if (buf_[k].first == buf_[k + 1].first) continue;
        const std::size_t nl = k + 1, nr = n - nl;
        if (nl < params_.min_samples_leaf || nr < params_.min_samples_leaf) continue;
        const double score = left_sq / static_cast<double>(nl) + right_sq / static_cast<double>(nr);
        if (score > best_score) {
          best_score = score;
          best.feature = static_cast<int>(f);
          const double lo = buf_[k].first, hi = buf_[k + 1].first;
          double t = lo + (hi - lo) / 2;
          if (!(t < hi)) t = lo;
          best.threshold = t;
        }
      }
    }
    if (best.feature < 0) return best;
    best.decrease = parent - (nd - best_score);
    if (!(best.decrease > 1e-12 * nd)) best.feature = -1;
    return best;
  }

  const Matrix& x_;
  const std::vector<std::size_t>& y_;
  std::size_t classes_;
  const ForestParams& params_;
  std::size_t mtry_;
  Rng rng_;
  std::vector<std::size_t> samples_;
  std::vector<std::size_t> order_;
  std::vector<std::pair<double, std::size_t>> buf_;
};

}  // namespace

std::size_t DecisionTree::predict(const std::vector<double>& x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return argmax(nodes[i].class_counts);
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (nodes[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

ForestModel ForestModel::train(const FeatureMatrix& data, const ForestParams& params) {
  if (data.empty()) throw ModelError("cannot train on an empty matrix");
  if (data.feature_ids().empty()) throw ModelError("cannot train without features");
  if (params.n_trees == 0) throw ModelError("n_trees must be positive");
  if (params.min_samples_leaf == 0) throw ModelError("min_samples_leaf must be positive");

  ForestModel model;
  model.params_ = params;
  model.labels_ = data.labels();
  if (model.labels_.size() < 2) throw ModelError("training data has a single class");
  model.feature_ids_ = data.feature_ids();
  const auto x = design_matrix(data, model.feature_ids_);
  std::vector<std::size_t> y(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    y[i] = static_cast<std::size_t>(
        std::lower_bound(model.labels_.begin(), model.labels_.end(), data[i].source) - model.labels_.begin());
  }
  const std::size_t p = model.feature_ids_.size();
  std::size_t mtry = params.max_features == 0 ? static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p))))
                                              : params.max_features;
  mtry = std::clamp<std::size_t>(mtry, 1, p);

  model.trees_.resize(params.n_trees);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < params.n_trees; t = next++) {
      TreeBuilder b(x, y, model.labels_.size(), params, mtry, derive_seed(params.seed, t));
      model.trees_[t] = b.build();
    }
  };
  unsigned threads = params.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : params.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, params.n_trees));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return model;
}

std::size_t ForestModel::predict_one(const std::vector<double>& x, std::vector<double>* votes) const {
  std::vector<double> v(labels_.size(), 0.0);
  for (const auto& t : trees_) v[t.predict(x)] += 1.0;
  const auto best = argmax(v);
  if (votes) {
    for (auto& c : v) c /= static_cast<double>(trees_.size());
    *votes = std::move(v);
  }
  return best;
}

Prediction ForestModel::predict(const FeatureMatrix& rows) const {
  const auto x = design_matrix(rows, feature_ids_);
  Prediction out;
  out.labels.reserve(x.size());
  out.scores.reserve(x.size());
  for (const auto& row : x) {
    std::vector<double> votes;
    out.labels.push_back(labels_[predict_one(row, &votes)]);
    out.scores.push_back(std::move(votes));
  }
  return out;
}

ImportanceRanking ForestModel::gini_importance(bool* degenerate) const {
  const std::size_t p = feature_ids_.size();
  std::vector<double> total(p, 0.0);
  std::size_t used = 0;
  for (const auto& t : trees_) {
    std::vector<double> imp(p, 0.0);
    double sum = 0;
    for (const auto& n : t.nodes) {
      if (n.feature < 0) continue;
      imp[static_cast<std::size_t>(n.feature)] += n.impurity_decrease;
      sum += n.impurity_decrease;
    }
    if (!(sum > 0)) continue;
    ++used;
    for (std::size_t j = 0; j < p; ++j) total[j] += imp[j] / sum;
  }
  const bool flat = used == 0;
  if (degenerate) *degenerate = flat;
  const double norm = std::accumulate(total.begin(), total.end(), 0.0);
  ImportanceRanking r;
  for (std::size_t j = 0; j < p; ++j) {
    r.emplace_back(feature_ids_[j], flat ? 1.0 / static_cast<double>(p) : total[j] / norm);
  }
  std::stable_sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return r;
}

namespace {

nlohmann::json node_to_json(const DecisionTree& t, std::size_t i) {
  const auto& n = t.nodes[i];
  if (n.feature < 0) return {{"counts", n.class_counts}};
  return {{"feature", n.feature},
          {"threshold", n.threshold},
          {"decrease", n.impurity_decrease},
          {"left", node_to_json(t, static_cast<std::size_t>(n.left))},
          {"right", node_to_json(t, static_cast<std::size_t>(n.right))}};
}

// Appends the subtree in preorder and returns its root index.
int node_from_json(const nlohmann::json& j, DecisionTree& t, int features, std::size_t classes) {
  const int at = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  if (j.contains("counts")) {
    auto counts = j.at("counts").get<std::vector<double>>();
    if (counts.size() != classes) throw ModelError("malformed forest model: leaf width does not match labels");
    t.nodes[static_cast<std::size_t>(at)].class_counts = std::move(counts);
    return at;
  }
  const int feature = j.at("feature").get<int>();
  if (feature < 0 || feature >= features) throw ModelError("malformed forest model: feature index out of range");
  const double threshold = j.at("threshold").get<double>();
  const double decrease = j.at("decrease").get<double>();
  const int left = node_from_json(j.at("left"), t, features, classes);
  const int right = node_from_json(j.at("right"), t, features, classes);
  auto& n = t.nodes[static_cast<std::size_t>(at)];
  n.feature = feature;
  n.threshold = threshold;
  n.impurity_decrease = decrease;
  n.left = left;
  n.right = right;
  return at;
}

}  // namespace

nlohmann::json ForestModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(node_to_json(t, 0));
  return {{"labels", labels_},
          {"feature_ids", feature_ids_},
          {"params",
           {{"n_trees", params_.n_trees},
            {"max_features", params_.max_features},
            {"min_samples_leaf", params_.min_samples_leaf},
            {"max_depth", params_.max_depth},
            {"bootstrap", params_.bootstrap},
            {"seed", params_.seed}}},
          {"trees", std::move(trees)}};
}

ForestModel ForestModel::from_json(const nlohmann::json& j) {
  ForestModel m;
  try {
    m.labels_ = j.at("labels").get<std::vector<std::string>>();
    m.feature_ids_ = j.at("feature_ids").get<std::vector<std::string>>();
    const auto& p = j.at("params");
    m.params_.n_trees = p.at("n_trees").get<std::size_t>();
    m.params_.max_features = p.at("max_features").get<std::size_t>();
    m.params_.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
    m.params_.max_depth = p.at("max_depth").get<std::size_t>();
    m.params_.bootstrap = p.at("bootstrap").get<bool>();
    m.params_.seed = p.at("seed").get<std::uint64_t>();
    for (const auto& jt : j.at("trees")) {
      DecisionTree t;
      node_from_json(jt, t, static_cast<int>(m.feature_ids_.size()), m.labels_.size());
      m.trees_.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed forest model: ") + e.what());
  }
  if (m.trees_.empty()) throw ModelError("malformed forest model: no trees");
  return m;
}

}  // namespace stylo
