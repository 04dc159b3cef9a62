#include "lmotif/learn.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lmotif/error.hpp"
#include "lmotif/parallel.hpp"
#include "lmotif/rng.hpp"

namespace lmotif {
namespace {

// Row order used by every learner whose arithmetic could otherwise depend on
// how the training rows happen to be listed.
std::vector<std::size_t> canonical_order(const FeatureMatrix& train) {
  std::vector<std::size_t> order(train.rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (train.labels[a] != train.labels[b]) return train.labels[a] < train.labels[b];
    return train.rows[a] < train.rows[b];
  });
  return order;
}

std::size_t class_index(const std::vector<std::string>& classes,
                        const std::string& label) {
  auto it = std::lower_bound(classes.begin(), classes.end(), label);
  return static_cast<std::size_t>(it - classes.begin());
}

double entropy(std::span<const std::size_t> counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

std::size_t majority(std::span<const std::size_t> counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

}  // namespace

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kDecisionTree: return "tree";
    case Algorithm::kKnn: return "knn";
    case Algorithm::kLinearSvm: return "svm";
    case Algorithm::kNaiveBayes: return "bayes";
  }
  return "svm";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "tree" || text == "j48" || text == "decision_tree") {
    return Algorithm::kDecisionTree;
  }
  if (text == "knn") return Algorithm::kKnn;
  if (text == "svm" || text == "linear_svm") return Algorithm::kLinearSvm;
  if (text == "bayes" || text == "nb" || text == "naive_bayes") {
    return Algorithm::kNaiveBayes;
  }
  fail(ErrorCode::kInvalidArgument, "unknown classifier '" + std::string(text) +
                                        "' (tree, knn, svm, bayes)");
}

void Model::init_schema(const FeatureMatrix& train) {
  if (train.rows.size() != train.labels.size()) {
    fail(ErrorCode::kInvalidArgument, "feature rows and labels differ in count");
  }
  if (train.rows.empty()) {
    fail(ErrorCode::kInvalidArgument, "cannot fit on an empty training set");
  }
  for (const auto& row : train.rows) {
    if (row.size() != train.feature_names.size()) {
      fail(ErrorCode::kInvalidArgument,
           "feature row length does not match the column count");
    }
  }
  names_ = train.feature_names;
  std::set<std::string> classes(train.labels.begin(), train.labels.end());
  classes_.assign(classes.begin(), classes.end());
}

std::vector<std::string> Model::predict(const FeatureMatrix& x) const {
  if (x.feature_names != names_) {
    fail(ErrorCode::kSchema,
         "prediction columns do not match the training columns");
  }
  std::vector<std::string> out;
  out.reserve(x.rows.size());
  for (const auto& row : x.rows) {
    if (row.size() != names_.size()) {
      fail(ErrorCode::kSchema, "prediction row has the wrong length");
    }
    out.push_back(predict_one(row));
  }
  return out;
}

// ---- kNN ----------------------------------------------------------------

KnnModel::KnnModel(const FeatureMatrix& train, std::size_t k) : k_(k) {
  init_schema(train);
  if (k == 0) fail(ErrorCode::kInvalidArgument, "kNN needs k >= 1");
  rows_ = train.rows;
  labels_ = train.labels;
}

std::string KnnModel::predict_one(std::span<const double> row) const {
  std::vector<std::pair<double, const std::string*>> scored;
  scored.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double diff = rows_[i][j] - row[j];
      d += diff * diff;
    }
    scored.emplace_back(d, &labels_[i]);
  }
  const std::size_t k = std::min(k_, scored.size());
  auto less = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : *a.second < *b.second;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                    scored.end(), less);
  std::map<std::string, std::size_t> votes;
  for (std::size_t i = 0; i < k; ++i) ++votes[*scored[i].second];
  // std::map iterates labels ascending, so strict > keeps the smallest on ties.
  const std::string* best = nullptr;
  std::size_t best_votes = 0;
  for (const auto& [label, n] : votes) {
    if (n > best_votes) {
      best = &label;
      best_votes = n;
    }
  }
  return *best;
}

// ---- Gaussian naive Bayes -----------------------------------------------

GaussianNbModel::GaussianNbModel(const FeatureMatrix& train,
                                 double variance_floor) {
  init_schema(train);
  const std::size_t c = classes_.size();
  const std::size_t d = names_.size();
  std::vector<std::size_t> count(c, 0);
  mean_.assign(c, std::vector<double>(d, 0.0));
  variance_.assign(c, std::vector<double>(d, 0.0));
  const auto order = canonical_order(train);
  for (auto r : order) {
    const auto k = class_index(classes_, train.labels[r]);
    ++count[k];
    for (std::size_t j = 0; j < d; ++j) mean_[k][j] += train.rows[r][j];
  }
  for (std::size_t k = 0; k < c; ++k) {
    for (auto& m : mean_[k]) m /= static_cast<double>(count[k]);
  }
  for (auto r : order) {
    const auto k = class_index(classes_, train.labels[r]);
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = train.rows[r][j] - mean_[k][j];
      variance_[k][j] += diff * diff;
    }
  }
  log_prior_.resize(c);
  const auto n = static_cast<double>(train.rows.size());
  for (std::size_t k = 0; k < c; ++k) {
    for (auto& v : variance_[k]) {
      v = std::max(v / static_cast<double>(count[k]), variance_floor);
    }
    log_prior_[k] = std::log(static_cast<double>(count[k]) / n);
  }
}

std::vector<double> GaussianNbModel::log_joint(std::span<const double> row) const {
  std::vector<double> out(classes_.size());
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    double s = log_prior_[k];
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double v = variance_[k][j];
      const double diff = row[j] - mean_[k][j];
      s -= 0.5 * std::log(2.0 * std::numbers::pi * v) + diff * diff / (2.0 * v);
    }
    out[k] = s;
  }
  return out;
}

std::vector<double> GaussianNbModel::posteriors(std::span<const double> row) const {
  auto lj = log_joint(row);
  const double top = *std::max_element(lj.begin(), lj.end());
  double total = 0.0;
  for (auto& v : lj) {
    v = std::exp(v - top);
    total += v;
  }
  for (auto& v : lj) v /= total;
  return lj;
}

std::string GaussianNbModel::predict_one(std::span<const double> row) const {
  const auto lj = log_joint(row);
  std::size_t best = 0;
  for (std::size_t k = 1; k < lj.size(); ++k) {
    if (lj[k] > lj[best]) best = k;
  }
  return classes_[best];
}

// ---- linear SVM ---------------------------------------------------------

LinearSvmModel::LinearSvmModel(const FeatureMatrix& train,
                               const ClassifierSpec& spec) {
  init_schema(train);
  if (classes_.size() < 2) {
    fail(ErrorCode::kDegenerateTraining,
         "linear SVM needs at least two classes, got only '" + classes_[0] + "'");
  }
  const std::size_t d = names_.size();
  const auto order = canonical_order(train);
  const auto n = static_cast<double>(order.size());

  mean_.assign(d, 0.0);
  scale_.assign(d, 0.0);
  for (auto r : order) {
    for (std::size_t j = 0; j < d; ++j) mean_[j] += train.rows[r][j];
  }
  for (auto& m : mean_) m /= n;
  for (auto r : order) {
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = train.rows[r][j] - mean_[j];
      scale_[j] += diff * diff;
    }
  }
  for (auto& s : scale_) {
    const double sd = std::sqrt(s / n);
    s = sd > 0.0 ? 1.0 / sd : 0.0;
  }

  std::vector<std::vector<double>> x;
  std::vector<std::size_t> y;
  x.reserve(order.size());
  for (auto r : order) {
    x.push_back(standardize(train.rows[r]));
    y.push_back(class_index(classes_, train.labels[r]));
  }

  // Dual coordinate descent for the L1-loss SVM; the bias is folded in as a
  // constant feature of value 1.
  for (std::size_t a = 0; a < classes_.size(); ++a) {
    for (std::size_t b = a + 1; b < classes_.size(); ++b) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == a || y[i] == b) members.push_back(i);
      }
      const std::size_t m = members.size();
      std::vector<double> sign(m), qii(m), alpha(m, 0.0);
      for (std::size_t t = 0; t < m; ++t) {
        const auto& xi = x[members[t]];
        sign[t] = y[members[t]] == a ? 1.0 : -1.0;
        qii[t] = 1.0 + std::inner_product(xi.begin(), xi.end(), xi.begin(), 0.0);
      }
      std::vector<double> w(d, 0.0);
      double bias = 0.0;
      std::vector<std::size_t> visit(m);
      std::iota(visit.begin(), visit.end(), 0);
      Rng rng(spec.svm_seed);
      for (int epoch = 0; epoch < spec.svm_max_epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(visit));
        double max_pg = -std::numeric_limits<double>::infinity();
        double min_pg = std::numeric_limits<double>::infinity();
        for (auto t : visit) {
          const auto& xi = x[members[t]];
          const double g =
              sign[t] * (std::inner_product(w.begin(), w.end(), xi.begin(), 0.0) + bias) -
              1.0;
          double pg = g;
          if (alpha[t] <= 0.0) {
            pg = std::min(g, 0.0);
          } else if (alpha[t] >= spec.svm_c) {
            pg = std::max(g, 0.0);
          }
          max_pg = std::max(max_pg, pg);
          min_pg = std::min(min_pg, pg);
          if (pg != 0.0) {
            const double old = alpha[t];
            alpha[t] = std::clamp(old - g / qii[t], 0.0, spec.svm_c);
            const double step = (alpha[t] - old) * sign[t];
            for (std::size_t j = 0; j < d; ++j) w[j] += step * xi[j];
            bias += step;
          }
        }
        if (max_pg - min_pg < spec.svm_tolerance) break;
      }
      machines_.push_back({a, b, std::move(w), bias});
    }
  }
}

std::vector<double> LinearSvmModel::standardize(std::span<const double> row) const {
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    out[j] = (row[j] - mean_[j]) * scale_[j];
  }
  return out;
}

double LinearSvmModel::decision(std::span<const double> row, std::size_t a,
                                std::size_t b) const {
  const auto z = standardize(row);
  for (const auto& m : machines_) {
    if (m.positive == a && m.negative == b) {
      return std::inner_product(m.weights.begin(), m.weights.end(), z.begin(),
                                0.0) + m.bias;
    }
  }
  fail(ErrorCode::kInvalidArgument, "no machine for that class pair");
}

std::string LinearSvmModel::predict_one(std::span<const double> row) const {
  const auto z = standardize(row);
  std::vector<std::size_t> votes(classes_.size(), 0);
  for (const auto& m : machines_) {
    const double f =
        std::inner_product(m.weights.begin(), m.weights.end(), z.begin(), 0.0) +
        m.bias;
    ++votes[f >= 0.0 ? m.positive : m.negative];
  }
  return classes_[majority(votes)];
}

// ---- decision tree ------------------------------------------------------

DecisionTreeModel::DecisionTreeModel(const FeatureMatrix& train,
                                     std::size_t min_leaf)
    : min_leaf_(std::max<std::size_t>(min_leaf, 1)) {
  init_schema(train);
  const auto order = canonical_order(train);
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> labels;
  rows.reserve(order.size());
  for (auto r : order) {
    rows.push_back(train.rows[r]);
    labels.push_back(class_index(classes_, train.labels[r]));
  }
  std::vector<std::size_t> members(rows.size());
  std::iota(members.begin(), members.end(), 0);
  grow(rows, labels, std::move(members));
}

std::size_t DecisionTreeModel::grow(const std::vector<std::vector<double>>& rows,
                                    const std::vector<std::size_t>& labels,
                                    std::vector<std::size_t> members) {
  const std::size_t c = classes_.size();
  std::vector<std::size_t> counts(c, 0);
  for (auto i : members) ++counts[labels[i]];

  const std::size_t here = nodes_.size();
  nodes_.push_back(Node{-1, 0.0, 0, 0, majority(counts)});

  const std::size_t n = members.size();
  const bool pure = std::count(counts.begin(), counts.end(), 0) ==
                    static_cast<std::ptrdiff_t>(c - 1);
  if (pure || n < 2 * min_leaf_) return here;

  const double parent_h = entropy(counts, n);
  struct Candidate {
    int feature;
    double threshold;
    double gain;
    double ratio;
  };
  std::vector<Candidate> candidates;
  std::vector<std::size_t> sorted = members;
  std::vector<std::size_t> left(c), right(c);
  const std::size_t d = names_.size();
  for (std::size_t f = 0; f < d; ++f) {
    std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
      return rows[a][f] != rows[b][f] ? rows[a][f] < rows[b][f] : a < b;
    });
    std::fill(left.begin(), left.end(), 0);
    right = counts;
    double best_gain = 0.0;
    double best_ratio = 0.0;
    double best_threshold = 0.0;
    bool found = false;
    for (std::size_t i = 1; i < n; ++i) {
      const auto moved = labels[sorted[i - 1]];
      ++left[moved];
      --right[moved];
      const double lo = rows[sorted[i - 1]][f];
      const double hi = rows[sorted[i]][f];
      if (lo == hi || i < min_leaf_ || n - i < min_leaf_) continue;
      const double pl = static_cast<double>(i) / static_cast<double>(n);
      const double pr = 1.0 - pl;
      const double gain = parent_h - pl * entropy(left, i) - pr * entropy(right, n - i);
      if (gain > best_gain + 1e-12) {
        const double split_info = -pl * std::log2(pl) - pr * std::log2(pr);
        best_gain = gain;
        best_ratio = gain / split_info;
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid >= lo && mid < hi)) mid = lo;
        best_threshold = mid;
        found = true;
      }
    }
    if (found) {
      candidates.push_back({static_cast<int>(f), best_threshold, best_gain, best_ratio});
    }
  }
  if (candidates.empty()) return here;

  // Gain ratio among candidates whose gain is at least average.
  double mean_gain = 0.0;
  for (const auto& cand : candidates) mean_gain += cand.gain;
  mean_gain /= static_cast<double>(candidates.size());
  const Candidate* best = nullptr;
  for (const auto& cand : candidates) {
    if (cand.gain + 1e-12 < mean_gain) continue;
    if (best == nullptr || cand.ratio > best->ratio) best = &cand;
  }

  std::vector<std::size_t> go_left, go_right;
  for (auto i : members) {
    (rows[i][static_cast<std::size_t>(best->feature)] <= best->threshold ? go_left
                                                                         : go_right)
        .push_back(i);
  }
  const int feature = best->feature;
  const double threshold = best->threshold;
  const std::size_t l = grow(rows, labels, std::move(go_left));
  const std::size_t r = grow(rows, labels, std::move(go_right));
  nodes_[here].feature = feature;
  nodes_[here].threshold = threshold;
  nodes_[here].left = l;
  nodes_[here].right = r;
  return here;
}

std::string DecisionTreeModel::predict_one(std::span<const double> row) const {
  std::size_t at = 0;
  while (nodes_[at].feature >= 0) {
    const auto& node = nodes_[at];
    at = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                       : node.right;
  }
  return classes_[nodes_[at].label];
}

// ---- dispatch -----------------------------------------------------------

std::unique_ptr<Model> fit(const ClassifierSpec& spec, const FeatureMatrix& train) {
  switch (spec.algorithm) {
    case Algorithm::kKnn:
      return std::make_unique<KnnModel>(train, spec.knn_k);
    case Algorithm::kNaiveBayes:
      return std::make_unique<GaussianNbModel>(train, spec.nb_variance_floor);
    case Algorithm::kLinearSvm:
      return std::make_unique<LinearSvmModel>(train, spec);
    case Algorithm::kDecisionTree:
      return std::make_unique<DecisionTreeModel>(train, spec.tree_min_leaf);
  }
  fail(ErrorCode::kInvalidArgument, "unknown classifier");
}

Trainer make_trainer(const ClassifierSpec& spec) {
  return [spec](const FeatureMatrix& train) { return fit(spec, train); };
}

// ---- folds --------------------------------------------------------------

FoldAssignment stratified_kfold(std::span<const std::string> labels,
                                std::size_t k, std::uint64_t seed) {
  if (k < 2) fail(ErrorCode::kInvalidArgument, "need at least 2 folds");
  if (k > labels.size()) {
    fail(ErrorCode::kInvalidArgument,
         std::to_string(k) + " folds requested for " +
             std::to_string(labels.size()) + " samples");
  }
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  Rng rng(seed);
  FoldAssignment folds(labels.size(), 0);
  std::size_t next = 0;
  for (auto& [label, members] : by_class) {
    rng.shuffle(std::span<std::size_t>(members));
    for (auto i : members) {
      folds[i] = next;
      next = (next + 1) % k;
    }
  }
  return folds;
}

FoldAssignment group_kfold(std::span<const std::string> labels,
                           std::span<const std::string> groups, std::size_t k,
                           std::uint64_t seed) {
  if (labels.size() != groups.size()) {
    fail(ErrorCode::kInvalidArgument, "labels and groups differ in length");
  }
  if (k < 2) fail(ErrorCode::kInvalidArgument, "need at least 2 folds");
  // group key -> members; anonymous samples are their own group
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string key =
        groups[i].empty() ? "\x01" + std::to_string(i) : "\x02" + groups[i];
    members[key].push_back(i);
  }
  if (k > members.size()) {
    fail(ErrorCode::kInvalidArgument,
         std::to_string(k) + " folds requested for " +
             std::to_string(members.size()) + " groups");
  }
  // Bucket groups by the label of their first member, then deal each bucket
  // round-robin like stratified_kfold.
  std::map<std::string, std::vector<const std::vector<std::size_t>*>> by_class;
  for (const auto& [key, idx] : members) by_class[labels[idx.front()]].push_back(&idx);
  Rng rng(seed);
  FoldAssignment folds(labels.size(), 0);
  std::size_t next = 0;
  for (auto& [label, bucket] : by_class) {
    rng.shuffle(std::span<const std::vector<std::size_t>*>(bucket));
    for (const auto* g : bucket) {
      for (auto i : *g) folds[i] = next;
      next = (next + 1) % k;
    }
  }
  return folds;
}

// ---- evaluation ---------------------------------------------------------

EvaluationReport cross_validate(const Trainer& trainer,
                                std::span<const std::string> labels,
                                const FoldAssignment& folds, std::size_t k,
                                const FoldHook& hook, unsigned jobs) {
  if (folds.size() != labels.size()) {
    fail(ErrorCode::kInvalidArgument, "fold assignment does not match labels");
  }
  if (k < 2) fail(ErrorCode::kInvalidArgument, "need at least 2 folds");
  std::set<std::string> class_set(labels.begin(), labels.end());
  EvaluationReport report;
  report.classes.assign(class_set.begin(), class_set.end());
  const std::size_t c = report.classes.size();

  struct FoldResult {
    double accuracy = 0.0;
    std::vector<std::vector<std::uint64_t>> confusion;
  };
  std::vector<FoldResult> results(k);
  parallel_for(k, jobs, [&](std::size_t f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < folds.size(); ++i) {
      (folds[i] == f ? test : train).push_back(i);
    }
    if (test.empty() || train.empty()) {
      fail(ErrorCode::kInvalidArgument, "fold " + std::to_string(f + 1) + " is empty");
    }
    const FoldData data = hook(train, test);
    const auto model = trainer(data.train);
    const auto predicted = model->predict(data.test);
    auto& res = results[f];
    res.confusion.assign(c, std::vector<std::uint64_t>(c, 0));
    std::size_t correct = 0;
    for (std::size_t t = 0; t < test.size(); ++t) {
      const auto& actual = labels[test[t]];
      if (predicted[t] == actual) ++correct;
      ++res.confusion[class_index(report.classes, actual)]
                     [class_index(report.classes, predicted[t])];
    }
    res.accuracy = 100.0 * static_cast<double>(correct) /
                   static_cast<double>(test.size());
  });

  report.confusion.assign(c, std::vector<std::uint64_t>(c, 0));
  double sum = 0.0;
  for (const auto& res : results) {
    report.fold_accuracies.push_back(res.accuracy);
    sum += res.accuracy;
    for (std::size_t a = 0; a < c; ++a) {
      for (std::size_t p = 0; p < c; ++p) report.confusion[a][p] += res.confusion[a][p];
    }
  }
  report.mean_accuracy = sum / static_cast<double>(k);
  return report;
}

std::string report_json(const EvaluationReport& report) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.metadata) meta[key] = value;
  j["metadata"] = meta;
  j["classes"] = report.classes;
  j["fold_accuracies"] = report.fold_accuracies;
  j["mean_accuracy"] = report.mean_accuracy;
  j["confusion_matrix"] = report.confusion;
  return j.dump(2) + "\n";
}

std::string report_table(const EvaluationReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  for (const auto& [key, value] : report.metadata) {
    out << key << ": " << value << '\n';
  }
  for (std::size_t f = 0; f < report.fold_accuracies.size(); ++f) {
    out << "fold " << std::setw(2) << f + 1 << "  " << std::setw(6)
        << report.fold_accuracies[f] << "%\n";
  }
  out << "mean     " << std::setw(6) << report.mean_accuracy << "%\n";
  std::size_t width = 9;
  for (const auto& c : report.classes) width = std::max(width, c.size() + 2);
  out << "confusion (rows actual, columns predicted)\n"
      << std::setw(static_cast<int>(width)) << "";
  for (const auto& c : report.classes) out << std::setw(static_cast<int>(width)) << c;
  out << '\n';
  for (std::size_t a = 0; a < report.classes.size(); ++a) {
    out << std::setw(static_cast<int>(width)) << report.classes[a];
    for (auto v : report.confusion[a]) out << std::setw(static_cast<int>(width)) << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace lmotif
