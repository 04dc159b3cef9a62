#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lmotif/features.hpp"

namespace lmotif {

enum class Algorithm { kDecisionTree, kKnn, kLinearSvm, kNaiveBayes };

// Canonical ids: "tree", "knn", "svm", "bayes". parse_algorithm also accepts
// "j48", "decision_tree", "linear_svm", "nb" and "naive_bayes".
std::string_view algorithm_name(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view text);

struct ClassifierSpec {
  Algorithm algorithm = Algorithm::kLinearSvm;
  std::size_t knn_k = 1;
  double nb_variance_floor = 1e-9;
  double svm_c = 1.0;
  double svm_tolerance = 1e-3;
  int svm_max_epochs = 1000;
  std::uint64_t svm_seed = 1;
  std::size_t tree_min_leaf = 2;
};

class Model {
 public:
  virtual ~Model() = default;

  // Throws kSchema when the column names differ from the training columns.
  std::vector<std::string> predict(const FeatureMatrix& x) const;
  virtual std::string predict_one(std::span<const double> row) const = 0;

  const std::vector<std::string>& feature_names() const { return names_; }
  // Sorted ascending.
  const std::vector<std::string>& classes() const { return classes_; }

 protected:
  // Records the schema and sorted class list; throws kInvalidArgument on
  // ragged rows or a row/label count mismatch.
  void init_schema(const FeatureMatrix& train);

  std::vector<std::string> names_;
  std::vector<std::string> classes_;
};

using Trainer = std::function<std::unique_ptr<Model>(const FeatureMatrix&)>;

std::unique_ptr<Model> fit(const ClassifierSpec& spec,
                           const FeatureMatrix& train);
Trainer make_trainer(const ClassifierSpec& spec);

class KnnModel final : public Model {
 public:
  KnnModel(const FeatureMatrix& train, std::size_t k);
  std::string predict_one(std::span<const double> row) const override;

 private:
  std::size_t k_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::string> labels_;
};

class GaussianNbModel final : public Model {
 public:
  GaussianNbModel(const FeatureMatrix& train, double variance_floor);
  std::string predict_one(std::span<const double> row) const override;

  // Class posteriors in classes() order, normalized to sum to 1.
  std::vector<double> posteriors(std::span<const double> row) const;
  std::vector<double> log_joint(std::span<const double> row) const;

 private:
  std::vector<double> log_prior_;
  std::vector<std::vector<double>> mean_;
  std::vector<std::vector<double>> variance_;
};

class LinearSvmModel final : public Model {
 public:
  LinearSvmModel(const FeatureMatrix& train, const ClassifierSpec& spec);
  std::string predict_one(std::span<const double> row) const override;

  // Decision value of the machine for classes()[a] (+) vs classes()[b] (-).
  double decision(std::span<const double> row, std::size_t a,
                  std::size_t b) const;

 private:
  struct Machine {
    std::size_t positive;
    std::size_t negative;
    std::vector<double> weights;
    double bias;
  };

  std::vector<double> standardize(std::span<const double> row) const;

  std::vector<double> mean_;
  std::vector<double> scale_;  // 0 for constant training columns
  std::vector<Machine> machines_;
};

class DecisionTreeModel final : public Model {
 public:
  DecisionTreeModel(const FeatureMatrix& train, std::size_t min_leaf);
  std::string predict_one(std::span<const double> row) const override;

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    int feature = -1;  // -1 for leaves
    double threshold = 0.0;
    std::size_t left = 0;   // value <= threshold
    std::size_t right = 0;  // value > threshold
    std::size_t label = 0;
  };

  std::size_t grow(const std::vector<std::vector<double>>& rows,
                   const std::vector<std::size_t>& labels,
                   std::vector<std::size_t> members);

  std::size_t min_leaf_;
  std::vector<Node> nodes_;
};

using FoldAssignment = std::vector<std::size_t>;  // fold index per sample

// Classes are visited in ascending label order; each class's samples are
// shuffled (seeded) and dealt round-robin, continuing from the fold where the
// previous class stopped. Throws kInvalidArgument for k < 2 or k > n.
FoldAssignment stratified_kfold(std::span<const std::string> labels,
                                std::size_t k, std::uint64_t seed);

// Whole groups go to one fold. Empty group strings count as singleton groups.
FoldAssignment group_kfold(std::span<const std::string> labels,
                           std::span<const std::string> groups, std::size_t k,
                           std::uint64_t seed);

struct FoldData {
  FeatureMatrix train;
  FeatureMatrix test;
};

// Builds train/test matrices for one fold from sample indices (ascending).
using FoldHook = std::function<FoldData(std::span<const std::size_t> train,
                                        std::span<const std::size_t> test)>;

struct EvaluationReport {
  std::vector<double> fold_accuracies;  // percent
  double mean_accuracy = 0.0;           // percent
  std::vector<std::string> classes;
  std::vector<std::vector<std::uint64_t>> confusion;  // [actual][predicted]
  std::vector<std::pair<std::string, std::string>> metadata;
};

EvaluationReport cross_validate(const Trainer& trainer,
                                std::span<const std::string> labels,
                                const FoldAssignment& folds, std::size_t k,
                                const FoldHook& hook, unsigned jobs = 1);

std::string report_json(const EvaluationReport& report);
std::string report_table(const EvaluationReport& report);

}  // namespace lmotif
