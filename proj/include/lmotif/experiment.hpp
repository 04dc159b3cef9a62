#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lmotif/corpus.hpp"
#include "lmotif/features.hpp"
#include "lmotif/learn.hpp"

namespace lmotif {

struct ExperimentConfig {
  std::vector<FeatureVersion> versions{FeatureVersion::kV2};
  std::vector<std::size_t> word_counts{20};
  std::vector<ClassifierSpec> classifiers{ClassifierSpec{}};
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  // Select W once from every document instead of per training fold.
  bool global_words = false;
  // Keep documents sharing a manifest group in the same fold.
  bool group_folds = false;

  void validate() const;  // kInvalidArgument
};

struct CellResult {
  FeatureVersion version;
  Algorithm algorithm;
  std::size_t words;
  EvaluationReport report;
};

using CellCallback = std::function<void(const CellResult&)>;

// One cross-validated report per (version, |W|, classifier) cell, in that
// nesting order. `on_cell` runs as each cell completes.
std::vector<CellResult> run_experiment(std::span<const Document> docs,
                                       const ExperimentConfig& config,
                                       const CellCallback& on_cell = {});

// Rows: features,W,<one column per classifier>. Cells hold mean accuracy.
std::string accuracy_table_csv(std::span<const CellResult> cells);

// Rows: W,classifier,version,accuracy.
std::string sweep_csv(std::span<const CellResult> cells);

std::string report_file_name(const CellResult& cell);

// Writes `contents` to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

// Parses "lo-hi" or a single "n"; requires 1 <= lo <= hi.
std::pair<std::size_t, std::size_t> parse_word_range(std::string_view text);

// Rows `label,x,y`, one per document. W = the `words` most frequent words of
// the whole dataset. Unknown names raise kSchema listing the valid ones.
std::string scatter_csv(std::span<const Document> docs, FeatureVersion version,
                        std::size_t words, const std::string& x_feature,
                        const std::string& y_feature, unsigned jobs = 1);

// `motif_id,count` block; with tracked words a `word,motif_id,count` block
// follows, or `word,motif_id,orbit,count` (orbit 1-based) when with_orbits.
std::string census_table_csv(const LabelledCensus& census,
                             std::span<const std::string> words,
                             bool with_orbits);

}  // namespace lmotif
