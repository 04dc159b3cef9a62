#include "lmotif/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "lmotif/csv.hpp"
#include "lmotif/error.hpp"

namespace lmotif {
namespace {

std::string version_label(FeatureVersion v) {
  switch (v) {
    case FeatureVersion::kV1: return "LMV1";
    case FeatureVersion::kV2: return "LMV2";
    case FeatureVersion::kMfw: return "MFW";
  }
  return "?";
}

std::size_t parse_count(std::string_view text) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorCode::kInvalidArgument, "'" + std::string(text) + "' is not a count");
  }
  return value;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (folds < 2) {
    fail(ErrorCode::kInvalidArgument,
         "folds must be at least 2, got " + std::to_string(folds));
  }
  if (versions.empty()) fail(ErrorCode::kInvalidArgument, "no feature version given");
  if (classifiers.empty()) fail(ErrorCode::kInvalidArgument, "no classifier given");
  if (word_counts.empty()) fail(ErrorCode::kInvalidArgument, "no |W| value given");
  for (auto w : word_counts) {
    if (w == 0) fail(ErrorCode::kInvalidArgument, "|W| must be at least 1");
  }
}

std::vector<CellResult> run_experiment(std::span<const Document> docs,
                                       const ExperimentConfig& config,
                                       const CellCallback& on_cell) {
  config.validate();
  std::vector<std::string> labels, groups;
  for (const auto& d : docs) {
    labels.push_back(d.label);
    groups.push_back(d.group);
  }
  const FoldAssignment folds =
      config.group_folds ? group_kfold(labels, groups, config.folds, config.seed)
                         : stratified_kfold(labels, config.folds, config.seed);
  const std::size_t k = config.folds;
  const std::size_t max_words =
      *std::max_element(config.word_counts.begin(), config.word_counts.end());

  // Word rankings per fold. Smaller |W| values are prefixes of the ranking
  // because the order is total.
  std::vector<WordSet> ranking(k);
  if (config.global_words) {
    const WordSet all = select_top_words(docs, max_words, "all documents");
    std::fill(ranking.begin(), ranking.end(), all);
  } else {
    for (std::size_t f = 0; f < k; ++f) {
      std::vector<std::size_t> train;
      for (std::size_t i = 0; i < folds.size(); ++i) {
        if (folds[i] != f) train.push_back(i);
      }
      ranking[f] = select_top_words(docs, train, max_words,
                                    "training folds excluding " + std::to_string(f + 1));
    }
  }
  std::set<std::string> vocab_set;
  for (const auto& ws : ranking) vocab_set.insert(ws.words.begin(), ws.words.end());
  const std::vector<std::string> vocabulary(vocab_set.begin(), vocab_set.end());
  const bool with_motifs =
      std::any_of(config.versions.begin(), config.versions.end(),
                  [](FeatureVersion v) { return v != FeatureVersion::kMfw; });
  const auto profiles = build_profiles(docs, vocabulary, with_motifs, config.jobs);

  std::vector<CellResult> cells;
  for (const auto version : config.versions) {
    for (const auto words : config.word_counts) {
      for (const auto& spec : config.classifiers) {
        FoldHook hook = [&](std::span<const std::size_t> train,
                            std::span<const std::size_t> test) {
          const auto& full = ranking[folds[test.front()]];
          WordSet ws{{full.words.begin(),
                      full.words.begin() + static_cast<std::ptrdiff_t>(words)},
                     full.origin};
          return FoldData{assemble_matrix(profiles, docs, train, version, ws),
                          assemble_matrix(profiles, docs, test, version, ws)};
        };
        CellResult cell{version, spec.algorithm, words,
                        cross_validate(make_trainer(spec), labels, folds, k, hook,
                                       config.jobs)};
        cell.report.metadata = {
            {"version", std::string(version_name(version))},
            {"words", std::to_string(words)},
            {"classifier", std::string(algorithm_name(spec.algorithm))},
            {"folds", std::to_string(k)},
            {"seed", std::to_string(config.seed)},
            {"word_selection", config.global_words ? "global" : "per-fold"},
            {"fold_strategy", config.group_folds ? "group" : "stratified"},
            {"documents", std::to_string(docs.size())},
        };
        if (on_cell) on_cell(cell);
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::string accuracy_table_csv(std::span<const CellResult> cells) {
  std::vector<Algorithm> columns;
  std::vector<std::pair<FeatureVersion, std::size_t>> rows;
  std::map<std::pair<std::pair<int, std::size_t>, int>, double> value;
  for (const auto& c : cells) {
    if (std::find(columns.begin(), columns.end(), c.algorithm) == columns.end()) {
      columns.push_back(c.algorithm);
    }
    const auto row = std::make_pair(c.version, c.words);
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
    value[{{static_cast<int>(c.version), c.words}, static_cast<int>(c.algorithm)}] =
        c.report.mean_accuracy;
  }
  std::ostringstream out;
  out << "features,W";
  for (auto a : columns) out << ',' << algorithm_name(a);
  out << '\n' << std::fixed << std::setprecision(2);
  for (const auto& [version, words] : rows) {
    out << version_label(version) << ',' << words;
    for (auto a : columns) {
      out << ',';
      auto it = value.find({{static_cast<int>(version), words}, static_cast<int>(a)});
      if (it != value.end()) out << it->second;
    }
    out << '\n';
  }
  return out.str();
}

std::string sweep_csv(std::span<const CellResult> cells) {
  std::string out = "W,classifier,version,accuracy\n";
  for (const auto& c : cells) {
    out += std::to_string(c.words) + ',' + std::string(algorithm_name(c.algorithm)) +
           ',' + std::string(version_name(c.version)) + ',' +
           csv::number(c.report.mean_accuracy) + '\n';
  }
  return out;
}

std::string report_file_name(const CellResult& cell) {
  return "report_" + std::string(version_name(cell.version)) + "_w" +
         std::to_string(cell.words) + "_" +
         std::string(algorithm_name(cell.algorithm)) + ".json";
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, "cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) fail(ErrorCode::kIo, "error while writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    fail(ErrorCode::kIo, "cannot move '" + tmp.string() + "' into place: " +
                             ec.message());
  }
}

std::pair<std::size_t, std::size_t> parse_word_range(std::string_view text) {
  const auto dash = text.find('-');
  std::size_t lo, hi;
  if (dash == std::string_view::npos) {
    lo = hi = parse_count(text);
  } else {
    lo = parse_count(text.substr(0, dash));
    hi = parse_count(text.substr(dash + 1));
  }
  if (lo < 1 || lo > hi) {
    fail(ErrorCode::kInvalidArgument,
         "word range '" + std::string(text) + "' must satisfy 1 <= lo <= hi");
  }
  return {lo, hi};
}

std::string scatter_csv(std::span<const Document> docs, FeatureVersion version,
                        std::size_t words, const std::string& x_feature,
                        const std::string& y_feature, unsigned jobs) {
  const WordSet ws = select_top_words(docs, words, "all documents");
  FeatureMatrix schema;
  schema.feature_names = feature_names(version, ws);
  const auto xc = schema.column(x_feature);
  const auto yc = schema.column(y_feature);
  const auto profiles =
      build_profiles(docs, ws.words, version != FeatureVersion::kMfw, jobs);
  std::string out = "label,x,y\n";
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto row = profiles[i].features(version, ws);
    out += csv::field(docs[i].label) + ',' + csv::number(row[xc]) + ',' +
           csv::number(row[yc]) + '\n';
  }
  return out;
}

std::string census_table_csv(const LabelledCensus& census,
                             std::span<const std::string> words,
                             bool with_orbits) {
  std::string out = "motif_id,count\n";
  for (MotifId m = 1; m <= kMotifCount; ++m) {
    out += std::to_string(m) + ',' + std::to_string(census.motif_count(m)) + '\n';
  }
  if (words.empty()) return out;
  out += with_orbits ? "\nword,motif_id,orbit,count\n" : "\nword,motif_id,count\n";
  for (const auto& w : words) {
    for (const auto& info : motif_catalog()) {
      if (!with_orbits) {
        out += csv::field(w) + ',' + std::to_string(info.id) + ',' +
               std::to_string(census.word_motif(w, info.id)) + '\n';
        continue;
      }
      for (int o = 0; o < info.orbit_count(); ++o) {
        out += csv::field(w) + ',' + std::to_string(info.id) + ',' +
               std::to_string(o + 1) + ',' +
               std::to_string(census.word_motif_orbit(w, info.id, o)) + '\n';
      }
    }
  }
  return out;
}

}  // namespace lmotif
