#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lmotif/corpus.hpp"
#include "lmotif/motifs.hpp"

namespace lmotif {

enum class FeatureVersion { kV1, kV2, kMfw };

std::string_view version_name(FeatureVersion version);  // "v1" | "v2" | "mfw"
FeatureVersion parse_version(std::string_view text);    // kInvalidArgument

// Tracked words ordered by descending training frequency, ties broken by
// byte-wise ascending word.
struct WordSet {
  std::vector<std::string> words;
  std::string origin;
};

// Throws kInvalidArgument for k == 0 or no training documents, and
// kInsufficientVocabulary when fewer than k distinct words exist.
WordSet select_top_words(std::span<const Document> training, std::size_t k,
                         std::string origin = {});
// Same, restricted to docs[rows[i]].
WordSet select_top_words(std::span<const Document> docs,
                         std::span<const std::size_t> rows, std::size_t k,
                         std::string origin = {});

// Exact numerator/denominator pair. A zero denominator reads as 0.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 0;

  double value() const {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

// Length 13*|W|, words outer, motifs inner: ñ(w,m) / n(m).
std::vector<Ratio> features_v1_exact(const LabelledCensus& census,
                                     const WordSet& words);
// Length 30*|W|, words outer, then motif, then orbit: ñ(w,m,o) / n(m).
std::vector<Ratio> features_v2_exact(const LabelledCensus& census,
                                     const WordSet& words);

struct WordFrequencies {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  static WordFrequencies of(const Tokens& tokens);
};

// count(w) / |tokens|. Throws kInvalidArgument for an empty token sequence.
std::vector<Ratio> features_mfw_exact(const Tokens& tokens,
                                      const WordSet& words);
std::vector<Ratio> features_mfw_exact(const WordFrequencies& freq,
                                      const WordSet& words);

std::vector<double> to_values(std::span<const Ratio> ratios);

std::vector<double> features_v1(const LabelledCensus& census,
                                const WordSet& words);
std::vector<double> features_v2(const LabelledCensus& census,
                                const WordSet& words);
std::vector<double> features_mfw(const Tokens& tokens, const WordSet& words);

// `WORD|mK` (v1), `WORD|mK|oJ` (v2, J 1-based), `WORD` (mfw).
std::vector<std::string> feature_names(FeatureVersion version,
                                       const WordSet& words);

struct FeatureMatrix {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;

  std::size_t column(std::string_view name) const;  // kSchema when absent
};

// Everything a document contributes to any feature version for words drawn
// from `vocabulary`. Lets cross-validation rebuild matrices for many word
// sets without recounting motifs.
class DocumentProfile {
 public:
  DocumentProfile(const Document& doc,
                  const std::vector<std::string>& vocabulary,
                  bool with_motifs);

  std::vector<double> features(FeatureVersion version,
                               const WordSet& words) const;

 private:
  WordFrequencies freq_;
  LabelledCensus census_;
  bool with_motifs_;
};

std::vector<DocumentProfile> build_profiles(
    std::span<const Document> docs, const std::vector<std::string>& vocabulary,
    bool with_motifs, unsigned jobs = 1);

FeatureMatrix assemble_matrix(std::span<const DocumentProfile> profiles,
                              std::span<const Document> docs,
                              std::span<const std::size_t> rows,
                              FeatureVersion version, const WordSet& words);

FeatureMatrix extract_features(std::span<const Document> docs,
                               const WordSet& words, FeatureVersion version,
                               unsigned jobs = 1);

// Header `label,<names>`; one row per document.
std::string feature_matrix_csv(const FeatureMatrix& matrix);

}  // namespace lmotif
