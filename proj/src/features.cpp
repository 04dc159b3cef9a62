#include "lmotif/features.hpp"

#include <algorithm>
#include <optional>

#include "lmotif/csv.hpp"
#include "lmotif/error.hpp"
#include "lmotif/parallel.hpp"

namespace lmotif {

std::string_view version_name(FeatureVersion version) {
  switch (version) {
    case FeatureVersion::kV1: return "v1";
    case FeatureVersion::kV2: return "v2";
    case FeatureVersion::kMfw: return "mfw";
  }
  return "v1";
}

FeatureVersion parse_version(std::string_view text) {
  if (text == "v1" || text == "lmv1") return FeatureVersion::kV1;
  if (text == "v2" || text == "lmv2") return FeatureVersion::kV2;
  if (text == "mfw") return FeatureVersion::kMfw;
  fail(ErrorCode::kInvalidArgument,
       "unknown feature version '" + std::string(text) + "' (v1, v2, mfw)");
}

WordSet select_top_words(std::span<const Document> training, std::size_t k,
                         std::string origin) {
  std::vector<std::size_t> rows(training.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return select_top_words(training, rows, k, std::move(origin));
}

WordSet select_top_words(std::span<const Document> docs,
                         std::span<const std::size_t> rows, std::size_t k,
                         std::string origin) {
  if (k == 0) fail(ErrorCode::kInvalidArgument, "|W| must be at least 1");
  if (rows.empty()) {
    fail(ErrorCode::kInvalidArgument, "no training documents to select W from");
  }
  std::unordered_map<std::string, std::uint64_t> freq;
  for (auto r : rows) {
    for (const auto& t : docs[r].tokens) ++freq[t];
  }
  if (freq.size() < k) {
    fail(ErrorCode::kInsufficientVocabulary,
         "training data has " + std::to_string(freq.size()) +
             " distinct words, fewer than |W| = " + std::to_string(k));
  }
  std::vector<std::pair<std::string, std::uint64_t>> ranked(freq.begin(),
                                                            freq.end());
  auto by_rank = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  std::partial_sort(ranked.begin(),
                    ranked.begin() + static_cast<std::ptrdiff_t>(k),
                    ranked.end(), by_rank);
  WordSet out;
  out.origin = std::move(origin);
  out.words.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.words.push_back(ranked[i].first);
  return out;
}

std::vector<Ratio> features_v1_exact(const LabelledCensus& census,
                                     const WordSet& words) {
  std::vector<Ratio> out;
  out.reserve(words.words.size() * kMotifCount);
  for (const auto& w : words.words) {
    for (MotifId m = 1; m <= kMotifCount; ++m) {
      out.push_back({census.word_motif(w, m), census.motif_count(m)});
    }
  }
  return out;
}

std::vector<Ratio> features_v2_exact(const LabelledCensus& census,
                                     const WordSet& words) {
  std::vector<Ratio> out;
  out.reserve(words.words.size() * kOrbitSlots);
  for (const auto& w : words.words) {
    for (const auto& info : motif_catalog()) {
      const auto total = census.motif_count(info.id);
      for (int o = 0; o < info.orbit_count(); ++o) {
        out.push_back({census.word_motif_orbit(w, info.id, o), total});
      }
    }
  }
  return out;
}

WordFrequencies WordFrequencies::of(const Tokens& tokens) {
  WordFrequencies f;
  for (const auto& t : tokens) ++f.counts[t];
  f.total = tokens.size();
  return f;
}

std::vector<Ratio> features_mfw_exact(const WordFrequencies& freq,
                                      const WordSet& words) {
  if (freq.total == 0) {
    fail(ErrorCode::kInvalidArgument, "MFW features need a non-empty document");
  }
  std::vector<Ratio> out;
  out.reserve(words.words.size());
  for (const auto& w : words.words) {
    auto it = freq.counts.find(w);
    out.push_back({it == freq.counts.end() ? 0 : it->second, freq.total});
  }
  return out;
}

std::vector<Ratio> features_mfw_exact(const Tokens& tokens,
                                      const WordSet& words) {
  return features_mfw_exact(WordFrequencies::of(tokens), words);
}

std::vector<double> to_values(std::span<const Ratio> ratios) {
  std::vector<double> out;
  out.reserve(ratios.size());
  for (const auto& r : ratios) out.push_back(r.value());
  return out;
}

std::vector<double> features_v1(const LabelledCensus& census,
                                const WordSet& words) {
  return to_values(features_v1_exact(census, words));
}

std::vector<double> features_v2(const LabelledCensus& census,
                                const WordSet& words) {
  return to_values(features_v2_exact(census, words));
}

std::vector<double> features_mfw(const Tokens& tokens, const WordSet& words) {
  return to_values(features_mfw_exact(tokens, words));
}

std::vector<std::string> feature_names(FeatureVersion version,
                                       const WordSet& words) {
  std::vector<std::string> names;
  for (const auto& w : words.words) {
    switch (version) {
      case FeatureVersion::kMfw:
        names.push_back(w);
        break;
      case FeatureVersion::kV1:
        for (MotifId m = 1; m <= kMotifCount; ++m) {
          names.push_back(w + "|m" + std::to_string(m));
        }
        break;
      case FeatureVersion::kV2:
        for (const auto& info : motif_catalog()) {
          for (int o = 0; o < info.orbit_count(); ++o) {
            names.push_back(w + "|m" + std::to_string(info.id) + "|o" +
                            std::to_string(o + 1));
          }
        }
        break;
    }
  }
  return names;
}

std::size_t FeatureMatrix::column(std::string_view name) const {
  auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) {
    std::string valid;
    for (const auto& n : feature_names) {
      if (!valid.empty()) valid += ", ";
      valid += n;
    }
    fail(ErrorCode::kSchema, "unknown feature '" + std::string(name) +
                                 "'; valid names: " + valid);
  }
  return static_cast<std::size_t>(it - feature_names.begin());
}

DocumentProfile::DocumentProfile(const Document& doc,
                                 const std::vector<std::string>& vocabulary,
                                 bool with_motifs)
    : with_motifs_(with_motifs) {
  freq_.total = doc.tokens.size();
  for (const auto& w : vocabulary) freq_.counts.emplace(w, 0);
  for (const auto& t : doc.tokens) {
    auto it = freq_.counts.find(t);
    if (it != freq_.counts.end()) ++it->second;
  }
  if (with_motifs) {
    census_ = labelled_census(build_network(doc.tokens), &vocabulary);
  }
}

std::vector<double> DocumentProfile::features(FeatureVersion version,
                                              const WordSet& words) const {
  for (const auto& w : words.words) {
    if (!freq_.counts.contains(w)) {
      fail(ErrorCode::kInternal, "word '" + w + "' missing from profile");
    }
  }
  switch (version) {
    case FeatureVersion::kMfw:
      return to_values(features_mfw_exact(freq_, words));
    case FeatureVersion::kV1:
    case FeatureVersion::kV2:
      if (!with_motifs_) {
        fail(ErrorCode::kInternal, "profile was built without motif counts");
      }
      return version == FeatureVersion::kV1 ? features_v1(census_, words)
                                            : features_v2(census_, words);
  }
  return {};
}

std::vector<DocumentProfile> build_profiles(
    std::span<const Document> docs, const std::vector<std::string>& vocabulary,
    bool with_motifs, unsigned jobs) {
  std::vector<std::optional<DocumentProfile>> slots(docs.size());
  parallel_for(docs.size(), jobs, [&](std::size_t i) {
    slots[i].emplace(docs[i], vocabulary, with_motifs);
  });
  std::vector<DocumentProfile> out;
  out.reserve(docs.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

FeatureMatrix assemble_matrix(std::span<const DocumentProfile> profiles,
                              std::span<const Document> docs,
                              std::span<const std::size_t> rows,
                              FeatureVersion version, const WordSet& words) {
  FeatureMatrix m;
  m.feature_names = feature_names(version, words);
  m.rows.reserve(rows.size());
  m.labels.reserve(rows.size());
  for (auto r : rows) {
    m.rows.push_back(profiles[r].features(version, words));
    m.labels.push_back(docs[r].label);
  }
  return m;
}

FeatureMatrix extract_features(std::span<const Document> docs,
                               const WordSet& words, FeatureVersion version,
                               unsigned jobs) {
  const auto profiles = build_profiles(
      docs, words.words, version != FeatureVersion::kMfw, jobs);
  std::vector<std::size_t> rows(docs.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return assemble_matrix(profiles, docs, rows, version, words);
}

std::string feature_matrix_csv(const FeatureMatrix& matrix) {
  std::string out = "label";
  for (const auto& name : matrix.feature_names) {
    out += ',';
    out += csv::field(name);
  }
  out += '\n';
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    out += csv::field(matrix.labels[r]);
    for (double v : matrix.rows[r]) {
      out += ',';
      out += csv::number(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace lmotif
