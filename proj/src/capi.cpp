#include "lmotif/lmotif.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>
#include <vector>

#include "lmotif/corpus.hpp"
#include "lmotif/error.hpp"
#include "lmotif/experiment.hpp"
#include "lmotif/features.hpp"
#include "lmotif/graph.hpp"
#include "lmotif/learn.hpp"
#include "lmotif/motifs.hpp"

struct lm_network {
  lmotif::WordNetwork net;
};

struct lm_census {
  lmotif::LabelledCensus census;
};

struct lm_dataset {
  std::vector<lmotif::Document> docs;
};

namespace {

thread_local std::string g_last_error;

lm_status to_status(lmotif::ErrorCode code) {
  using lmotif::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return LM_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIo: return LM_ERR_IO;
    case ErrorCode::kInsufficientData: return LM_ERR_INSUFFICIENT_DATA;
    case ErrorCode::kInsufficientVocabulary: return LM_ERR_INSUFFICIENT_VOCABULARY;
    case ErrorCode::kInvalidTriad: return LM_ERR_INVALID_TRIAD;
    case ErrorCode::kSchema: return LM_ERR_SCHEMA;
    case ErrorCode::kDegenerateTraining: return LM_ERR_DEGENERATE_TRAINING;
    case ErrorCode::kInternal: return LM_ERR_INTERNAL;
  }
  return LM_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes and the thread-local
// error message.
template <typename Fn>
lm_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return LM_OK;
  } catch (const lmotif::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LM_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) lmotif::fail(lmotif::ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> string_list(const char* const* items, size_t count) {
  std::vector<std::string> out;
  for (size_t i = 0; i < count; ++i) {
    require(items[i] != nullptr, "null string in list");
    out.emplace_back(items[i]);
  }
  return out;
}

lmotif::ExperimentConfig to_config(const lm_experiment_options* o) {
  lmotif::ExperimentConfig cfg;
  require(o != nullptr, "options must not be null");
  require(o->version_count == 0 || o->versions != nullptr, "versions is null");
  require(o->word_count_count == 0 || o->word_counts != nullptr, "word_counts is null");
  require(o->classifier_count == 0 || o->classifiers != nullptr, "classifiers is null");
  cfg.versions.clear();
  for (const auto& v : string_list(o->versions, o->version_count)) {
    cfg.versions.push_back(lmotif::parse_version(v));
  }
  cfg.word_counts.assign(o->word_counts, o->word_counts + o->word_count_count);
  cfg.classifiers.clear();
  for (const auto& c : string_list(o->classifiers, o->classifier_count)) {
    lmotif::ClassifierSpec spec;
    spec.algorithm = lmotif::parse_algorithm(c);
    cfg.classifiers.push_back(spec);
  }
  cfg.folds = o->folds;
  cfg.seed = o->seed;
  cfg.jobs = o->jobs;
  cfg.global_words = o->global_words != 0;
  cfg.group_folds = o->group_folds != 0;
  cfg.validate();
  return cfg;
}

}  // namespace

extern "C" {

const char* lm_status_name(lm_status status) {
  if (status == LM_OK) return "ok";
  if (status < LM_ERR_INVALID_ARGUMENT || status > LM_ERR_INTERNAL) {
    return "unknown";
  }
  return lmotif::error_code_name(static_cast<lmotif::ErrorCode>(status)).data();
}

const char* lm_last_error_message(void) { return g_last_error.c_str(); }

void lm_string_free(char* text) { std::free(text); }

lm_status lm_network_from_text(const char* utf8, size_t length, lm_network** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    require(utf8 != nullptr || length == 0, "text is null");
    auto tokens = lmotif::normalize_text(std::string_view(utf8 ? utf8 : "", length));
    *out = new lm_network{lmotif::build_network(tokens)};
  });
}

lm_status lm_network_from_edge_list(const char* tsv, size_t length,
                                    lm_network** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    require(tsv != nullptr || length == 0, "edge list is null");
    *out = new lm_network{
        lmotif::import_edge_list(std::string_view(tsv ? tsv : "", length))};
  });
}

void lm_network_free(lm_network* network) { delete network; }

size_t lm_network_node_count(const lm_network* network) {
  return network ? network->net.node_count() : 0;
}

size_t lm_network_arc_count(const lm_network* network) {
  return network ? network->net.arc_count() : 0;
}

lm_status lm_network_edge_list(const lm_network* network, char** out_tsv) {
  return guarded([&] {
    require(network != nullptr && out_tsv != nullptr, "null argument");
    *out_tsv = dup_string(lmotif::export_edge_list(network->net));
  });
}

lm_status lm_census_compute(const lm_network* network, const char* const* words,
                            size_t word_count, unsigned jobs, lm_census** out) {
  return guarded([&] {
    require(network != nullptr && out != nullptr, "null argument");
    if (words == nullptr) {
      *out = new lm_census{lmotif::labelled_census(network->net, nullptr, jobs)};
    } else {
      const auto vocab = string_list(words, word_count);
      *out = new lm_census{lmotif::labelled_census(network->net, &vocab, jobs)};
    }
  });
}

void lm_census_free(lm_census* census) { delete census; }

lm_status lm_census_motif_count(const lm_census* census, int motif_id,
                                uint64_t* out) {
  return guarded([&] {
    require(census != nullptr && out != nullptr, "null argument");
    *out = census->census.motif_count(motif_id);
  });
}

lm_status lm_census_word_count(const lm_census* census, const char* word,
                               int motif_id, int orbit, uint64_t* out) {
  return guarded([&] {
    require(census != nullptr && word != nullptr && out != nullptr, "null argument");
    *out = orbit == 0 ? census->census.word_motif(word, motif_id)
                      : census->census.word_motif_orbit(word, motif_id, orbit - 1);
  });
}

lm_status lm_census_table(const lm_census* census, const char* const* words,
                          size_t word_count, int with_orbits, char** out_csv) {
  return guarded([&] {
    require(census != nullptr && out_csv != nullptr, "null argument");
    require(words != nullptr || word_count == 0, "words is null");
    const auto list = string_list(words, word_count);
    *out_csv = dup_string(lmotif::census_table_csv(census->census, list, with_orbits != 0));
  });
}

lm_status lm_motif_orbit_count(int motif_id, int* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = lmotif::motif(motif_id).orbit_count();
  });
}

void lm_dataset_options_init(lm_dataset_options* options) {
  if (options == nullptr) return;
  *options = lm_dataset_options{};
  options->seed = 1;
  options->jobs = 1;
}

lm_status lm_dataset_load(const char* manifest_path,
                          const lm_dataset_options* options, lm_dataset** out) {
  return guarded([&] {
    require(manifest_path != nullptr && out != nullptr, "null argument");
    lm_dataset_options defaults;
    lm_dataset_options_init(&defaults);
    const lm_dataset_options& o = options ? *options : defaults;
    auto manifest = lmotif::load_manifest(manifest_path);
    if (o.chunk_size != 0) manifest.chunk_size = o.chunk_size;
    manifest.truncate_to_shortest = o.truncate_shortest != 0;
    require(o.class_quota_count == 0 || o.class_quotas != nullptr, "class_quotas is null");
    require(o.group_quota_count == 0 || o.group_quotas != nullptr, "group_quotas is null");
    for (size_t i = 0; i < o.class_quota_count; ++i) {
      require(o.class_quotas[i].key != nullptr, "quota key is null");
      manifest.class_quota[o.class_quotas[i].key] = o.class_quotas[i].count;
    }
    for (size_t i = 0; i < o.group_quota_count; ++i) {
      require(o.group_quotas[i].key != nullptr, "quota key is null");
      manifest.group_quota[o.group_quotas[i].key] = o.group_quotas[i].count;
    }
    *out = new lm_dataset{lmotif::prepare_dataset(manifest, o.seed, o.jobs)};
  });
}

void lm_dataset_free(lm_dataset* dataset) { delete dataset; }

size_t lm_dataset_size(const lm_dataset* dataset) {
  return dataset ? dataset->docs.size() : 0;
}

lm_status lm_extract_features(const lm_dataset* dataset, const char* version,
                              size_t words, unsigned jobs, char** out_csv) {
  return guarded([&] {
    require(dataset != nullptr && version != nullptr && out_csv != nullptr,
            "null argument");
    const auto v = lmotif::parse_version(version);
    const auto ws = lmotif::select_top_words(dataset->docs, words, "all documents");
    *out_csv = dup_string(lmotif::feature_matrix_csv(
        lmotif::extract_features(dataset->docs, ws, v, jobs)));
  });
}

void lm_experiment_options_init(lm_experiment_options* options) {
  if (options == nullptr) return;
  *options = lm_experiment_options{};
  options->folds = 10;
  options->seed = 1;
  options->jobs = 1;
}

lm_status lm_evaluate(const lm_dataset* dataset,
                      const lm_experiment_options* options, const char* out_dir,
                      char** out_summary) {
  return guarded([&] {
    require(dataset != nullptr && out_dir != nullptr, "null argument");
    const auto cfg = to_config(options);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    std::string summary;
    const auto cells = lmotif::run_experiment(
        dataset->docs, cfg, [&](const lmotif::CellResult& cell) {
          lmotif::write_file_atomic(dir / lmotif::report_file_name(cell),
                                    lmotif::report_json(cell.report));
          summary += lmotif::report_table(cell.report) + "\n";
        });
    const auto table = lmotif::accuracy_table_csv(cells);
    lmotif::write_file_atomic(dir / "accuracy.csv", table);
    if (out_summary != nullptr) *out_summary = dup_string(summary + table);
  });
}

lm_status lm_sweep(const lm_dataset* dataset, const lm_experiment_options* options,
                   const char* out_dir, char** out_csv) {
  return guarded([&] {
    require(dataset != nullptr, "null argument");
    const auto cfg = to_config(options);
    const auto cells = lmotif::run_experiment(dataset->docs, cfg);
    const auto table = lmotif::sweep_csv(cells);
    if (out_dir != nullptr) {
      std::filesystem::create_directories(out_dir);
      lmotif::write_file_atomic(std::filesystem::path(out_dir) / "sweep.csv", table);
    }
    if (out_csv != nullptr) *out_csv = dup_string(table);
  });
}

lm_status lm_scatter(const lm_dataset* dataset, const char* version, size_t words,
                     const char* x_feature, const char* y_feature, unsigned jobs,
                     char** out_csv) {
  return guarded([&] {
    require(dataset != nullptr && version != nullptr && x_feature != nullptr &&
                y_feature != nullptr && out_csv != nullptr,
            "null argument");
    *out_csv = dup_string(lmotif::scatter_csv(
        dataset->docs, lmotif::parse_version(version), words, x_feature, y_feature,
        jobs));
  });
}

}  // extern "C"
