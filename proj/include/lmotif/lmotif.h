/*
 * C interface to the labelled-motif library.
 *
 * Every fallible call returns an lm_status. On failure the message for the
 * calling thread is available from lm_last_error_message() until the next
 * call on that thread. Objects are opaque handles released with their
 * matching *_free function; strings returned through char** are released
 * with lm_string_free.
 */
#ifndef LMOTIF_LMOTIF_H_
#define LMOTIF_LMOTIF_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LMOTIF_BUILDING)
#    define LMOTIF_API __declspec(dllexport)
#  else
#    define LMOTIF_API __declspec(dllimport)
#  endif
#else
#  define LMOTIF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lm_status {
  LM_OK = 0,
  LM_ERR_INVALID_ARGUMENT = 1,
  LM_ERR_IO = 2,
  LM_ERR_INSUFFICIENT_DATA = 3,
  LM_ERR_INSUFFICIENT_VOCABULARY = 4,
  LM_ERR_INVALID_TRIAD = 5,
  LM_ERR_SCHEMA = 6,
  LM_ERR_DEGENERATE_TRAINING = 7,
  LM_ERR_INTERNAL = 8
} lm_status;

/* Stable snake_case identifier, e.g. "insufficient_data". */
LMOTIF_API const char* lm_status_name(lm_status status);
LMOTIF_API const char* lm_last_error_message(void);
LMOTIF_API void lm_string_free(char* text);

/* ---- networks ---------------------------------------------------------- */

typedef struct lm_network lm_network;

/* Normalizes raw UTF-8 text and builds its co-occurrence network. */
LMOTIF_API lm_status lm_network_from_text(const char* utf8, size_t length,
                                          lm_network** out);
/* Parses a `source<TAB>target` edge list. */
LMOTIF_API lm_status lm_network_from_edge_list(const char* tsv, size_t length,
                                               lm_network** out);
LMOTIF_API void lm_network_free(lm_network* network);
LMOTIF_API size_t lm_network_node_count(const lm_network* network);
LMOTIF_API size_t lm_network_arc_count(const lm_network* network);
LMOTIF_API lm_status lm_network_edge_list(const lm_network* network,
                                          char** out_tsv);

/* ---- motif census ------------------------------------------------------ */

typedef struct lm_census lm_census;

/* words == NULL tracks every word of the network. */
LMOTIF_API lm_status lm_census_compute(const lm_network* network,
                                       const char* const* words,
                                       size_t word_count, unsigned jobs,
                                       lm_census** out);
LMOTIF_API void lm_census_free(lm_census* census);
LMOTIF_API lm_status lm_census_motif_count(const lm_census* census,
                                           int motif_id, uint64_t* out);
/* orbit == 0 counts every position; orbit >= 1 selects one orbit. */
LMOTIF_API lm_status lm_census_word_count(const lm_census* census,
                                          const char* word, int motif_id,
                                          int orbit, uint64_t* out);
LMOTIF_API lm_status lm_census_table(const lm_census* census,
                                     const char* const* words,
                                     size_t word_count, int with_orbits,
                                     char** out_csv);
LMOTIF_API lm_status lm_motif_orbit_count(int motif_id, int* out);

/* ---- corpora ----------------------------------------------------------- */

typedef struct lm_dataset lm_dataset;

typedef struct lm_quota {
  const char* key;
  size_t count;
} lm_quota;

typedef struct lm_dataset_options {
  size_t chunk_size; /* 0 = no chunking */
  int truncate_shortest;
  const lm_quota* class_quotas;
  size_t class_quota_count;
  const lm_quota* group_quotas;
  size_t group_quota_count;
  uint64_t seed;
  unsigned jobs;
} lm_dataset_options;

LMOTIF_API void lm_dataset_options_init(lm_dataset_options* options);
LMOTIF_API lm_status lm_dataset_load(const char* manifest_path,
                                     const lm_dataset_options* options,
                                     lm_dataset** out);
LMOTIF_API void lm_dataset_free(lm_dataset* dataset);
LMOTIF_API size_t lm_dataset_size(const lm_dataset* dataset);

/* ---- features and experiments ------------------------------------------ */

/* version: "v1", "v2" or "mfw". */
LMOTIF_API lm_status lm_extract_features(const lm_dataset* dataset,
                                         const char* version, size_t words,
                                         unsigned jobs, char** out_csv);

typedef struct lm_experiment_options {
  const char* const* versions;
  size_t version_count;
  const size_t* word_counts;
  size_t word_count_count;
  const char* const* classifiers; /* "tree", "knn", "svm", "bayes" */
  size_t classifier_count;
  size_t folds;
  uint64_t seed;
  unsigned jobs;
  int global_words;
  int group_folds;
} lm_experiment_options;

LMOTIF_API void lm_experiment_options_init(lm_experiment_options* options);

/* Writes one JSON report per cell plus accuracy.csv into out_dir (created if
 * missing). Reports already written survive a later failure. out_summary,
 * when non-NULL, receives human-readable tables. */
LMOTIF_API lm_status lm_evaluate(const lm_dataset* dataset,
                                 const lm_experiment_options* options,
                                 const char* out_dir, char** out_summary);

/* Accuracy-versus-|W| rows for every word count in options. Also written to
 * out_dir/sweep.csv when out_dir is non-NULL. */
LMOTIF_API lm_status lm_sweep(const lm_dataset* dataset,
                              const lm_experiment_options* options,
                              const char* out_dir, char** out_csv);

LMOTIF_API lm_status lm_scatter(const lm_dataset* dataset, const char* version,
                                size_t words, const char* x_feature,
                                const char* y_feature, unsigned jobs,
                                char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* LMOTIF_LMOTIF_H_ */
