/* C interface to the scholarrec library.
 *
 * Every function returns an srec_status. On failure the message is available
 * from srec_last_error() on the calling thread until the next call. Strings
 * handed out through char** parameters are owned by the caller and released
 * with srec_string_free(). Handles are released with their *_free function;
 * passing NULL to a free function is a no-op.
 */
#ifndef SCHOLARREC_H
#define SCHOLARREC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SREC_API __declspec(dllexport)
#else
#define SREC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum srec_status {
    SREC_OK = 0,
    SREC_ERR_INTERNAL = 1,
    SREC_ERR_CONFIG = 2,
    SREC_ERR_IO = 3,
    SREC_ERR_PARSE = 4,
    SREC_ERR_DATA = 5
} srec_status;

typedef struct srec_config srec_config;
typedef struct srec_catalog srec_catalog;
typedef struct srec_testset srec_testset;
typedef struct srec_neighbors srec_neighbors;
typedef struct srec_index srec_index;
typedef struct srec_run srec_run;

SREC_API const char* srec_version(void);
/* "internal", "config", "io", "parse", "data"; "ok" for SREC_OK. */
SREC_API const char* srec_status_name(srec_status status);
SREC_API const char* srec_last_error(void);
SREC_API void srec_string_free(char* text);

/* Experiment configuration. `json` may be NULL for defaults. */
SREC_API srec_status srec_config_new(const char* json, srec_config** out);
/* Keys: scenario, recommender, seed, variant, measure, fields, corpus,
 * articles, libraries, neighbor_weighting, depth, ks. */
SREC_API srec_status srec_config_set(srec_config* config, const char* key, const char* value);
SREC_API srec_status srec_config_to_json(const srec_config* config, char** out);
SREC_API srec_status srec_config_hash(const srec_config* config, char** out);
SREC_API void srec_config_free(srec_config* config);

/* Corpus. */
SREC_API srec_status srec_catalog_load(const char* articles_path, const char* libraries_path,
                                       srec_catalog** out);
SREC_API srec_status srec_catalog_load_config(const srec_config* config, srec_catalog** out);
/* `params_json` may be NULL; `seed` overrides the seed it carries. */
SREC_API srec_status srec_catalog_synth(const char* params_json, uint64_t seed, srec_catalog** out);
/* Writes DIR/articles.jsonl and DIR/libraries.csv. */
SREC_API srec_status srec_catalog_save(const srec_catalog* catalog, const char* dir, int overwrite);
SREC_API srec_status srec_catalog_validate(const srec_catalog* catalog, char** report_json);
SREC_API srec_status srec_catalog_add_textrank(srec_catalog* catalog, const srec_config* config);
SREC_API size_t srec_catalog_article_count(const srec_catalog* catalog);
SREC_API size_t srec_catalog_library_count(const srec_catalog* catalog);
SREC_API void srec_catalog_free(srec_catalog* catalog);

/* Test sets. Building requires a seed in the config. */
SREC_API srec_status srec_testset_build(const srec_catalog* catalog, const srec_config* config,
                                        srec_testset** out);
SREC_API srec_status srec_testset_load(const char* path, srec_testset** out);
SREC_API srec_status srec_testset_save(const srec_testset* testset, const char* path,
                                       const srec_config* config, int overwrite);
SREC_API srec_status srec_testset_save_qrels(const srec_testset* testset, const char* path,
                                             const srec_config* config, int overwrite);
SREC_API size_t srec_testset_set_count(const srec_testset* testset);
SREC_API size_t srec_testset_query_count(const srec_testset* testset);
/* Seed and scenario the test set was built with. */
SREC_API uint64_t srec_testset_seed(const srec_testset* testset);
SREC_API const char* srec_testset_scenario(const srec_testset* testset);
SREC_API void srec_testset_free(srec_testset* testset);

/* Item neighbors. With a test set, leaked libraries are removed first. */
SREC_API srec_status srec_neighbors_train(const srec_catalog* catalog, const srec_testset* testset,
                                          const srec_config* config, srec_neighbors** out);
SREC_API srec_status srec_neighbors_load(const char* path, srec_neighbors** out);
SREC_API srec_status srec_neighbors_save(const srec_neighbors* neighbors, const char* path,
                                         const srec_config* config, int overwrite);
SREC_API size_t srec_neighbors_item_count(const srec_neighbors* neighbors);
SREC_API void srec_neighbors_free(srec_neighbors* neighbors);

/* Inverted index over the configured fields, restricted to the test set's
 * articles when one is given. */
SREC_API srec_status srec_index_build(const srec_catalog* catalog, const srec_testset* testset,
                                      const srec_config* config, srec_index** out);
SREC_API srec_status srec_index_load(const char* path, srec_index** out);
SREC_API srec_status srec_index_save(const srec_index* index, const char* path, int overwrite);
SREC_API size_t srec_index_doc_count(const srec_index* index);
SREC_API void srec_index_free(srec_index* index);

/* Runs. `neighbors` is required for the cf and hybrid recommenders. */
SREC_API srec_status srec_recommend(const srec_catalog* catalog, const srec_testset* testset,
                                    const srec_neighbors* neighbors, const srec_config* config,
                                    srec_run** out);
SREC_API srec_status srec_run_load(const char* path, srec_run** out);
SREC_API srec_status srec_run_save(const srec_run* run, const char* path, const srec_config* config,
                                   int overwrite);
SREC_API size_t srec_run_query_count(const srec_run* run);
SREC_API void srec_run_free(srec_run* run);

/* Evaluates a run file against a qrels file at each cutoff. When
 * `metrics_path` is non-NULL the metrics tsv is written there. `table` (may
 * be NULL) receives a printable summary. */
SREC_API srec_status srec_evaluate_files(const char* run_path, const char* qrels_path,
                                         const size_t* ks, size_t k_count, const char* metrics_path,
                                         int overwrite, char** table);

/* Full experiment into `out_dir`. `table` (may be NULL) receives the metrics. */
SREC_API srec_status srec_pipeline(const srec_config* config, const char* out_dir, int overwrite,
                                   char** table);

/* Side-by-side comparison of metrics files. `metric` may be NULL for P_5. */
SREC_API srec_status srec_compare(const char* const* metrics_paths, size_t count, const char* metric,
                                  char** table);

#ifdef __cplusplus
}
#endif

#endif
