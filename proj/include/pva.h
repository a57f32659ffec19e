/*
 * Copyright 2026 The PVA Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C API of the request classification engine.
 *
 * All entry points return PVA_OK or a status code; pva_last_error() carries
 * a human-readable detail message for the calling thread. Handles are
 * opaque; every *_open/*_new call pairs with the matching *_close. Handles
 * are immutable once created and may be shared across threads. */

#ifndef PVA_H
#define PVA_H

#include <stdint.h>

#if defined(_WIN32) && defined(PVA_BUILD_SHARED)
#define PVA_API __declspec(dllexport)
#elif defined(__GNUC__)
#define PVA_API __attribute__((visibility("default")))
#else
#define PVA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t pva_status;

#define PVA_OK 0
#define PVA_E_ARG 1    /* invalid argument or option */
#define PVA_E_IO 2     /* file system failure */
#define PVA_E_DATA 3   /* dataset problems: missing split, empty class, empty vocab */
#define PVA_E_FORMAT 4 /* unreadable model/route/request payloads */
#define PVA_E_TRAIN 5  /* training could not run */
#define PVA_E_STATE 6  /* bind failures and other runtime errors */

#define PVA_MODEL_LINEAR 1
#define PVA_MODEL_EMBEDDING 2

typedef struct pva_corpus pva_corpus;
typedef struct pva_model pva_model;
typedef struct pva_routes pva_routes;
typedef struct pva_report pva_report;
typedef struct pva_gateway pva_gateway;

PVA_API const char *pva_version(void);
PVA_API const char *pva_status_name(pva_status status);

/* Message for the most recent failure on this thread; valid until the next
 * failing call on the same thread. */
PVA_API const char *pva_last_error(void);

PVA_API void pva_string_free(char *s);

/* ---- dataset ---- */

/* Opens <root>/<split>/<class>/<doc> directory trees. */
PVA_API pva_status pva_corpus_open(const char *root, const char *split,
								   int strip_headers, pva_corpus **out);
PVA_API void pva_corpus_close(pva_corpus *corpus);
PVA_API int64_t pva_corpus_doc_count(const pva_corpus *corpus);
PVA_API int32_t pva_corpus_class_count(const pva_corpus *corpus);
PVA_API const char *pva_corpus_class_name(const pva_corpus *corpus, int32_t index);
PVA_API int64_t pva_corpus_class_doc_count(const pva_corpus *corpus, int32_t index);

/* ---- training ---- */

typedef struct pva_train_options {
	int32_t kind; /* PVA_MODEL_LINEAR or PVA_MODEL_EMBEDDING */

	/* vocabulary */
	uint32_t min_df;
	double max_df_ratio;
	int64_t max_features;      /* <= 0: unlimited */
	const char *stopword_file; /* NULL: no stopword filtering */

	/* shared */
	int32_t epochs;
	double lr0;
	uint64_t seed;

	/* linear */
	double l2;
	int32_t batch_size;

	/* embedding */
	int32_t dim;
	int32_t max_ngram;
	int64_t buckets;
} pva_train_options;

/* Fills the defaults for the given model kind. */
PVA_API void pva_train_options_init(pva_train_options *options, int32_t kind);

PVA_API pva_status pva_train(const pva_corpus *corpus, const pva_train_options *options,
							 pva_model **out);

/* ---- models ---- */

PVA_API pva_status pva_model_open(const char *path, pva_model **out);
PVA_API pva_status pva_model_save(const pva_model *model, const char *path);
PVA_API void pva_model_close(pva_model *model);
PVA_API int32_t pva_model_kind(const pva_model *model);
PVA_API int32_t pva_model_class_count(const pva_model *model);
PVA_API const char *pva_model_class_name(const pva_model *model, int32_t index);

typedef struct pva_prediction {
	int32_t label;
	double probability;
} pva_prediction;

/* Number of classifiable tokens the engine's tokenizer finds in the text.
 * Zero means a request would be answered with an empty_text error. */
PVA_API int64_t pva_token_count(const char *text);

/* Ranks up to `capacity` classes for the text (top first). Text that
 * tokenizes to nothing is not an error here: the ranking falls back to the
 * model's no-feature distribution. */
PVA_API pva_status pva_model_predict(const pva_model *model, const char *text,
									 pva_prediction *out, int32_t capacity,
									 int32_t *count);

/* ---- evaluation ---- */

PVA_API pva_status pva_model_evaluate(const pva_model *model, const pva_corpus *corpus,
									  pva_report **out);
PVA_API void pva_report_close(pva_report *report);
PVA_API double pva_report_accuracy(const pva_report *report);
PVA_API double pva_report_weighted_f1(const pva_report *report);
PVA_API double pva_report_macro_f1(const pva_report *report);
/* Returned strings live as long as the report handle. */
PVA_API const char *pva_report_table(const pva_report *report);
PVA_API const char *pva_report_json(const pva_report *report);
PVA_API const char *pva_report_csv(const pva_report *report);

typedef struct pva_latency_stats {
	double median_ms;
	double p95_ms;
	double total_ms;
	double per_item_ms;
	int64_t item_count;
} pva_latency_stats;

/* warmup untimed passes over the corpus, then `repeats` timed passes. */
PVA_API pva_status pva_model_bench(const pva_model *model, const pva_corpus *corpus,
								   int32_t warmup, int32_t repeats,
								   pva_latency_stats *out);

/* ---- gateway ---- */

PVA_API pva_status pva_routes_open(const char *path, pva_routes **out);
PVA_API pva_status pva_routes_parse(const char *json_text, pva_routes **out);
PVA_API void pva_routes_close(pva_routes *routes);

/* The gateway borrows the model: keep the model handle open for the
 * gateway's whole lifetime. The routes are copied. */
PVA_API pva_status pva_gateway_new(const pva_model *model, const pva_routes *routes,
								   int32_t top_k, pva_gateway **out);
PVA_API void pva_gateway_close(pva_gateway *gateway);

/* One request line in, one malloc'd response line out (caller frees with
 * pva_string_free). Malformed lines yield a bad_request response, not a
 * failure status. */
PVA_API pva_status pva_gateway_handle_line(const pva_gateway *gateway, const char *line,
										   char **response_json);

/* Serves newline-delimited requests on stdin/stdout until end of input.
 * Returns the number of requests handled in *handled when non-NULL. */
PVA_API pva_status pva_gateway_serve_stdio(const pva_gateway *gateway, int32_t workers,
										   int64_t *handled);

/* Serves the same protocol on a TCP listener until SIGINT/SIGTERM. */
PVA_API pva_status pva_gateway_serve_tcp(const pva_gateway *gateway, const char *host,
										 int32_t port, int32_t workers);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PVA_H */
