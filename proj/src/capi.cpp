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

#include "pva.h"

#include "pva/corpus.hpp"
#include "pva/engine.hpp"
#include "pva/errors.hpp"
#include "pva/gateway.hpp"
#include "pva/metrics.hpp"
#include "pva/model_io.hpp"
#include "pva/textproc.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <memory>
#include <string>

struct pva_corpus {
	pva::corpus data;
	pva::corpus_summary summary;
};

struct pva_model {
	pva::loaded_model model;
};

struct pva_routes {
	pva::route_table table;
};

struct pva_report {
	pva::classification_report report;
	std::string table_text;
	std::string json_text;
	std::string csv_text;
};

struct pva_gateway {
	/* borrows the model handle's engine; the model handle must stay open */
	std::unique_ptr<pva::gateway> gw;
};

namespace {

thread_local std::string t_last_error;

void set_error(const std::exception &e)
{
	t_last_error = e.what();
}

pva_status status_of(const pva::error &e)
{
	using pva::errc;
	switch (e.code()) {
	case errc::io_failure:
		return PVA_E_IO;
	case errc::missing_split:
	case errc::empty_class:
	case errc::empty_vocabulary:
		return PVA_E_DATA;
	case errc::bad_magic:
	case errc::unsupported_version:
	case errc::truncated_payload:
	case errc::kind_mismatch:
	case errc::parse_failure:
	case errc::missing_default:
		return PVA_E_FORMAT;
	case errc::dimension_mismatch:
	case errc::length_mismatch:
	case errc::label_out_of_range:
		return PVA_E_TRAIN;
	case errc::bind_failure:
		return PVA_E_STATE;
	case errc::empty_input:
	case errc::invalid_argument:
		return PVA_E_ARG;
	}
	return PVA_E_STATE;
}

template<typename Fn>
pva_status guarded(Fn &&fn)
{
	try {
		return fn();
	}
	catch (const pva::error &e) {
		set_error(e);
		return status_of(e);
	}
	catch (const std::exception &e) {
		set_error(e);
		return PVA_E_STATE;
	}
}

} /* anonymous namespace */

extern "C" {

const char *pva_version(void)
{
	return "1.0.0";
}

const char *pva_status_name(pva_status status)
{
	switch (status) {
	case PVA_OK:
		return "ok";
	case PVA_E_ARG:
		return "invalid-argument";
	case PVA_E_IO:
		return "io-failure";
	case PVA_E_DATA:
		return "data-error";
	case PVA_E_FORMAT:
		return "format-error";
	case PVA_E_TRAIN:
		return "training-error";
	case PVA_E_STATE:
		return "runtime-error";
	default:
		return "unknown";
	}
}

const char *pva_last_error(void)
{
	return t_last_error.c_str();
}

void pva_string_free(char *s)
{
	std::free(s);
}

/* ---- dataset ---- */

pva_status pva_corpus_open(const char *root, const char *split, int strip_headers,
						   pva_corpus **out)
{
	if (!root || !split || !out) {
		t_last_error = "null argument";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		auto handle = std::make_unique<pva_corpus>();
		handle->data = pva::load_split(root, split, strip_headers != 0);
		handle->summary = pva::summarize(handle->data);
		*out = handle.release();
		return PVA_OK;
	});
}

void pva_corpus_close(pva_corpus *corpus)
{
	delete corpus;
}

int64_t pva_corpus_doc_count(const pva_corpus *corpus)
{
	return corpus ? static_cast<int64_t>(corpus->data.documents.size()) : 0;
}

int32_t pva_corpus_class_count(const pva_corpus *corpus)
{
	return corpus ? corpus->data.num_labels() : 0;
}

const char *pva_corpus_class_name(const pva_corpus *corpus, int32_t index)
{
	if (!corpus || index < 0 || index >= corpus->data.num_labels()) {
		return nullptr;
	}
	return corpus->data.label_names[static_cast<std::size_t>(index)].c_str();
}

int64_t pva_corpus_class_doc_count(const pva_corpus *corpus, int32_t index)
{
	if (!corpus || index < 0 ||
		index >= static_cast<int32_t>(corpus->summary.per_label.size())) {
		return -1;
	}
	return static_cast<int64_t>(corpus->summary.per_label[static_cast<std::size_t>(index)]);
}

/* ---- training ---- */

void pva_train_options_init(pva_train_options *options, int32_t kind)
{
	if (!options) {
		return;
	}
	*options = pva_train_options{};
	options->kind = kind;
	options->min_df = 1;
	options->max_df_ratio = 1.0;
	options->max_features = 0;
	options->stopword_file = nullptr;
	options->seed = 42;
	if (kind == PVA_MODEL_EMBEDDING) {
		options->epochs = 25;
		options->lr0 = 0.5;
		options->dim = 100;
		options->max_ngram = 2;
		options->buckets = 2097152;
		options->l2 = 0.0;
		options->batch_size = 1;
	}
	else {
		options->epochs = 20;
		options->lr0 = 0.5;
		options->l2 = 1e-6;
		options->batch_size = 1;
		options->dim = 0;
		options->max_ngram = 2;
		options->buckets = 0;
	}
}

pva_status pva_train(const pva_corpus *corpus, const pva_train_options *options,
					 pva_model **out)
{
	if (!corpus || !options || !out) {
		t_last_error = "null argument";
		return PVA_E_ARG;
	}
	if (options->kind != PVA_MODEL_LINEAR && options->kind != PVA_MODEL_EMBEDDING) {
		t_last_error = "unknown model kind";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		pva::vocab_options vopts;
		vopts.min_df = options->min_df;
		vopts.max_df_ratio = options->max_df_ratio;
		if (options->max_features > 0) {
			vopts.max_features = static_cast<std::size_t>(options->max_features);
		}
		if (options->stopword_file) {
			vopts.stopwords = pva::load_stopwords(options->stopword_file);
		}
		pva::vocabulary vocab = pva::build_vocabulary(corpus->data, vopts);

		auto handle = std::make_unique<pva_model>();
		if (options->kind == PVA_MODEL_LINEAR) {
			const auto idf = pva::compute_idf(vocab);
			std::vector<pva::sparse_vector> features;
			std::vector<std::int32_t> labels;
			features.reserve(corpus->data.documents.size());
			labels.reserve(corpus->data.documents.size());
			for (const auto &doc: corpus->data.documents) {
				features.push_back(
					pva::tfidf_vector(pva::tokenize(doc.text), vocab, idf));
				labels.push_back(doc.label);
			}
			pva::linear_train_config config;
			config.epochs = options->epochs;
			config.lr0 = options->lr0;
			config.l2 = options->l2;
			config.seed = options->seed;
			config.batch_size = options->batch_size;
			pva::linear_model model = pva::train_logistic(
				features, labels, corpus->data.label_names,
				static_cast<std::int32_t>(vocab.size()), vocab.fingerprint(), config);
			handle->model = pva::make_loaded(std::move(model), std::move(vocab));
		}
		else {
			pva::ft_train_config config;
			config.dim = options->dim;
			config.epochs = options->epochs;
			config.lr0 = options->lr0;
			config.max_n = options->max_ngram;
			config.buckets = options->buckets;
			config.seed = options->seed;
			pva::embedding_model model =
				pva::train_embedding(corpus->data, vocab, config);
			handle->model = pva::make_loaded(std::move(model), std::move(vocab));
		}
		*out = handle.release();
		return PVA_OK;
	});
}

/* ---- models ---- */

pva_status pva_model_open(const char *path, pva_model **out)
{
	if (!path || !out) {
		t_last_error = "null argument";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		auto handle = std::make_unique<pva_model>();
		handle->model = pva::load_model(path);
		*out = handle.release();
		return PVA_OK;
	});
}

pva_status pva_model_save(const pva_model *model, const char *path)
{
	if (!model || !path) {
		t_last_error = "null argument";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		pva::save_model(model->model, path);
		return PVA_OK;
	});
}

void pva_model_close(pva_model *model)
{
	delete model;
}

int32_t pva_model_kind(const pva_model *model)
{
	if (!model) {
		return 0;
	}
	return model->model.kind == pva::model_kind::linear ? PVA_MODEL_LINEAR
														: PVA_MODEL_EMBEDDING;
}

int32_t pva_model_class_count(const pva_model *model)
{
	return model ? model->model.num_classes() : 0;
}

const char *pva_model_class_name(const pva_model *model, int32_t index)
{
	if (!model || index < 0 || index >= model->model.num_classes()) {
		return nullptr;
	}
	return model->model.label_names()[static_cast<std::size_t>(index)].c_str();
}

int64_t pva_token_count(const char *text)
{
	if (!text) {
		return 0;
	}
	return static_cast<int64_t>(pva::tokenize(text).size());
}

pva_status pva_model_predict(const pva_model *model, const char *text, pva_prediction *out,
							 int32_t capacity, int32_t *count)
{
	if (!model || !text || !out || capacity < 1) {
		t_last_error = "null argument or zero capacity";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		const auto ranked = model->model.predict_text(text, capacity);
		const std::int32_t n = static_cast<std::int32_t>(ranked.size());
		for (std::int32_t i = 0; i < n; i++) {
			out[i].label = ranked[static_cast<std::size_t>(i)].label;
			out[i].probability = ranked[static_cast<std::size_t>(i)].probability;
		}
		if (count) {
			*count = n;
		}
		return PVA_OK;
	});
}

/* ---- evaluation ---- */

pva_status pva_model_evaluate(const pva_model *model, const pva_corpus *corpus,
							  pva_report **out)
{
	if (!model || !corpus || !out) {
		t_last_error = "null argument";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		const auto &docs = corpus->data.documents;
		std::vector<std::int32_t> golds;
		std::vector<std::int32_t> preds;
		golds.reserve(docs.size());
		preds.reserve(docs.size());
		for (const auto &doc: docs) {
			golds.push_back(doc.label);
			preds.push_back(model->model.predict_text(doc.text, 1).front().label);
		}
		const auto cm =
			pva::confusion(golds, preds, model->model.num_classes());
		auto handle = std::make_unique<pva_report>();
		handle->report = pva::report(cm);
		const auto &names = model->model.label_names();
		handle->table_text = pva::render_report(handle->report, names);
		handle->json_text = pva::report_to_json(handle->report, names);
		handle->csv_text = pva::report_to_csv(handle->report, names);
		*out = handle.release();
		return PVA_OK;
	});
}

void pva_report_close(pva_report *report)
{
	delete report;
}

double pva_report_accuracy(const pva_report *report)
{
	return report ? report->report.accuracy : 0.0;
}

double pva_report_weighted_f1(const pva_report *report)
{
	return report ? report->report.weighted_avg.f1 : 0.0;
}

double pva_report_macro_f1(const pva_report *report)
{
	return report ? report->report.macro_avg.f1 : 0.0;
}

const char *pva_report_table(const pva_report *report)
{
	return report ? report->table_text.c_str() : nullptr;
}

const char *pva_report_json(const pva_report *report)
{
	return report ? report->json_text.c_str() : nullptr;
}

const char *pva_report_csv(const pva_report *report)
{
	return report ? report->csv_text.c_str() : nullptr;
}

pva_status pva_model_bench(const pva_model *model, const pva_corpus *corpus, int32_t warmup,
						   int32_t repeats, pva_latency_stats *out)
{
	if (!model || !corpus || !out) {
		t_last_error = "null argument";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		const auto stats = pva::bench_latency(
			[&](const pva::document &doc) {
				(void) model->model.predict_text(doc.text, 1);
			},
			corpus->data.documents, warmup, repeats);
		out->median_ms = stats.median_ms;
		out->p95_ms = stats.p95_ms;
		out->total_ms = stats.total_ms;
		out->per_item_ms = stats.per_item_ms;
		out->item_count = stats.item_count;
		return PVA_OK;
	});
}

/* ---- gateway ---- */

pva_status pva_routes_open(const char *path, pva_routes **out)
{
	if (!path || !out) {
		t_last_error = "null argument";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		auto handle = std::make_unique<pva_routes>();
		handle->table = pva::load_routes(path);
		*out = handle.release();
		return PVA_OK;
	});
}

pva_status pva_routes_parse(const char *json_text, pva_routes **out)
{
	if (!json_text || !out) {
		t_last_error = "null argument";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		auto handle = std::make_unique<pva_routes>();
		handle->table = pva::parse_routes(json_text);
		*out = handle.release();
		return PVA_OK;
	});
}

void pva_routes_close(pva_routes *routes)
{
	delete routes;
}

pva_status pva_gateway_new(const pva_model *model, const pva_routes *routes, int32_t top_k,
						   pva_gateway **out)
{
	if (!model || !routes || !out) {
		t_last_error = "null argument";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		auto handle = std::make_unique<pva_gateway>();
		handle->gw = std::make_unique<pva::gateway>(model->model, routes->table, top_k);
		*out = handle.release();
		return PVA_OK;
	});
}

void pva_gateway_close(pva_gateway *gateway)
{
	delete gateway;
}

pva_status pva_gateway_handle_line(const pva_gateway *gateway, const char *line,
								   char **response_json)
{
	if (!gateway || !line || !response_json) {
		t_last_error = "null argument";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		const std::string response = gateway->gw->handle_line(line);
		char *buf = static_cast<char *>(std::malloc(response.size() + 1));
		if (!buf) {
			t_last_error = "out of memory";
			return PVA_E_STATE;
		}
		std::memcpy(buf, response.c_str(), response.size() + 1);
		*response_json = buf;
		return PVA_OK;
	});
}

pva_status pva_gateway_serve_stdio(const pva_gateway *gateway, int32_t workers,
								   int64_t *handled)
{
	if (!gateway) {
		t_last_error = "null argument";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		const std::size_t n = pva::serve_stream(*gateway->gw, std::cin, std::cout, workers);
		if (handled) {
			*handled = static_cast<int64_t>(n);
		}
		return PVA_OK;
	});
}

pva_status pva_gateway_serve_tcp(const pva_gateway *gateway, const char *host, int32_t port,
								 int32_t workers)
{
	if (!gateway || !host) {
		t_last_error = "null argument";
		return PVA_E_ARG;
	}
	return guarded([&]() {
		pva::serve_tcp(*gateway->gw, host, port, workers);
		return PVA_OK;
	});
}

} /* extern "C" */
