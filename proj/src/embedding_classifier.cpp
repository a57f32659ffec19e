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

#include "pva/embedding_classifier.hpp"
#include "pva/errors.hpp"
#include "pva/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pva {

std::vector<std::int64_t> doc_feature_ids(std::span<const std::string> tokens,
										  const vocabulary &vocab, int max_n,
										  std::int64_t buckets)
{
	std::vector<std::int64_t> ids;
	ids.reserve(tokens.size() * 2);
	for (const auto &token: tokens) {
		const std::int32_t idx = vocab.find(token);
		if (idx >= 0) {
			ids.push_back(idx);
		}
	}
	if (max_n >= 2 && buckets >= 1) {
		const std::int64_t base = static_cast<std::int64_t>(vocab.size());
		for (const auto &gram: word_ngrams(tokens, max_n)) {
			ids.push_back(base + static_cast<std::int64_t>(
									 hash_ngram(gram, static_cast<std::uint64_t>(buckets))));
		}
	}
	return ids;
}

std::vector<float> embed_average(const embedding_model &model,
								 std::span<const std::int64_t> ids)
{
	return embed_average<float>(ids, std::span<const float>(model.input), model.dim);
}

embedding_model train_embedding(const corpus &data, const vocabulary &vocab,
								const ft_train_config &config)
{
	if (vocab.size() == 0) {
		raise(errc::empty_vocabulary, "cannot train on an empty vocabulary");
	}
	if (data.documents.empty()) {
		raise(errc::invalid_argument, "corpus is empty");
	}
	if (config.dim < 1 || config.buckets < 1 || config.max_n < 1 || config.epochs < 0 ||
		config.lr0 <= 0) {
		raise(errc::invalid_argument, "bad training configuration");
	}

	embedding_model model;
	model.dim = config.dim;
	model.vocab_rows = static_cast<std::int64_t>(vocab.size());
	model.buckets = config.buckets;
	model.max_n = config.max_n;
	model.num_classes = data.num_labels();
	model.label_names = data.label_names;
	model.vocab_fingerprint = vocab.fingerprint();
	model.train_config = config;

	const std::size_t input_count =
		static_cast<std::size_t>(model.input_rows()) * static_cast<std::size_t>(config.dim);
	model.input.resize(input_count);
	model.output.assign(
		static_cast<std::size_t>(model.num_classes) * static_cast<std::size_t>(config.dim),
		0.0f);

	std::mt19937_64 gen(config.seed);
	const double scale = 1.0 / static_cast<double>(config.dim);
	for (auto &v: model.input) {
		v = static_cast<float>((2.0 * uniform_unit(gen) - 1.0) * scale);
	}

	/* Feature ids are a pure function of the text; compute them once. */
	std::vector<std::vector<std::int64_t>> doc_ids;
	doc_ids.reserve(data.documents.size());
	for (const auto &doc: data.documents) {
		const auto tokens = tokenize(doc.text);
		doc_ids.push_back(doc_feature_ids(tokens, vocab, config.max_n, config.buckets));
	}

	const std::size_t n = data.documents.size();
	const std::size_t total_steps = static_cast<std::size_t>(config.epochs) * n;
	if (total_steps == 0) {
		return model;
	}

	std::vector<std::size_t> order(n);
	std::iota(order.begin(), order.end(), std::size_t{0});

	std::span<float> input_span(model.input);
	std::span<float> output_span(model.output);
	std::size_t step = 0;
	for (int epoch = 0; epoch < config.epochs; epoch++) {
		shuffle_in_place(order, gen);
		for (std::size_t i = 0; i < n; i++) {
			const double lr =
				config.lr0 * (1.0 - static_cast<double>(step) / static_cast<double>(total_steps));
			step++;
			const auto &ids = doc_ids[order[i]];
			if (ids.empty()) {
				continue;
			}
			ft_sgd_step<float>(input_span, output_span, model.dim, model.num_classes,
							   ids, data.documents[order[i]].label,
							   static_cast<float>(lr));
		}
	}
	return model;
}

std::vector<scored_label> predict_embedding(const embedding_model &model,
											std::span<const std::string> tokens,
											const vocabulary &vocab, int top_k)
{
	const auto ids = doc_feature_ids(tokens, vocab, model.max_n, model.buckets);
	const auto hidden = embed_average(model, ids);

	/* Logits accumulate in double so the reported probabilities sum to one
	 * at double precision. */
	std::vector<double> logits(static_cast<std::size_t>(model.num_classes), 0.0);
	for (std::int32_t k = 0; k < model.num_classes; k++) {
		const float *row = model.output.data() + static_cast<std::size_t>(k) * model.dim;
		double dot = 0;
		for (std::int32_t d = 0; d < model.dim; d++) {
			dot += static_cast<double>(row[d]) * static_cast<double>(hidden[d]);
		}
		logits[k] = dot;
	}
	softmax_in_place(logits);
	return rank_probabilities(logits, top_k);
}

} /* namespace pva */
