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

#pragma once

#include "pva/linear_classifier.hpp"
#include "pva/textproc.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pva {

struct ft_train_config {
	int dim = 100;
	int epochs = 25;
	double lr0 = 0.5;
	int max_n = 2;                  /* unigrams + word n-grams up to this order */
	std::int64_t buckets = 2097152; /* hashed n-gram rows appended after the vocab rows */
	std::uint64_t seed = 42;
};

struct embedding_model {
	std::int32_t dim = 0;
	std::int64_t vocab_rows = 0; /* V: rows [0, V) are vocabulary tokens */
	std::int64_t buckets = 0;    /* B: rows [V, V+B) are hashed n-grams */
	std::int32_t max_n = 2;
	std::int32_t num_classes = 0;
	std::vector<float> input;  /* (V+B) x dim, row-major */
	std::vector<float> output; /* num_classes x dim, row-major; no bias term */
	std::vector<std::string> label_names;
	std::uint64_t vocab_fingerprint = 0;
	ft_train_config train_config; /* echo, persisted in the model header */

	std::int64_t input_rows() const { return vocab_rows + buckets; }
};

/* In-vocabulary tokens map to rows [0, V); each n-gram maps to
 * V + hash_ngram(g, buckets). Out-of-vocabulary unigrams are dropped,
 * duplicates kept. */
std::vector<std::int64_t> doc_feature_ids(std::span<const std::string> tokens,
										  const vocabulary &vocab, int max_n,
										  std::int64_t buckets);

/* Arithmetic mean of the selected rows; empty ids give the zero vector. */
template<typename Real>
std::vector<Real> embed_average(std::span<const std::int64_t> ids,
								std::span<const Real> input, std::int32_t dim)
{
	std::vector<Real> hidden(static_cast<std::size_t>(dim), Real(0));
	if (ids.empty()) {
		return hidden;
	}
	for (auto id: ids) {
		const Real *row = input.data() + static_cast<std::size_t>(id) * dim;
		for (std::int32_t d = 0; d < dim; d++) {
			hidden[d] += row[d];
		}
	}
	const Real inv = Real(1) / static_cast<Real>(ids.size());
	for (auto &v: hidden) {
		v *= inv;
	}
	return hidden;
}

std::vector<float> embed_average(const embedding_model &model,
								 std::span<const std::int64_t> ids);

/* Softmax cross-entropy of one document against one label. Templated so the
 * gradient checks can run the identical arithmetic in double precision. */
template<typename Real>
Real ft_example_loss(std::span<const Real> input, std::span<const Real> output,
					 std::int32_t dim, std::int32_t num_classes,
					 std::span<const std::int64_t> ids, std::int32_t label)
{
	std::vector<Real> hidden = embed_average<Real>(ids, input, dim);
	std::vector<Real> logits(static_cast<std::size_t>(num_classes), Real(0));
	for (std::int32_t k = 0; k < num_classes; k++) {
		const Real *row = output.data() + static_cast<std::size_t>(k) * dim;
		Real dot = 0;
		for (std::int32_t d = 0; d < dim; d++) {
			dot += row[d] * hidden[d];
		}
		logits[k] = dot;
	}
	Real max_logit = logits[0];
	for (auto v: logits) {
		max_logit = std::max(max_logit, v);
	}
	Real sum = 0;
	for (auto &v: logits) {
		v = std::exp(v - max_logit);
		sum += v;
	}
	return -std::log(logits[label] / sum);
}

/* One SGD step: forward, softmax cross-entropy, and in-place update of the
 * output matrix and the input rows named by ids. Returns the example loss
 * (computed before the update). The training loop and the gradient checks
 * share this code path. */
template<typename Real>
Real ft_sgd_step(std::span<Real> input, std::span<Real> output, std::int32_t dim,
				 std::int32_t num_classes, std::span<const std::int64_t> ids,
				 std::int32_t label, Real lr)
{
	if (ids.empty()) {
		return -std::log(Real(1) / static_cast<Real>(num_classes));
	}
	std::vector<Real> hidden =
		embed_average<Real>(ids, std::span<const Real>(input.data(), input.size()), dim);

	std::vector<Real> probs(static_cast<std::size_t>(num_classes), Real(0));
	for (std::int32_t k = 0; k < num_classes; k++) {
		const Real *row = output.data() + static_cast<std::size_t>(k) * dim;
		Real dot = 0;
		for (std::int32_t d = 0; d < dim; d++) {
			dot += row[d] * hidden[d];
		}
		probs[k] = dot;
	}
	Real max_logit = probs[0];
	for (auto v: probs) {
		max_logit = std::max(max_logit, v);
	}
	Real sum = 0;
	for (auto &v: probs) {
		v = std::exp(v - max_logit);
		sum += v;
	}
	for (auto &v: probs) {
		v /= sum;
	}
	const Real loss = -std::log(probs[label]);

	/* d(loss)/d(hidden) accumulates against the pre-update output rows. */
	std::vector<Real> grad_hidden(static_cast<std::size_t>(dim), Real(0));
	for (std::int32_t k = 0; k < num_classes; k++) {
		const Real g = probs[k] - (k == label ? Real(1) : Real(0));
		Real *row = output.data() + static_cast<std::size_t>(k) * dim;
		for (std::int32_t d = 0; d < dim; d++) {
			grad_hidden[d] += g * row[d];
			row[d] -= lr * g * hidden[d];
		}
	}

	/* hidden is a mean, so each referenced row sees grad_hidden / |ids|;
	 * duplicate ids accumulate once per occurrence. */
	const Real scale = lr / static_cast<Real>(ids.size());
	for (auto id: ids) {
		Real *row = input.data() + static_cast<std::size_t>(id) * dim;
		for (std::int32_t d = 0; d < dim; d++) {
			row[d] -= scale * grad_hidden[d];
		}
	}
	return loss;
}

/* Input embeddings start uniform in [-1/dim, +1/dim] from the seeded
 * generator, output weights start at zero. Documents are revisited in a
 * seed-shuffled order each epoch; the learning rate decays linearly to 0.
 * Deterministic given (corpus, vocab, config). */
embedding_model train_embedding(const corpus &data, const vocabulary &vocab,
								const ft_train_config &config);

/* softmax(output x mean-embedding); ties broken by lower class index. An
 * empty id list yields exactly uniform probabilities (no bias term). */
std::vector<scored_label> predict_embedding(const embedding_model &model,
											std::span<const std::string> tokens,
											const vocabulary &vocab, int top_k);

} /* namespace pva */
