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

#include "pva/textproc.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pva {

struct linear_train_config {
	int epochs = 20;
	double lr0 = 0.5;
	double l2 = 1e-6;
	std::uint64_t seed = 42;
	int batch_size = 1;
};

struct linear_model {
	std::int32_t num_classes = 0;
	std::int32_t num_features = 0;
	std::vector<double> weights; /* num_classes x num_features, row-major */
	std::vector<double> biases;  /* num_classes */
	std::vector<std::string> label_names;
	std::uint64_t vocab_fingerprint = 0;
	linear_train_config train_config; /* echo, persisted in the model header */

	double weight(std::int32_t cls, std::int32_t feature) const
	{
		return weights[static_cast<std::size_t>(cls) * num_features + feature];
	}
};

/* Numerically stable: the max logit is subtracted before exponentiation. */
std::vector<double> softmax(std::span<const double> logits);
void softmax_in_place(std::span<double> logits);

struct linear_gradients {
	std::vector<double> weights;
	std::vector<double> biases;
};

/* Mean cross-entropy over the batch plus (l2/2)*||W||^2. When gradients is
 * non-null it receives dense d(loss)/d(weights) and d(loss)/d(biases). */
double linear_loss_and_gradient(const linear_model &model,
								std::span<const sparse_vector> batch_x,
								std::span<const std::int32_t> batch_y, double l2,
								linear_gradients *gradients);

/* Plain SGD from a zero model: examples reshuffled each epoch from a
 * generator seeded by config.seed, learning rate decaying linearly from lr0
 * to 0 over the total step count. Deterministic given (data, config). */
linear_model train_logistic(std::span<const sparse_vector> features,
							std::span<const std::int32_t> labels,
							std::vector<std::string> label_names,
							std::int32_t num_features, std::uint64_t vocab_fingerprint,
							const linear_train_config &config);

struct scored_label {
	std::int32_t label;
	double probability;
};

/* Full softmax ranking truncated to top_k; ties broken by lower class index.
 * An empty feature vector scores the biases alone. */
std::vector<scored_label> predict_linear(const linear_model &model, const sparse_vector &x,
										 int top_k);

/* Descending by probability, ties by lower index; prefix of length top_k. */
std::vector<scored_label> rank_probabilities(std::span<const double> probabilities, int top_k);

} /* namespace pva */
