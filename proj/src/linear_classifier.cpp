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

#include "pva/linear_classifier.hpp"
#include "pva/errors.hpp"
#include "pva/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pva {

void softmax_in_place(std::span<double> logits)
{
	if (logits.empty()) {
		return;
	}
	double max_logit = logits[0];
	for (double v: logits) {
		max_logit = std::max(max_logit, v);
	}
	double sum = 0;
	for (double &v: logits) {
		v = std::exp(v - max_logit);
		sum += v;
	}
	for (double &v: logits) {
		v /= sum;
	}
}

std::vector<double> softmax(std::span<const double> logits)
{
	std::vector<double> probs(logits.begin(), logits.end());
	softmax_in_place(probs);
	return probs;
}

namespace {

std::vector<double> compute_logits(const linear_model &model, const sparse_vector &x)
{
	std::vector<double> logits(model.biases.begin(), model.biases.end());
	for (std::int32_t k = 0; k < model.num_classes; k++) {
		const double *row =
			model.weights.data() + static_cast<std::size_t>(k) * model.num_features;
		double dot = 0;
		for (const auto &e: x) {
			dot += row[e.index] * e.value;
		}
		logits[k] += dot;
	}
	return logits;
}

} /* anonymous namespace */

double linear_loss_and_gradient(const linear_model &model,
								std::span<const sparse_vector> batch_x,
								std::span<const std::int32_t> batch_y, double l2,
								linear_gradients *gradients)
{
	if (batch_x.empty() || batch_x.size() != batch_y.size()) {
		raise(errc::dimension_mismatch, "batch features and labels differ in length");
	}
	const std::size_t weight_count = model.weights.size();
	if (gradients) {
		gradients->weights.assign(weight_count, 0.0);
		gradients->biases.assign(model.biases.size(), 0.0);
	}

	const double inv_batch = 1.0 / static_cast<double>(batch_x.size());
	double loss = 0;
	for (std::size_t i = 0; i < batch_x.size(); i++) {
		const auto &x = batch_x[i];
		const std::int32_t y = batch_y[i];
		if (y < 0 || y >= model.num_classes) {
			raise(errc::label_out_of_range, "label outside [0, K)");
		}
		std::vector<double> probs = compute_logits(model, x);
		softmax_in_place(probs);
		loss += -std::log(std::max(probs[y], 1e-300)) * inv_batch;

		if (gradients) {
			for (std::int32_t k = 0; k < model.num_classes; k++) {
				const double g = (probs[k] - (k == y ? 1.0 : 0.0)) * inv_batch;
				gradients->biases[k] += g;
				double *grow = gradients->weights.data() +
							   static_cast<std::size_t>(k) * model.num_features;
				for (const auto &e: x) {
					grow[e.index] += g * e.value;
				}
			}
		}
	}

	double penalty = 0;
	for (double w: model.weights) {
		penalty += w * w;
	}
	loss += 0.5 * l2 * penalty;
	if (gradients) {
		for (std::size_t i = 0; i < weight_count; i++) {
			gradients->weights[i] += l2 * model.weights[i];
		}
	}
	return loss;
}

linear_model train_logistic(std::span<const sparse_vector> features,
							std::span<const std::int32_t> labels,
							std::vector<std::string> label_names,
							std::int32_t num_features, std::uint64_t vocab_fingerprint,
							const linear_train_config &config)
{
	if (features.size() != labels.size() || features.empty()) {
		raise(errc::dimension_mismatch, "need equally many feature vectors and labels");
	}
	if (config.epochs < 0 || config.lr0 <= 0 || config.l2 < 0 || config.batch_size < 1) {
		raise(errc::invalid_argument, "bad training configuration");
	}
	const std::int32_t num_classes = static_cast<std::int32_t>(label_names.size());
	if (num_classes < 2) {
		raise(errc::invalid_argument, "need at least two classes");
	}
	for (std::size_t i = 0; i < features.size(); i++) {
		if (labels[i] < 0 || labels[i] >= num_classes) {
			raise(errc::label_out_of_range, "label outside [0, K)");
		}
		for (const auto &e: features[i]) {
			if (e.index < 0 || e.index >= num_features) {
				raise(errc::dimension_mismatch, "feature index outside [0, D)");
			}
		}
	}

	linear_model model;
	model.num_classes = num_classes;
	model.num_features = num_features;
	model.weights.assign(static_cast<std::size_t>(num_classes) * num_features, 0.0);
	model.biases.assign(num_classes, 0.0);
	model.label_names = std::move(label_names);
	model.vocab_fingerprint = vocab_fingerprint;
	model.train_config = config;

	const std::size_t n = features.size();
	const std::size_t batches_per_epoch =
		(n + config.batch_size - 1) / static_cast<std::size_t>(config.batch_size);
	const std::size_t total_steps = static_cast<std::size_t>(config.epochs) * batches_per_epoch;
	if (total_steps == 0) {
		return model;
	}

	std::mt19937_64 gen(config.seed);
	std::vector<std::size_t> order(n);
	std::iota(order.begin(), order.end(), std::size_t{0});

	std::vector<double> probs(num_classes);
	std::size_t step = 0;

	for (int epoch = 0; epoch < config.epochs; epoch++) {
		shuffle_in_place(order, gen);

		for (std::size_t start = 0; start < n; start += config.batch_size) {
			const std::size_t end = std::min(n, start + config.batch_size);
			const double lr =
				config.lr0 * (1.0 - static_cast<double>(step) / static_cast<double>(total_steps));
			step++;

			if (end - start == 1) {
				/* Hot path: per-example update touching only the nonzeros. */
				const auto &x = features[order[start]];
				const std::int32_t y = labels[order[start]];
				probs = compute_logits(model, x);
				softmax_in_place(probs);
				for (std::int32_t k = 0; k < num_classes; k++) {
					const double g = probs[k] - (k == y ? 1.0 : 0.0);
					model.biases[k] -= lr * g;
					double *row = model.weights.data() +
								  static_cast<std::size_t>(k) * num_features;
					for (const auto &e: x) {
						/* L2 applied per touched coordinate so the update
						 * stays O(nnz). */
						row[e.index] -= lr * (g * e.value + config.l2 * row[e.index]);
					}
				}
				continue;
			}

			/* Mini-batch: gradients at the step's starting point, then one
			 * update over the union of touched coordinates. */
			std::vector<std::vector<double>> batch_probs;
			batch_probs.reserve(end - start);
			std::vector<double> bias_grad(num_classes, 0.0);
			const double inv_batch = 1.0 / static_cast<double>(end - start);
			for (std::size_t i = start; i < end; i++) {
				const auto &x = features[order[i]];
				auto p = compute_logits(model, x);
				softmax_in_place(p);
				for (std::int32_t k = 0; k < num_classes; k++) {
					bias_grad[k] += (p[k] - (k == labels[order[i]] ? 1.0 : 0.0)) * inv_batch;
				}
				batch_probs.push_back(std::move(p));
			}
			for (std::int32_t k = 0; k < num_classes; k++) {
				model.biases[k] -= lr * bias_grad[k];
				double *row =
					model.weights.data() + static_cast<std::size_t>(k) * num_features;
				for (std::size_t i = start; i < end; i++) {
					const auto &x = features[order[i]];
					const double g =
						(batch_probs[i - start][k] -
						 (k == labels[order[i]] ? 1.0 : 0.0)) *
						inv_batch;
					for (const auto &e: x) {
						row[e.index] -= lr * g * e.value;
					}
				}
				if (config.l2 > 0) {
					for (std::size_t i = start; i < end; i++) {
						for (const auto &e: features[order[i]]) {
							row[e.index] -= lr * config.l2 * row[e.index] * inv_batch;
						}
					}
				}
			}
		}
	}
	return model;
}

std::vector<scored_label> rank_probabilities(std::span<const double> probabilities, int top_k)
{
	if (top_k < 1) {
		raise(errc::invalid_argument, "top_k must be >= 1");
	}
	std::vector<std::int32_t> idx(probabilities.size());
	std::iota(idx.begin(), idx.end(), 0);
	std::sort(idx.begin(), idx.end(), [&](std::int32_t a, std::int32_t b) {
		if (probabilities[a] != probabilities[b]) {
			return probabilities[a] > probabilities[b];
		}
		return a < b;
	});
	const std::size_t keep = std::min<std::size_t>(idx.size(), static_cast<std::size_t>(top_k));
	std::vector<scored_label> ranked;
	ranked.reserve(keep);
	for (std::size_t i = 0; i < keep; i++) {
		ranked.push_back({idx[i], probabilities[idx[i]]});
	}
	return ranked;
}

std::vector<scored_label> predict_linear(const linear_model &model, const sparse_vector &x,
										 int top_k)
{
	std::vector<double> probs = compute_logits(model, x);
	softmax_in_place(probs);
	return rank_probabilities(probs, top_k);
}

} /* namespace pva */
