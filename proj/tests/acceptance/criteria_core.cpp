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

#include "acceptance.hpp"

#include "pva/embedding_classifier.hpp"
#include "pva/linear_classifier.hpp"
#include "pva/metrics.hpp"
#include "pva/model_io.hpp"
#include "pva/rng.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace acceptance {

namespace {

using namespace pva;

/* criterion 5 — report() against a brute-force recomputation */
void metrics_oracle(std::string &notes)
{
	std::mt19937_64 gen(101);
	for (int trial = 0; trial < 100; trial++) {
		const std::int32_t k = 2 + static_cast<std::int32_t>(gen() % 9);
		const std::size_t n = 1 + gen() % 500;
		std::vector<std::int32_t> golds(n), preds(n);
		for (std::size_t i = 0; i < n; i++) {
			golds[i] = static_cast<std::int32_t>(gen() % k);
			preds[i] = static_cast<std::int32_t>(gen() % k);
		}
		const auto r = report(confusion(golds, preds, k));

		for (std::int32_t c = 0; c < k; c++) {
			std::int64_t tp = 0, fp = 0, fn = 0, support = 0;
			for (std::size_t i = 0; i < n; i++) {
				if (golds[i] == c) {
					support++;
					golds[i] == preds[i] ? tp++ : fn++;
				}
				else if (preds[i] == c) {
					fp++;
				}
			}
			const double precision = tp + fp > 0 ? double(tp) / (tp + fp) : 0.0;
			const double recall = tp + fn > 0 ? double(tp) / (tp + fn) : 0.0;
			const double f1 = precision + recall > 0
								  ? 2 * precision * recall / (precision + recall)
								  : 0.0;
			require(std::abs(r.per_class[c].precision - precision) <= 1e-12,
					"precision differs from brute force");
			require(std::abs(r.per_class[c].recall - recall) <= 1e-12,
					"recall differs from brute force");
			require(std::abs(r.per_class[c].f1 - f1) <= 1e-12,
					"f1 differs from brute force");
			require(r.per_class[c].support == support, "support differs");
		}

		std::size_t correct = 0;
		double weighted_recall = 0;
		for (std::size_t i = 0; i < n; i++) {
			correct += golds[i] == preds[i];
		}
		for (std::int32_t c = 0; c < k; c++) {
			weighted_recall += r.per_class[c].recall *
							   static_cast<double>(r.per_class[c].support) / n;
		}
		require(std::abs(r.accuracy - double(correct) / n) <= 1e-12,
				"accuracy differs from brute force");
		require(std::abs(r.accuracy - weighted_recall) <= 1e-12,
				"accuracy != support-weighted mean recall");
	}
	notes = "100 random label sets, all fields within 1e-12";
}

/* criterion 6 — analytic gradients vs central finite differences */
void gradient_checks(std::string &notes)
{
	std::mt19937_64 gen(103);
	auto rand_unit = [&gen]() { return uniform_unit(gen) * 2.0 - 1.0; };
	double worst = 0;

	/* linear */
	for (int trial = 0; trial < 3; trial++) {
		const std::int32_t k = 3, d = 4;
		linear_model m;
		m.num_classes = k;
		m.num_features = d;
		m.weights.resize(static_cast<std::size_t>(k) * d);
		m.biases.resize(k);
		for (auto &w: m.weights) {
			w = rand_unit();
		}
		for (auto &b: m.biases) {
			b = rand_unit();
		}
		std::vector<sparse_vector> xs;
		std::vector<std::int32_t> ys;
		for (int i = 0; i < 3; i++) {
			sparse_vector x;
			for (std::int32_t j = 0; j < d; j++) {
				x.push_back({j, rand_unit()});
			}
			xs.push_back(x);
			ys.push_back(static_cast<std::int32_t>(gen() % k));
		}
		linear_gradients analytic;
		linear_loss_and_gradient(m, xs, ys, 0.05, &analytic);

		const double h = 1e-4;
		for (std::size_t i = 0; i < m.weights.size(); i++) {
			linear_model plus = m, minus = m;
			plus.weights[i] += h;
			minus.weights[i] -= h;
			const double fd =
				(linear_loss_and_gradient(plus, xs, ys, 0.05, nullptr) -
				 linear_loss_and_gradient(minus, xs, ys, 0.05, nullptr)) /
				(2 * h);
			const double rel = std::abs(analytic.weights[i] - fd) /
							   std::max({std::abs(fd), std::abs(analytic.weights[i]), 1e-8});
			worst = std::max(worst, rel);
			require(rel < 1e-4, "linear weight gradient off by " + str(rel));
		}
	}

	/* embedding: V=5, B=4, dim=3, K=2 in double precision */
	{
		const std::int32_t dim = 3, k = 2;
		std::vector<double> input(9 * dim), output(k * dim);
		for (auto &v: input) {
			v = rand_unit();
		}
		for (auto &v: output) {
			v = rand_unit();
		}
		const std::vector<std::int64_t> ids{0, 2, 2, 5, 8};
		const std::int32_t label = 1;

		std::vector<double> new_input = input, new_output = output;
		ft_sgd_step<double>(new_input, new_output, dim, k, ids, label, 1.0);

		const double h = 1e-4;
		for (std::size_t i = 0; i < input.size(); i++) {
			std::vector<double> probe = input;
			probe[i] = input[i] + h;
			const double up = ft_example_loss<double>(probe, output, dim, k, ids, label);
			probe[i] = input[i] - h;
			const double down =
				ft_example_loss<double>(probe, output, dim, k, ids, label);
			const double fd = (up - down) / (2 * h);
			const double implied = input[i] - new_input[i];
			const double rel = std::abs(implied - fd) /
							   std::max({std::abs(fd), std::abs(implied), 1e-8});
			worst = std::max(worst, rel);
			require(rel < 1e-4, "embedding input gradient off by " + str(rel));
		}
		for (std::size_t i = 0; i < output.size(); i++) {
			std::vector<double> probe = output;
			probe[i] = output[i] + h;
			const double up = ft_example_loss<double>(input, probe, dim, k, ids, label);
			probe[i] = output[i] - h;
			const double down =
				ft_example_loss<double>(input, probe, dim, k, ids, label);
			const double fd = (up - down) / (2 * h);
			const double implied = output[i] - new_output[i];
			const double rel = std::abs(implied - fd) /
							   std::max({std::abs(fd), std::abs(implied), 1e-8});
			worst = std::max(worst, rel);
			require(rel < 1e-4, "embedding output gradient off by " + str(rel));
		}
	}
	notes = "worst relative error " + str(worst);
}

/* criterion 7 — softmax properties */
void softmax_properties(std::string &notes)
{
	std::mt19937_64 gen(107);
	for (int trial = 0; trial < 500; trial++) {
		const std::size_t k = 2 + gen() % 10;
		std::vector<double> logits(k);
		for (auto &v: logits) {
			v = uniform_unit(gen) * 40.0 - 20.0;
		}
		const auto p = softmax(logits);
		double sum = 0;
		for (double v: p) {
			require(std::isfinite(v) && v >= 0.0, "probability out of range");
			sum += v;
		}
		require(std::abs(sum - 1.0) <= 1e-9, "softmax sum off: " + str(sum));

		const double shift = uniform_unit(gen) * 200.0 - 100.0;
		auto shifted = logits;
		for (auto &v: shifted) {
			v += shift;
		}
		const auto q = softmax(shifted);
		for (std::size_t i = 0; i < k; i++) {
			require(std::abs(p[i] - q[i]) <= 1e-9, "softmax not shift invariant");
		}
	}
	/* extreme logits must not overflow */
	const auto extreme = softmax(std::vector<double>{1000.0, -1000.0, 1000.0});
	require(std::isfinite(extreme[0]) && std::abs(extreme[0] - 0.5) <= 1e-9,
			"overflow at logits +-1000");
	notes = "sum, shift invariance, and +-1000 logits all within 1e-9";
}

/* criterion 8 — persistence round trips */
void persistence(std::string &notes)
{
	testing::temp_dir dir;
	testing::make_toy_split(dir.path(), "train");
	const corpus data = load_split(dir.path(), "train", false);
	vocabulary vocab = build_vocabulary(data);
	const auto idf = compute_idf(vocab);

	std::vector<sparse_vector> xs;
	std::vector<std::int32_t> ys;
	for (const auto &doc: data.documents) {
		xs.push_back(tfidf_vector(tokenize(doc.text), vocab, idf));
		ys.push_back(doc.label);
	}
	linear_train_config config;
	config.epochs = 6;
	linear_model trained = train_logistic(xs, ys, data.label_names,
										  static_cast<std::int32_t>(vocab.size()),
										  vocab.fingerprint(), config);
	const loaded_model original = make_loaded(std::move(trained), std::move(vocab));

	const auto p1 = dir.path() / "m1.pva";
	const auto p2 = dir.path() / "m2.pva";
	save_model(original, p1);
	const loaded_model loaded = load_model(p1);
	save_model(loaded, p2);

	auto slurp = [](const std::filesystem::path &p) {
		std::ifstream in(p, std::ios::binary);
		std::ostringstream buf;
		buf << in.rdbuf();
		return std::move(buf).str();
	};
	require(slurp(p1) == slurp(p2), "save -> load -> save not byte-identical");

	/* narrowed in-memory reference */
	loaded_model narrowed = original;
	for (auto &w: narrowed.linear.weights) {
		w = static_cast<float>(w);
	}
	for (auto &b: narrowed.linear.biases) {
		b = static_cast<float>(b);
	}

	std::mt19937_64 gen(109);
	for (int i = 0; i < 100; i++) {
		std::vector<std::string> tokens;
		const std::size_t len = 1 + gen() % 8;
		for (std::size_t t = 0; t < len; t++) {
			tokens.push_back(original.vocab.tokens[gen() % original.vocab.size()]);
		}
		const auto a = loaded.predict_tokens(tokens, 2);
		const auto b = narrowed.predict_tokens(tokens, 2);
		require(a.size() == b.size(), "ranking sizes differ");
		for (std::size_t j = 0; j < a.size(); j++) {
			require(a[j].label == b[j].label, "label differs after round trip");
			require(a[j].probability == b[j].probability,
					"probability not bitwise-identical after round trip");
		}
	}
	notes = "byte-identical resave; 100 documents predict bitwise-identically";
}

} /* anonymous namespace */

std::vector<criterion> core_criteria()
{
	return {
		{5, "metrics oracle", metrics_oracle},
		{6, "gradient checks", gradient_checks},
		{7, "softmax properties", softmax_properties},
		{8, "persistence", persistence},
	};
}

} /* namespace acceptance */
