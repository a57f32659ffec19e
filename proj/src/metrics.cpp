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

#include "pva/metrics.hpp"
#include "pva/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

namespace pva {

std::int64_t confusion_matrix::total() const
{
	return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

confusion_matrix confusion(std::span<const std::int32_t> golds,
						   std::span<const std::int32_t> predictions,
						   std::int32_t num_classes)
{
	if (golds.size() != predictions.size()) {
		raise(errc::length_mismatch, "gold and prediction lists differ in length");
	}
	confusion_matrix cm;
	cm.num_classes = num_classes;
	cm.counts.assign(static_cast<std::size_t>(num_classes) * num_classes, 0);
	for (std::size_t i = 0; i < golds.size(); i++) {
		const std::int32_t g = golds[i];
		const std::int32_t p = predictions[i];
		if (g < 0 || g >= num_classes || p < 0 || p >= num_classes) {
			raise(errc::label_out_of_range, "label outside [0, K)");
		}
		cm.counts[static_cast<std::size_t>(g) * num_classes + p]++;
	}
	return cm;
}

classification_report report(const confusion_matrix &cm)
{
	const std::int32_t k = cm.num_classes;
	classification_report r;
	r.per_class.resize(k);

	std::int64_t trace = 0;
	for (std::int32_t c = 0; c < k; c++) {
		std::int64_t row_sum = 0;
		std::int64_t col_sum = 0;
		for (std::int32_t j = 0; j < k; j++) {
			row_sum += cm.at(c, j);
			col_sum += cm.at(j, c);
		}
		const std::int64_t diag = cm.at(c, c);
		trace += diag;

		auto &m = r.per_class[c];
		m.support = row_sum;
		m.precision = col_sum > 0 ? static_cast<double>(diag) / col_sum : 0.0;
		m.recall = row_sum > 0 ? static_cast<double>(diag) / row_sum : 0.0;
		m.f1 = (m.precision + m.recall) > 0
				   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
				   : 0.0;
		r.total_support += row_sum;
	}

	r.accuracy = r.total_support > 0 ? static_cast<double>(trace) / r.total_support : 0.0;

	for (std::int32_t c = 0; c < k; c++) {
		const auto &m = r.per_class[c];
		r.macro_avg.precision += m.precision / k;
		r.macro_avg.recall += m.recall / k;
		r.macro_avg.f1 += m.f1 / k;
		if (r.total_support > 0) {
			const double w = static_cast<double>(m.support) / r.total_support;
			r.weighted_avg.precision += w * m.precision;
			r.weighted_avg.recall += w * m.recall;
			r.weighted_avg.f1 += w * m.f1;
		}
	}
	return r;
}

std::string format_metric(double value)
{
	/* llround rounds half away from zero, which is the table's rule. */
	long long scaled = std::llround(value * 1000.0);
	std::string sign;
	if (scaled < 0) {
		sign = "-";
		scaled = -scaled;
	}
	std::ostringstream out;
	out << sign << scaled / 1000 << '.';
	const long long frac = scaled % 1000;
	out << static_cast<char>('0' + frac / 100) << static_cast<char>('0' + (frac / 10) % 10)
		<< static_cast<char>('0' + frac % 10);
	return std::move(out).str();
}

namespace {

constexpr std::size_t metric_cell = 11;

std::string pad_left(std::string_view s, std::size_t width)
{
	std::string out(width > s.size() ? width - s.size() : 0, ' ');
	out += s;
	return out;
}

void render_row(std::ostringstream &out, std::string_view name, std::size_t name_width,
				std::string_view p, std::string_view r, std::string_view f1,
				std::string_view support)
{
	out << pad_left(name, name_width) << pad_left(p, metric_cell)
		<< pad_left(r, metric_cell) << pad_left(f1, metric_cell)
		<< pad_left(support, metric_cell) << '\n';
}

} /* anonymous namespace */

std::string render_report(const classification_report &r,
						  std::span<const std::string> label_names)
{
	std::size_t name_width = 12; /* fits "weighted avg" */
	for (const auto &name: label_names) {
		name_width = std::max(name_width, name.size());
	}

	std::ostringstream out;
	render_row(out, "class", name_width, "precision", "recall", "f1-score", "support");
	out << '\n';

	for (std::size_t c = 0; c < r.per_class.size(); c++) {
		const auto &m = r.per_class[c];
		const std::string name =
			c < label_names.size() ? label_names[c] : std::to_string(c);
		render_row(out, name, name_width, format_metric(m.precision),
				   format_metric(m.recall), format_metric(m.f1),
				   std::to_string(m.support));
	}
	out << '\n';
	const std::string acc = format_metric(r.accuracy);
	const std::string total = std::to_string(r.total_support);
	render_row(out, "accuracy", name_width, acc, acc, acc, total);
	render_row(out, "macro avg", name_width, format_metric(r.macro_avg.precision),
			   format_metric(r.macro_avg.recall), format_metric(r.macro_avg.f1), total);
	render_row(out, "weighted avg", name_width, format_metric(r.weighted_avg.precision),
			   format_metric(r.weighted_avg.recall), format_metric(r.weighted_avg.f1),
			   total);
	return std::move(out).str();
}

std::string report_to_json(const classification_report &r,
						   std::span<const std::string> label_names)
{
	nlohmann::json doc;
	doc["per_class"] = nlohmann::json::array();
	for (std::size_t c = 0; c < r.per_class.size(); c++) {
		const auto &m = r.per_class[c];
		doc["per_class"].push_back({
			{"label", c < label_names.size() ? label_names[c] : std::to_string(c)},
			{"precision", m.precision},
			{"recall", m.recall},
			{"f1", m.f1},
			{"support", m.support},
		});
	}
	doc["accuracy"] = r.accuracy;
	doc["macro_avg"] = {{"precision", r.macro_avg.precision},
						{"recall", r.macro_avg.recall},
						{"f1", r.macro_avg.f1}};
	doc["weighted_avg"] = {{"precision", r.weighted_avg.precision},
						   {"recall", r.weighted_avg.recall},
						   {"f1", r.weighted_avg.f1}};
	doc["total_support"] = r.total_support;
	return doc.dump(2);
}

std::string report_to_csv(const classification_report &r,
						  std::span<const std::string> label_names)
{
	std::ostringstream out;
	out << "label,precision,recall,f1,support\n";
	for (std::size_t c = 0; c < r.per_class.size(); c++) {
		const auto &m = r.per_class[c];
		out << (c < label_names.size() ? label_names[c] : std::to_string(c)) << ','
			<< format_metric(m.precision) << ',' << format_metric(m.recall) << ','
			<< format_metric(m.f1) << ',' << m.support << '\n';
	}
	const std::string acc = format_metric(r.accuracy);
	out << "accuracy," << acc << ',' << acc << ',' << acc << ',' << r.total_support << '\n';
	out << "macro avg," << format_metric(r.macro_avg.precision) << ','
		<< format_metric(r.macro_avg.recall) << ',' << format_metric(r.macro_avg.f1) << ','
		<< r.total_support << '\n';
	out << "weighted avg," << format_metric(r.weighted_avg.precision) << ','
		<< format_metric(r.weighted_avg.recall) << ',' << format_metric(r.weighted_avg.f1)
		<< ',' << r.total_support << '\n';
	return std::move(out).str();
}

latency_stats bench_latency(const std::function<void(const document &)> &predict,
							std::span<const document> docs, int warmup, int repeats)
{
	if (docs.empty()) {
		raise(errc::empty_input, "bench_latency needs at least one document");
	}
	if (repeats < 1) {
		raise(errc::invalid_argument, "repeats must be >= 1");
	}

	using clock = std::chrono::steady_clock;

	for (int w = 0; w < warmup; w++) {
		for (const auto &doc: docs) {
			predict(doc);
		}
	}

	std::vector<double> pass_ms;
	pass_ms.reserve(static_cast<std::size_t>(repeats));
	for (int rep = 0; rep < repeats; rep++) {
		const auto begin = clock::now();
		for (const auto &doc: docs) {
			predict(doc);
		}
		const auto end = clock::now();
		pass_ms.push_back(std::chrono::duration<double, std::milli>(end - begin).count());
	}

	std::vector<double> sorted = pass_ms;
	std::sort(sorted.begin(), sorted.end());

	latency_stats stats;
	stats.item_count = static_cast<std::int64_t>(docs.size());
	stats.total_ms = std::accumulate(pass_ms.begin(), pass_ms.end(), 0.0);
	const std::size_t m = sorted.size();
	stats.median_ms =
		m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
	const std::size_t rank =
		std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.95 * m)));
	stats.p95_ms = sorted[rank - 1];
	stats.per_item_ms = stats.median_ms / static_cast<double>(docs.size());
	return stats;
}

} /* namespace pva */
