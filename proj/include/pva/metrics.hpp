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

#include "pva/corpus.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace pva {

struct confusion_matrix {
	std::int32_t num_classes = 0;
	std::vector<std::int64_t> counts; /* [gold * num_classes + predicted] */

	std::int64_t at(std::int32_t gold, std::int32_t predicted) const
	{
		return counts[static_cast<std::size_t>(gold) * num_classes + predicted];
	}
	std::int64_t total() const;
};

confusion_matrix confusion(std::span<const std::int32_t> golds,
						   std::span<const std::int32_t> predictions,
						   std::int32_t num_classes);

struct class_metrics {
	double precision = 0; /* diagonal / column sum, 0 when the column is empty */
	double recall = 0;    /* diagonal / row sum, 0 when the row is empty */
	double f1 = 0;        /* 2PR/(P+R), 0 when P+R == 0 */
	std::int64_t support = 0;
};

struct metric_triple {
	double precision = 0;
	double recall = 0;
	double f1 = 0;
};

struct classification_report {
	std::vector<class_metrics> per_class;
	double accuracy = 0;
	metric_triple macro_avg;    /* unweighted mean over classes */
	metric_triple weighted_avg; /* support-weighted mean over classes */
	std::int64_t total_support = 0;
};

classification_report report(const confusion_matrix &cm);

/* Three decimals, round half away from zero. */
std::string format_metric(double value);

/* Text table: one row per class, then accuracy / macro avg / weighted avg.
 * The accuracy row repeats its value in all three metric columns and shows
 * total_support in the support column. */
std::string render_report(const classification_report &r,
						  std::span<const std::string> label_names);

std::string report_to_json(const classification_report &r,
						   std::span<const std::string> label_names);

/* label,precision,recall,f1,support; summary rows appended after the classes. */
std::string report_to_csv(const classification_report &r,
						  std::span<const std::string> label_names);

struct latency_stats {
	double median_ms = 0;   /* median of timed pass totals */
	double p95_ms = 0;      /* nearest-rank 95th percentile of pass totals */
	double total_ms = 0;    /* sum of timed pass totals */
	double per_item_ms = 0; /* median_ms / item_count */
	std::int64_t item_count = 0;
};

/* Runs `warmup` untimed passes over docs, then `repeats` timed passes on the
 * calling thread, wall clock. */
latency_stats bench_latency(const std::function<void(const document &)> &predict,
							std::span<const document> docs, int warmup, int repeats);

} /* namespace pva */
