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

#include "pva/embedding_classifier.hpp"
#include "pva/linear_classifier.hpp"
#include "pva/textproc.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pva {

enum class model_kind : std::uint8_t {
	linear = 1,
	embedding = 2,
};

/* A servable model: the trained parameters plus the vocabulary they were
 * built on. Immutable after construction and safe to share across threads. */
struct loaded_model {
	model_kind kind = model_kind::linear;
	vocabulary vocab;
	std::vector<double> idf; /* derived from vocab; used by the linear family */
	linear_model linear;
	embedding_model embedding;

	const std::vector<std::string> &label_names() const
	{
		return kind == model_kind::linear ? linear.label_names : embedding.label_names;
	}
	std::int32_t num_classes() const
	{
		return static_cast<std::int32_t>(label_names().size());
	}

	std::vector<scored_label> predict_tokens(std::span<const std::string> tokens,
											 int top_k) const;
	std::vector<scored_label> predict_text(std::string_view text, int top_k) const;
};

loaded_model make_loaded(linear_model model, vocabulary vocab);
loaded_model make_loaded(embedding_model model, vocabulary vocab);

} /* namespace pva */
