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

#include "pva/engine.hpp"

namespace pva {

std::vector<scored_label> loaded_model::predict_tokens(std::span<const std::string> tokens,
													   int top_k) const
{
	if (kind == model_kind::linear) {
		const sparse_vector x = tfidf_vector(tokens, vocab, idf);
		return predict_linear(linear, x, top_k);
	}
	return predict_embedding(embedding, tokens, vocab, top_k);
}

std::vector<scored_label> loaded_model::predict_text(std::string_view text, int top_k) const
{
	const auto tokens = tokenize(text);
	return predict_tokens(tokens, top_k);
}

loaded_model make_loaded(linear_model model, vocabulary vocab)
{
	loaded_model m;
	m.kind = model_kind::linear;
	m.vocab = std::move(vocab);
	m.idf = compute_idf(m.vocab);
	m.linear = std::move(model);
	return m;
}

loaded_model make_loaded(embedding_model model, vocabulary vocab)
{
	loaded_model m;
	m.kind = model_kind::embedding;
	m.vocab = std::move(vocab);
	m.idf = compute_idf(m.vocab);
	m.embedding = std::move(model);
	return m;
}

} /* namespace pva */
