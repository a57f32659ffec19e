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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pva {

/* Lowercased maximal runs of word characters (Unicode alphanumerics);
 * single-character runs are dropped. */
std::vector<std::string> tokenize(std::string_view text);

struct string_hash {
	using is_transparent = void;
	std::size_t operator()(std::string_view s) const
	{
		return std::hash<std::string_view>{}(s);
	}
};

struct vocabulary {
	/* Index order is lexicographic by token; indices are dense [0, size). */
	std::vector<std::string> tokens;
	std::vector<std::uint32_t> doc_frequency;
	std::uint64_t num_documents = 0;

	std::size_t size() const { return tokens.size(); }

	/* -1 when absent. */
	std::int32_t find(std::string_view token) const
	{
		auto it = index_.find(token);
		return it == index_.end() ? -1 : it->second;
	}

	void rebuild_index();
	std::uint64_t fingerprint() const;

private:
	std::unordered_map<std::string, std::int32_t, string_hash, std::equal_to<>> index_;
};

struct vocab_options {
	std::uint32_t min_df = 1;
	double max_df_ratio = 1.0;
	std::optional<std::size_t> max_features;
	std::unordered_set<std::string> stopwords;
};

vocabulary build_vocabulary(const corpus &c, const vocab_options &options = {});

/* idf[t] = ln((1 + N) / (1 + df[t])) + 1 */
std::vector<double> compute_idf(const vocabulary &vocab);

struct sparse_entry {
	std::int32_t index;
	double value;
};

/* Entries strictly increasing by index, values finite and nonzero. */
using sparse_vector = std::vector<sparse_entry>;

/* Raw-count TF times IDF, L2-normalized. All-out-of-vocabulary input yields
 * the empty vector. */
sparse_vector tfidf_vector(std::span<const std::string> tokens, const vocabulary &vocab,
						   std::span<const double> idf);

double l2_norm(const sparse_vector &v);

/* Contiguous n-grams for n in [2, max_n], tokens joined by U+001F. */
std::vector<std::string> word_ngrams(std::span<const std::string> tokens, int max_n);

std::uint64_t fnv1a64(std::string_view bytes);

/* FNV-1a 64 of the UTF-8 bytes, modulo buckets (buckets >= 1). */
std::uint64_t hash_ngram(std::string_view ngram, std::uint64_t buckets);

/* One token per line, UTF-8; '#' lines and blank lines ignored. */
std::unordered_set<std::string> load_stopwords(const std::filesystem::path &path);

} /* namespace pva */
