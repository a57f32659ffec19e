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

#include "pva/textproc.hpp"
#include "pva/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace pva {

namespace {

/* Word-character classification without an ICU dependency: ASCII
 * alphanumerics and Latin-1 letters are word characters; codepoints past
 * Latin-1 count as word characters unless they sit in a punctuation block.
 * The corpus loader's Latin-1 fallback never emits codepoints >= U+0100. */
bool is_word_codepoint(std::uint32_t cp)
{
	if (cp < 0x80) {
		return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
			   (cp >= 'A' && cp <= 'Z');
	}
	if (cp < 0x100) {
		return cp == 0xAA || cp == 0xB5 || cp == 0xBA ||
			   (cp >= 0xC0 && cp != 0xD7 && cp != 0xF7);
	}
	const bool general_punct = cp >= 0x2000 && cp <= 0x206F;
	const bool cjk_punct = cp >= 0x3000 && cp <= 0x303F;
	return !general_punct && !cjk_punct;
}

std::uint32_t lower_codepoint(std::uint32_t cp)
{
	if (cp >= 'A' && cp <= 'Z') {
		return cp + 0x20;
	}
	if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) {
		return cp + 0x20;
	}
	return cp;
}

void append_utf8(std::string &out, std::uint32_t cp)
{
	if (cp < 0x80) {
		out.push_back(static_cast<char>(cp));
	}
	else if (cp < 0x800) {
		out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
		out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
	}
	else if (cp < 0x10000) {
		out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
		out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
		out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
	}
	else {
		out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
		out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
		out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
		out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
	}
}

/* Decodes the next codepoint; malformed bytes decode as one codepoint each
 * so tokenization still terminates on arbitrary input. */
std::uint32_t next_codepoint(std::string_view s, std::size_t &i)
{
	const unsigned char c = static_cast<unsigned char>(s[i]);
	std::size_t extra = 0;
	std::uint32_t cp = c;
	if ((c & 0xE0) == 0xC0) {
		extra = 1;
		cp = c & 0x1F;
	}
	else if ((c & 0xF0) == 0xE0) {
		extra = 2;
		cp = c & 0x0F;
	}
	else if ((c & 0xF8) == 0xF0) {
		extra = 3;
		cp = c & 0x07;
	}
	else if (c >= 0x80) {
		i++;
		return 0xFFFD;
	}
	if (i + extra >= s.size()) {
		i++;
		return 0xFFFD;
	}
	for (std::size_t k = 1; k <= extra; k++) {
		const unsigned char cc = static_cast<unsigned char>(s[i + k]);
		if ((cc & 0xC0) != 0x80) {
			i++;
			return 0xFFFD;
		}
		cp = (cp << 6) | (cc & 0x3F);
	}
	i += extra + 1;
	return cp;
}

} /* anonymous namespace */

std::vector<std::string> tokenize(std::string_view text)
{
	std::vector<std::string> tokens;
	std::string current;
	std::size_t current_length = 0; /* in codepoints */

	std::size_t i = 0;
	while (i < text.size()) {
		const std::uint32_t cp = next_codepoint(text, i);
		if (cp != 0xFFFD && is_word_codepoint(cp)) {
			append_utf8(current, lower_codepoint(cp));
			current_length++;
		}
		else if (!current.empty()) {
			if (current_length >= 2) {
				tokens.push_back(std::move(current));
			}
			current.clear();
			current_length = 0;
		}
	}
	if (current_length >= 2) {
		tokens.push_back(std::move(current));
	}
	return tokens;
}

void vocabulary::rebuild_index()
{
	index_.clear();
	index_.reserve(tokens.size());
	for (std::size_t i = 0; i < tokens.size(); i++) {
		index_.emplace(tokens[i], static_cast<std::int32_t>(i));
	}
}

std::uint64_t vocabulary::fingerprint() const
{
	/* FNV-1a over the document count, then each token with its df. */
	std::uint64_t h = 0xcbf29ce484222325ULL;
	auto mix_u64 = [&h](std::uint64_t v) {
		for (int b = 0; b < 8; b++) {
			h ^= (v >> (8 * b)) & 0xFF;
			h *= 0x100000001b3ULL;
		}
	};
	mix_u64(num_documents);
	for (std::size_t i = 0; i < tokens.size(); i++) {
		mix_u64(tokens[i].size());
		for (unsigned char c: tokens[i]) {
			h ^= c;
			h *= 0x100000001b3ULL;
		}
		mix_u64(doc_frequency[i]);
	}
	return h;
}

vocabulary build_vocabulary(const corpus &c, const vocab_options &options)
{
	if (options.min_df < 1) {
		raise(errc::invalid_argument, "min_df must be >= 1");
	}
	if (!(options.max_df_ratio > 0.0) || options.max_df_ratio > 1.0) {
		raise(errc::invalid_argument, "max_df_ratio must be in (0, 1]");
	}

	struct token_stats {
		std::uint32_t df = 0;
		std::uint64_t count = 0;
		std::uint64_t last_doc = UINT64_MAX;
	};
	std::unordered_map<std::string, token_stats, string_hash, std::equal_to<>> stats;

	std::uint64_t doc_index = 0;
	for (const auto &doc: c.documents) {
		for (auto &token: tokenize(doc.text)) {
			auto [it, inserted] = stats.try_emplace(std::move(token));
			it->second.count++;
			if (it->second.last_doc != doc_index) {
				it->second.last_doc = doc_index;
				it->second.df++;
			}
		}
		doc_index++;
	}

	const double max_df = options.max_df_ratio * static_cast<double>(c.documents.size());

	std::vector<std::pair<std::string_view, const token_stats *>> kept;
	kept.reserve(stats.size());
	for (const auto &[token, st]: stats) {
		if (st.df < options.min_df || static_cast<double>(st.df) > max_df) {
			continue;
		}
		if (options.stopwords.contains(std::string(token))) {
			continue;
		}
		kept.emplace_back(token, &st);
	}

	if (options.max_features && kept.size() > *options.max_features) {
		std::sort(kept.begin(), kept.end(), [](const auto &a, const auto &b) {
			if (a.second->count != b.second->count) {
				return a.second->count > b.second->count;
			}
			return a.first < b.first;
		});
		kept.resize(*options.max_features);
	}

	std::sort(kept.begin(), kept.end(),
			  [](const auto &a, const auto &b) { return a.first < b.first; });

	if (kept.empty()) {
		raise(errc::empty_vocabulary, "all tokens were filtered out");
	}

	vocabulary vocab;
	vocab.num_documents = c.documents.size();
	vocab.tokens.reserve(kept.size());
	vocab.doc_frequency.reserve(kept.size());
	for (const auto &[token, st]: kept) {
		vocab.tokens.emplace_back(token);
		vocab.doc_frequency.push_back(st->df);
	}
	vocab.rebuild_index();
	return vocab;
}

std::vector<double> compute_idf(const vocabulary &vocab)
{
	std::vector<double> idf(vocab.size());
	const double n = static_cast<double>(vocab.num_documents);
	for (std::size_t i = 0; i < vocab.size(); i++) {
		idf[i] = std::log((1.0 + n) / (1.0 + vocab.doc_frequency[i])) + 1.0;
	}
	return idf;
}

sparse_vector tfidf_vector(std::span<const std::string> tokens, const vocabulary &vocab,
						   std::span<const double> idf)
{
	if (vocab.size() == 0) {
		raise(errc::empty_vocabulary, "cannot vectorize with an empty vocabulary");
	}

	std::unordered_map<std::int32_t, std::int32_t> counts;
	for (const auto &token: tokens) {
		const std::int32_t idx = vocab.find(token);
		if (idx >= 0) {
			counts[idx]++;
		}
	}
	sparse_vector v;
	v.reserve(counts.size());
	for (const auto &[idx, count]: counts) {
		v.push_back({idx, static_cast<double>(count) * idf[idx]});
	}
	std::sort(v.begin(), v.end(),
			  [](const sparse_entry &a, const sparse_entry &b) { return a.index < b.index; });

	double norm_sq = 0;
	for (const auto &e: v) {
		norm_sq += e.value * e.value;
	}
	if (norm_sq > 0) {
		const double inv = 1.0 / std::sqrt(norm_sq);
		for (auto &e: v) {
			e.value *= inv;
		}
	}
	return v;
}

double l2_norm(const sparse_vector &v)
{
	double s = 0;
	for (const auto &e: v) {
		s += e.value * e.value;
	}
	return std::sqrt(s);
}

std::vector<std::string> word_ngrams(std::span<const std::string> tokens, int max_n)
{
	if (max_n < 1) {
		raise(errc::invalid_argument, "max_n must be >= 1");
	}
	std::vector<std::string> grams;
	for (int n = 2; n <= max_n; n++) {
		if (tokens.size() < static_cast<std::size_t>(n)) {
			break;
		}
		for (std::size_t i = 0; i + n <= tokens.size(); i++) {
			std::string g = tokens[i];
			for (int k = 1; k < n; k++) {
				g.push_back('\x1f');
				g += tokens[i + k];
			}
			grams.push_back(std::move(g));
		}
	}
	return grams;
}

std::uint64_t fnv1a64(std::string_view bytes)
{
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for (unsigned char c: bytes) {
		h ^= c;
		h *= 0x100000001b3ULL;
	}
	return h;
}

std::uint64_t hash_ngram(std::string_view ngram, std::uint64_t buckets)
{
	if (buckets < 1) {
		raise(errc::invalid_argument, "buckets must be >= 1");
	}
	return fnv1a64(ngram) % buckets;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path &path)
{
	std::ifstream in(path);
	if (!in) {
		raise(errc::io_failure, "cannot open stopword list: " + path.string());
	}
	std::unordered_set<std::string> words;
	std::string line;
	while (std::getline(in, line)) {
		if (!line.empty() && line.back() == '\r') {
			line.pop_back();
		}
		if (line.empty() || line.front() == '#') {
			continue;
		}
		words.insert(line);
	}
	return words;
}

} /* namespace pva */
