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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pva {

struct document {
	std::string id;           /* relative path "<class>/<file>", unique per corpus */
	std::int32_t label = -1;  /* index into corpus::label_names, -1 if unlabeled */
	std::string text;
};

struct corpus {
	std::vector<std::string> label_names; /* sorted lexicographically, duplicate-free */
	std::vector<document> documents;      /* sorted-path order */
	std::string split_name;

	std::size_t size() const { return documents.size(); }
	std::int32_t num_labels() const { return static_cast<std::int32_t>(label_names.size()); }
};

struct corpus_summary {
	std::size_t total_documents = 0;
	std::vector<std::size_t> per_label;
};

/* Body after the first blank line; unchanged when no blank line exists. */
std::string strip_message_headers(std::string_view raw);

/* Loads <root>/<split>/<class>/<file> trees (the directory-per-class layout).
 * Class names become label_names in sorted order; files are read in sorted
 * order within each class. Text is decoded as UTF-8 with a Latin-1 fallback
 * for files that are not valid UTF-8, so two loads of the same tree are
 * byte-identical. */
corpus load_split(const std::filesystem::path &root, std::string_view split_name,
				  bool strip_headers);

corpus_summary summarize(const corpus &c);

/* True when the bytes form well-formed UTF-8 (no overlongs, no surrogates). */
bool is_valid_utf8(std::string_view bytes);

std::string latin1_to_utf8(std::string_view bytes);

} /* namespace pva */
