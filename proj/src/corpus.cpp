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

#include "pva/corpus.hpp"
#include "pva/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pva {

namespace fs = std::filesystem;

std::string strip_message_headers(std::string_view raw)
{
	/* First blank line = two consecutive line breaks, where a line break is
	 * "\n" or "\r\n". */
	for (std::size_t i = 0; i < raw.size(); i++) {
		if (raw[i] != '\n') {
			continue;
		}
		if (i + 1 < raw.size() && raw[i + 1] == '\n') {
			return std::string(raw.substr(i + 2));
		}
		if (i + 2 < raw.size() && raw[i + 1] == '\r' && raw[i + 2] == '\n') {
			return std::string(raw.substr(i + 3));
		}
	}
	return std::string(raw);
}

bool is_valid_utf8(std::string_view bytes)
{
	std::size_t i = 0;
	const std::size_t n = bytes.size();
	while (i < n) {
		const unsigned char c = static_cast<unsigned char>(bytes[i]);
		if (c < 0x80) {
			i++;
			continue;
		}
		std::size_t extra;
		unsigned int cp;
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
		else {
			return false;
		}
		if (i + extra >= n) {
			return false;
		}
		for (std::size_t k = 1; k <= extra; k++) {
			const unsigned char cc = static_cast<unsigned char>(bytes[i + k]);
			if ((cc & 0xC0) != 0x80) {
				return false;
			}
			cp = (cp << 6) | (cc & 0x3F);
		}
		/* overlong encodings, surrogates, out of range */
		static constexpr unsigned int min_cp[4] = {0, 0x80, 0x800, 0x10000};
		if (cp < min_cp[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
			return false;
		}
		i += extra + 1;
	}
	return true;
}

std::string latin1_to_utf8(std::string_view bytes)
{
	std::string out;
	out.reserve(bytes.size() + bytes.size() / 4);
	for (char ch: bytes) {
		const unsigned char c = static_cast<unsigned char>(ch);
		if (c < 0x80) {
			out.push_back(ch);
		}
		else {
			out.push_back(static_cast<char>(0xC0 | (c >> 6)));
			out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
		}
	}
	return out;
}

namespace {

std::string read_file_bytes(const fs::path &path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		raise(errc::io_failure, "cannot open file: " + path.string());
	}
	std::ostringstream buf;
	buf << in.rdbuf();
	if (in.bad()) {
		raise(errc::io_failure, "read failed: " + path.string());
	}
	return std::move(buf).str();
}

} /* anonymous namespace */

corpus load_split(const fs::path &root, std::string_view split_name, bool strip_headers)
{
	const fs::path split_dir = root / split_name;
	std::error_code ec;
	if (!fs::is_directory(split_dir, ec)) {
		raise(errc::missing_split,
			  "no split directory '" + std::string(split_name) + "' under " + root.string());
	}

	corpus result;
	result.split_name = std::string(split_name);

	for (const auto &entry: fs::directory_iterator(split_dir)) {
		if (entry.is_directory()) {
			result.label_names.push_back(entry.path().filename().string());
		}
	}
	std::sort(result.label_names.begin(), result.label_names.end());

	for (std::size_t label = 0; label < result.label_names.size(); label++) {
		const fs::path class_dir = split_dir / result.label_names[label];
		std::vector<std::string> file_names;
		for (const auto &entry: fs::directory_iterator(class_dir)) {
			if (entry.is_regular_file()) {
				file_names.push_back(entry.path().filename().string());
			}
		}
		if (file_names.empty()) {
			raise(errc::empty_class,
				  "class directory holds no documents: " + class_dir.string());
		}
		std::sort(file_names.begin(), file_names.end());

		for (const auto &name: file_names) {
			document doc;
			doc.id = result.label_names[label] + "/" + name;
			doc.label = static_cast<std::int32_t>(label);
			std::string bytes = read_file_bytes(class_dir / name);
			doc.text = is_valid_utf8(bytes) ? std::move(bytes) : latin1_to_utf8(bytes);
			if (strip_headers) {
				doc.text = strip_message_headers(doc.text);
			}
			result.documents.push_back(std::move(doc));
		}
	}
	return result;
}

corpus_summary summarize(const corpus &c)
{
	corpus_summary s;
	s.total_documents = c.documents.size();
	s.per_label.assign(c.label_names.size(), 0);
	for (const auto &doc: c.documents) {
		if (doc.label >= 0) {
			s.per_label[static_cast<std::size_t>(doc.label)]++;
		}
	}
	return s;
}

} /* namespace pva */
