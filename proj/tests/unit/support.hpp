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

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

namespace pva::testing {

/* Unique scratch directory, removed on destruction. */
class temp_dir {
public:
	temp_dir()
	{
		static std::atomic<unsigned> counter{0};
		const auto base = std::filesystem::temp_directory_path();
		path_ = base / ("pva-test-" + std::to_string(::getpid()) + "-" +
						std::to_string(counter++));
		std::filesystem::create_directories(path_);
	}
	~temp_dir()
	{
		std::error_code ec;
		std::filesystem::remove_all(path_, ec);
	}
	temp_dir(const temp_dir &) = delete;
	temp_dir &operator=(const temp_dir &) = delete;

	const std::filesystem::path &path() const { return path_; }

private:
	std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path &path, std::string_view content)
{
	std::filesystem::create_directories(path.parent_path());
	std::ofstream out(path, std::ios::binary);
	out << content;
}

/* Builds <root>/<split>/<class>/<NNN> from (class, texts) pairs. */
inline void make_split(const std::filesystem::path &root, const std::string &split,
					   const std::vector<std::pair<std::string, std::vector<std::string>>> &classes)
{
	for (const auto &[name, texts]: classes) {
		std::size_t i = 0;
		for (const auto &text: texts) {
			char file[16];
			std::snprintf(file, sizeof file, "%03zu", i++);
			write_file(root / split / name / file, text);
		}
	}
}

/* Two linearly separable classes with disjoint vocabularies. */
inline void make_toy_split(const std::filesystem::path &root, const std::string &split,
						   std::size_t docs_per_class = 8)
{
	std::vector<std::string> alpha;
	std::vector<std::string> beta;
	for (std::size_t i = 0; i < docs_per_class; i++) {
		alpha.push_back("turn on the lights please lamp brightness level " +
						std::to_string(i % 3));
		beta.push_back("play some music track volume speaker song number " +
					   std::to_string(i % 3));
	}
	make_split(root, split, {{"alpha", alpha}, {"beta", beta}});
}

} /* namespace pva::testing */
