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

#include "pva/engine.hpp"

#include <filesystem>
#include <optional>

namespace pva {

/* On-disk model container (see docs/model-format.md for the worked example):
 *
 *   "PVA1"                      4 bytes magic
 *   format_version              u32 LE (currently 1)
 *   model_kind                  u8 (1 = linear, 2 = embedding)
 *   header_length               u32 LE
 *   header                      UTF-8 JSON: label names, dims, config echo,
 *                               num_documents, vocab fingerprint
 *   payload                     f32 LE, row-major
 *                                 linear:    weights (K x D), then biases (K)
 *                                 embedding: input ((V+B) x dim), then output (K x dim)
 *   vocabulary                  u64 LE token count, then per token:
 *                                 u32 LE byte length, bytes, u32 LE doc frequency
 *
 * Files are written atomically (temp file + rename). Parameters are narrowed
 * to f32 on save; loading re-widens them, so save -> load -> save is
 * byte-identical. */

inline constexpr char model_magic[4] = {'P', 'V', 'A', '1'};
inline constexpr std::uint32_t model_format_version = 1;

void save_model(const loaded_model &model, const std::filesystem::path &path);

loaded_model load_model(const std::filesystem::path &path,
						std::optional<model_kind> expected_kind = std::nullopt);

} /* namespace pva */
