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
#include <random>
#include <vector>

namespace pva {

/* mt19937_64 has a standard-pinned output sequence; the draw helpers below
 * avoid std::uniform_*_distribution, whose results are implementation
 * defined. Trained models must be bit-identical across toolchains. */

inline double uniform_unit(std::mt19937_64 &gen)
{
	return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/* Unbiased draw in [0, n). */
inline std::uint64_t bounded_draw(std::mt19937_64 &gen, std::uint64_t n)
{
	const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
	std::uint64_t x = gen();
	while (x >= limit) {
		x = gen();
	}
	return x % n;
}

template<typename T>
void shuffle_in_place(std::vector<T> &items, std::mt19937_64 &gen)
{
	for (std::size_t i = items.size(); i > 1; i--) {
		const std::size_t j = static_cast<std::size_t>(bounded_draw(gen, i));
		std::swap(items[i - 1], items[j]);
	}
}

} /* namespace pva */
