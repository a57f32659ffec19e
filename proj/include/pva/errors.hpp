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

#include <stdexcept>
#include <string>

namespace pva {

enum class errc {
	io_failure,
	missing_split,
	empty_class,
	empty_vocabulary,
	dimension_mismatch,
	length_mismatch,
	label_out_of_range,
	empty_input,
	bad_magic,
	unsupported_version,
	truncated_payload,
	kind_mismatch,
	parse_failure,
	missing_default,
	bind_failure,
	invalid_argument,
};

const char *errc_name(errc code);

class error : public std::runtime_error {
public:
	error(errc code, std::string message)
		: std::runtime_error(std::move(message)), code_(code)
	{
	}

	errc code() const { return code_; }

private:
	errc code_;
};

[[noreturn]] inline void raise(errc code, std::string message)
{
	throw error(code, std::move(message));
}

} /* namespace pva */
