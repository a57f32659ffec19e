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

#include "pva/errors.hpp"

namespace pva {

const char *errc_name(errc code)
{
	switch (code) {
	case errc::io_failure:
		return "io_failure";
	case errc::missing_split:
		return "missing_split";
	case errc::empty_class:
		return "empty_class";
	case errc::empty_vocabulary:
		return "empty_vocabulary";
	case errc::dimension_mismatch:
		return "dimension_mismatch";
	case errc::length_mismatch:
		return "length_mismatch";
	case errc::label_out_of_range:
		return "label_out_of_range";
	case errc::empty_input:
		return "empty_input";
	case errc::bad_magic:
		return "bad_magic";
	case errc::unsupported_version:
		return "unsupported_version";
	case errc::truncated_payload:
		return "truncated_payload";
	case errc::kind_mismatch:
		return "kind_mismatch";
	case errc::parse_failure:
		return "parse_failure";
	case errc::missing_default:
		return "missing_default";
	case errc::bind_failure:
		return "bind_failure";
	case errc::invalid_argument:
		return "invalid_argument";
	}
	return "unknown";
}

} /* namespace pva */
