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
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pva {

struct route_table {
	std::string default_route;
	std::map<std::string, std::string> routes; /* class name -> route token */

	const std::string &resolve(const std::string &label) const
	{
		auto it = routes.find(label);
		return it == routes.end() ? default_route : it->second;
	}
};

/* {"default_route": string, "routes": {label: route}}; a missing
 * default_route key is an error, empty route strings are rejected. */
route_table parse_routes(std::string_view json_text);
route_table load_routes(const std::filesystem::path &path);

struct gateway_request {
	std::string id;
	std::string text;
	std::string channel = "text"; /* "text" | "voice-transcript" */
};

struct gateway_error {
	std::string code; /* "empty_text" | "bad_request" | "internal" */
	std::string message;
};

struct gateway_response {
	bool id_is_null = false; /* bad_request responses carry a null id */
	std::string id;
	std::optional<std::string> label; /* exactly one of label/error is set */
	double confidence = 0;
	std::vector<scored_label> alternatives;
	std::string route;
	double latency_ms = 0;
	std::optional<gateway_error> error;
};

std::string response_to_json(const gateway_response &r,
							 std::span<const std::string> label_names);

/* receive -> transform -> classify -> route -> respond, one request at a
 * time. Failures never escape: they become responses with an error code. */
class gateway {
public:
	gateway(const loaded_model &model, route_table routes, int top_k);

	gateway_response handle(const gateway_request &req) const;

	/* One NDJSON line in, one NDJSON line out (no trailing newline).
	 * Malformed input becomes a bad_request response with a null id. */
	std::string handle_line(std::string_view line) const;

	const route_table &routes() const { return routes_; }
	int top_k() const { return top_k_; }

private:
	const loaded_model &model_;
	route_table routes_;
	int top_k_;
};

/* Reads newline-delimited requests from `in` until end of stream and writes
 * one response line per request to `out` in completion order (arrival order
 * when workers == 1). Returns the number of requests handled. */
std::size_t serve_stream(const gateway &gw, std::istream &in, std::ostream &out,
						 int workers = 1);

/* Same protocol over a TCP listener; one client connection at a time per
 * worker. Runs until a termination signal. Throws bind_failure at startup. */
void serve_tcp(const gateway &gw, const std::string &host, int port, int workers = 1);

} /* namespace pva */
