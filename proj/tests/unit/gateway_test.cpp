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
#include "pva/gateway.hpp"
#include "support.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <set>
#include <sstream>

using namespace pva;
using nlohmann::json;

namespace {

loaded_model toy_model()
{
	testing::temp_dir dir;
	testing::make_toy_split(dir.path(), "train");
	const corpus data = load_split(dir.path(), "train", false);
	vocabulary vocab = build_vocabulary(data);
	const auto idf = compute_idf(vocab);
	std::vector<sparse_vector> xs;
	std::vector<std::int32_t> ys;
	for (const auto &doc: data.documents) {
		xs.push_back(tfidf_vector(tokenize(doc.text), vocab, idf));
		ys.push_back(doc.label);
	}
	linear_train_config config;
	config.epochs = 5;
	linear_model m = train_logistic(xs, ys, data.label_names,
									static_cast<std::int32_t>(vocab.size()),
									vocab.fingerprint(), config);
	return make_loaded(std::move(m), std::move(vocab));
}

route_table toy_routes()
{
	return parse_routes(R"({"default_route":"fallback",
							"routes":{"alpha":"queue-alpha"}})");
}

} /* anonymous namespace */

TEST_CASE("parse_routes")
{
	SUBCASE("empty map is fine")
	{
		const auto table = parse_routes(R"({"default_route":"fallback","routes":{}})");
		CHECK(table.routes.empty());
		CHECK(table.resolve("anything") == "fallback");
	}

	SUBCASE("missing default_route")
	{
		try {
			parse_routes(R"({"routes":{}})");
			FAIL("expected missing_default");
		}
		catch (const error &e) {
			CHECK(e.code() == errc::missing_default);
		}
	}

	SUBCASE("not JSON at all")
	{
		try {
			parse_routes("not json");
			FAIL("expected parse_failure");
		}
		catch (const error &e) {
			CHECK(e.code() == errc::parse_failure);
		}
	}

	SUBCASE("empty route strings are rejected")
	{
		try {
			parse_routes(R"({"default_route":"d","routes":{"a":""}})");
			FAIL("expected parse_failure");
		}
		catch (const error &e) {
			CHECK(e.code() == errc::parse_failure);
		}
	}

	SUBCASE("a 20-entry table resolves every label")
	{
		json doc;
		doc["default_route"] = "fallback";
		for (int i = 0; i < 20; i++) {
			doc["routes"]["class" + std::to_string(i)] = "route-" + std::to_string(i);
		}
		const auto table = parse_routes(doc.dump());
		CHECK(table.routes.size() == 20);
		for (int i = 0; i < 20; i++) {
			CHECK(table.resolve("class" + std::to_string(i)) ==
				  "route-" + std::to_string(i));
		}
		CHECK(table.resolve("unknown") == "fallback");
	}
}

TEST_CASE("handle classifies, routes, and reports errors in-band")
{
	const loaded_model model = toy_model();
	const gateway gw(model, toy_routes(), 2);

	SUBCASE("empty text")
	{
		const auto resp = gw.handle({"r1", "", "text"});
		REQUIRE(resp.error.has_value());
		CHECK(resp.error->code == "empty_text");
		CHECK_FALSE(resp.label.has_value());
		CHECK(resp.id == "r1");
	}

	SUBCASE("text that tokenizes to nothing")
	{
		const auto resp = gw.handle({"r2", "! ? .", "text"});
		REQUIRE(resp.error.has_value());
		CHECK(resp.error->code == "empty_text");
	}

	SUBCASE("mapped label routes to its queue")
	{
		const auto resp = gw.handle({"r3", "turn on the lights lamp", "text"});
		REQUIRE(resp.label.has_value());
		CHECK(*resp.label == "alpha");
		CHECK(resp.route == "queue-alpha");
		CHECK_FALSE(resp.error.has_value());
		CHECK(resp.latency_ms >= 0.0);
	}

	SUBCASE("unmapped label falls back to the default route")
	{
		const auto resp = gw.handle({"r4", "play some music song volume", "voice-transcript"});
		REQUIRE(resp.label.has_value());
		CHECK(*resp.label == "beta");
		CHECK(resp.route == "fallback");
	}

	SUBCASE("confidence heads the alternatives, a prefix of the full ranking")
	{
		const gateway_request req{"r5", "turn on music lights", "text"};
		const auto resp = gw.handle(req);
		REQUIRE(resp.label.has_value());
		REQUIRE(resp.alternatives.size() == 2);
		CHECK(resp.confidence == resp.alternatives[0].probability);
		CHECK(resp.alternatives[0].probability >= resp.alternatives[1].probability);

		const auto full = model.predict_tokens(tokenize(req.text), 2);
		CHECK(resp.alternatives[0].label == full[0].label);
		CHECK(resp.alternatives[1].label == full[1].label);
		CHECK(resp.alternatives[0].probability == full[0].probability);
	}
}

TEST_CASE("handle_line speaks the newline-delimited protocol")
{
	const loaded_model model = toy_model();
	const gateway gw(model, toy_routes(), 1);

	SUBCASE("malformed line yields bad_request with a null id")
	{
		const json resp = json::parse(gw.handle_line("not a record"));
		CHECK(resp["id"].is_null());
		CHECK(resp["error"]["code"] == "bad_request");
	}

	SUBCASE("missing text key is bad_request")
	{
		const json resp = json::parse(gw.handle_line(R"({"id":"x"})"));
		CHECK(resp["error"]["code"] == "bad_request");
	}

	SUBCASE("well-formed line matches the offline path")
	{
		const std::string text = "play music track";
		const json resp =
			json::parse(gw.handle_line(json{{"id", "q1"}, {"text", text}}.dump()));
		CHECK(resp["id"] == "q1");
		const auto offline = model.predict_tokens(tokenize(text), 1);
		CHECK(resp["label"] ==
			  model.label_names()[static_cast<std::size_t>(offline[0].label)]);
		CHECK(resp["confidence"].get<double>() == offline[0].probability);
	}
}

TEST_CASE("serve_stream writes one response per request line")
{
	const loaded_model model = toy_model();
	const gateway gw(model, toy_routes(), 1);

	std::ostringstream requests;
	requests << json{{"id", "1"}, {"text", "turn on the lights"}}.dump() << "\n";
	requests << "garbage line\n";
	requests << json{{"id", "2"}, {"text", "play some music"}}.dump() << "\n";
	requests << json{{"id", "3"}, {"text", ""}}.dump() << "\n";

	std::istringstream in(requests.str());
	std::ostringstream out;
	const std::size_t handled = serve_stream(gw, in, out, 1);
	CHECK(handled == 4);

	std::istringstream lines(out.str());
	std::string line;
	std::vector<json> responses;
	while (std::getline(lines, line)) {
		responses.push_back(json::parse(line));
	}
	REQUIRE(responses.size() == 4);

	/* single worker: completion order equals arrival order */
	CHECK(responses[0]["id"] == "1");
	CHECK(responses[0]["label"] == "alpha");
	CHECK(responses[1]["id"].is_null());
	CHECK(responses[1]["error"]["code"] == "bad_request");
	CHECK(responses[2]["id"] == "2");
	CHECK(responses[2]["label"] == "beta");
	CHECK(responses[3]["id"] == "3");
	CHECK(responses[3]["error"]["code"] == "empty_text");
}

TEST_CASE("serve_stream multi-worker mode answers everything exactly once")
{
	const loaded_model model = toy_model();
	const gateway gw(model, toy_routes(), 1);

	std::ostringstream requests;
	const int n = 64;
	for (int i = 0; i < n; i++) {
		requests << json{{"id", std::to_string(i)},
						 {"text", i % 2 == 0 ? "turn on the lamp" : "play a song"}}
						.dump()
				 << "\n";
	}
	std::istringstream in(requests.str());
	std::ostringstream out;
	const std::size_t handled = serve_stream(gw, in, out, 4);
	CHECK(handled == n);

	std::istringstream lines(out.str());
	std::string line;
	std::set<std::string> seen;
	std::size_t count = 0;
	while (std::getline(lines, line)) {
		const json resp = json::parse(line);
		seen.insert(resp["id"].get<std::string>());
		count++;
	}
	CHECK(count == n);
	CHECK(seen.size() == n); /* every id answered exactly once */
}

TEST_CASE("online predictions equal the batch path")
{
	const loaded_model model = toy_model();
	const gateway gw(model, toy_routes(), 1);

	testing::temp_dir dir;
	testing::make_toy_split(dir.path(), "test", 10);
	const corpus data = load_split(dir.path(), "test", false);

	std::ostringstream requests;
	for (std::size_t i = 0; i < data.documents.size(); i++) {
		requests << json{{"id", data.documents[i].id},
						 {"text", data.documents[i].text}}
						.dump()
				 << "\n";
	}
	std::istringstream in(requests.str());
	std::ostringstream out;
	serve_stream(gw, in, out, 1);

	std::istringstream lines(out.str());
	std::string line;
	std::size_t i = 0;
	while (std::getline(lines, line)) {
		const json resp = json::parse(line);
		const auto offline = model.predict_text(data.documents[i].text, 1);
		CHECK(resp["label"] ==
			  model.label_names()[static_cast<std::size_t>(offline[0].label)]);
		CHECK(resp["confidence"].get<double>() == offline[0].probability);
		i++;
	}
	CHECK(i == data.documents.size());
}

TEST_CASE("response_to_json shape")
{
	const std::vector<std::string> names{"a", "b"};

	SUBCASE("success response")
	{
		gateway_response r;
		r.id = "x";
		r.label = "a";
		r.confidence = 0.9;
		r.alternatives = {{0, 0.9}, {1, 0.1}};
		r.route = "q";
		r.latency_ms = 1.5;
		const json doc = json::parse(response_to_json(r, names));
		CHECK(doc["id"] == "x");
		CHECK(doc["label"] == "a");
		CHECK(doc["route"] == "q");
		CHECK(doc["alternatives"].size() == 2);
		CHECK_FALSE(doc.contains("error"));
	}

	SUBCASE("error response")
	{
		gateway_response r;
		r.id = "y";
		r.error = gateway_error{"empty_text", "nothing to classify"};
		const json doc = json::parse(response_to_json(r, names));
		CHECK(doc["id"] == "y");
		CHECK(doc["error"]["code"] == "empty_text");
		CHECK_FALSE(doc.contains("label"));
	}
}
