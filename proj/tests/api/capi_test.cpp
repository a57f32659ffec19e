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

/* Exercises the shared-library surface only: no core headers, no internal
 * symbols. Fixture files are written with plain std::filesystem. */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pva.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct fixture {
	fs::path root;

	fixture()
	{
		root = fs::temp_directory_path() /
			   ("pva-capi-" + std::to_string(::getpid()));
		fs::remove_all(root);
		const char *alpha[] = {"turn on the lights lamp", "lights brightness lamp on",
							   "turn the lamp on please", "lights on lamp level"};
		const char *beta[] = {"play some music track", "music song volume speaker",
							  "play the next song track", "speaker volume music up"};
		for (int i = 0; i < 4; i++) {
			write(root / "train" / "alpha" / std::to_string(i), alpha[i]);
			write(root / "train" / "beta" / std::to_string(i), beta[i]);
			write(root / "test" / "alpha" / std::to_string(i), alpha[i]);
			write(root / "test" / "beta" / std::to_string(i), beta[i]);
		}
	}
	~fixture() { fs::remove_all(root); }

	static void write(const fs::path &path, const std::string &content)
	{
		fs::create_directories(path.parent_path());
		std::ofstream out(path, std::ios::binary);
		out << content;
	}
};

} /* anonymous namespace */

TEST_CASE("version and status names")
{
	CHECK(std::strlen(pva_version()) > 0);
	CHECK(std::string(pva_status_name(PVA_OK)) == "ok");
	CHECK(std::string(pva_status_name(PVA_E_DATA)) == "data-error");
}

TEST_CASE("failures set a last-error message")
{
	pva_model *model = nullptr;
	const pva_status st = pva_model_open("/definitely/not/here.pva", &model);
	CHECK(st == PVA_E_IO);
	CHECK(std::strlen(pva_last_error()) > 0);
	CHECK(model == nullptr);
}

TEST_CASE("null arguments are rejected, not crashed on")
{
	CHECK(pva_corpus_open(nullptr, "train", 0, nullptr) == PVA_E_ARG);
	CHECK(pva_train(nullptr, nullptr, nullptr) == PVA_E_ARG);
	CHECK(pva_model_predict(nullptr, "x", nullptr, 0, nullptr) == PVA_E_ARG);
	CHECK(pva_token_count(nullptr) == 0);
}

TEST_CASE("token counting matches the engine's tokenizer")
{
	CHECK(pva_token_count("Turn ON the lights!") == 4);
	CHECK(pva_token_count("a I x") == 0);
	CHECK(pva_token_count("") == 0);
}

TEST_CASE("end-to-end through the C API")
{
	fixture fx;

	pva_corpus *train = nullptr;
	REQUIRE(pva_corpus_open(fx.root.string().c_str(), "train", 0, &train) == PVA_OK);
	CHECK(pva_corpus_doc_count(train) == 8);
	CHECK(pva_corpus_class_count(train) == 2);
	CHECK(std::string(pva_corpus_class_name(train, 0)) == "alpha");
	CHECK(pva_corpus_class_doc_count(train, 1) == 4);

	SUBCASE("missing split maps to a data error")
	{
		pva_corpus *missing = nullptr;
		CHECK(pva_corpus_open(fx.root.string().c_str(), "dev", 0, &missing) ==
			  PVA_E_DATA);
	}

	pva_train_options options;
	pva_train_options_init(&options, PVA_MODEL_LINEAR);
	CHECK(options.epochs == 20);
	CHECK(options.lr0 == 0.5);
	options.epochs = 6;

	pva_model *model = nullptr;
	REQUIRE(pva_train(train, &options, &model) == PVA_OK);
	CHECK(pva_model_kind(model) == PVA_MODEL_LINEAR);
	CHECK(pva_model_class_count(model) == 2);
	CHECK(std::string(pva_model_class_name(model, 1)) == "beta");

	SUBCASE("predict ranks the trained class first")
	{
		pva_prediction ranked[2];
		int32_t count = 0;
		REQUIRE(pva_model_predict(model, "turn on the lights", ranked, 2, &count) ==
				PVA_OK);
		REQUIRE(count == 2);
		CHECK(ranked[0].label == 0);
		CHECK(ranked[0].probability > ranked[1].probability);
	}

	SUBCASE("save, reopen, evaluate")
	{
		const fs::path model_path = fx.root / "toy.pva";
		REQUIRE(pva_model_save(model, model_path.string().c_str()) == PVA_OK);

		pva_model *reopened = nullptr;
		REQUIRE(pva_model_open(model_path.string().c_str(), &reopened) == PVA_OK);

		pva_corpus *test = nullptr;
		REQUIRE(pva_corpus_open(fx.root.string().c_str(), "test", 0, &test) == PVA_OK);

		pva_report *report = nullptr;
		REQUIRE(pva_model_evaluate(reopened, test, &report) == PVA_OK);
		CHECK(pva_report_accuracy(report) == 1.0);
		CHECK(pva_report_weighted_f1(report) == 1.0);
		CHECK(pva_report_macro_f1(report) == 1.0);
		CHECK(std::string(pva_report_table(report)).find("weighted avg") !=
			  std::string::npos);
		CHECK(std::string(pva_report_json(report)).find("\"accuracy\"") !=
			  std::string::npos);
		CHECK(std::string(pva_report_csv(report)).find("label,precision") == 0);

		pva_latency_stats stats;
		REQUIRE(pva_model_bench(reopened, test, 1, 3, &stats) == PVA_OK);
		CHECK(stats.item_count == 8);
		CHECK(stats.median_ms >= 0.0);

		pva_report_close(report);
		pva_corpus_close(test);
		pva_model_close(reopened);
	}

	SUBCASE("gateway over the C API")
	{
		pva_routes *routes = nullptr;
		REQUIRE(pva_routes_parse(
					R"({"default_route":"fallback","routes":{"alpha":"queue-a"}})",
					&routes) == PVA_OK);

		pva_gateway *gateway = nullptr;
		REQUIRE(pva_gateway_new(model, routes, 2, &gateway) == PVA_OK);

		char *response = nullptr;
		REQUIRE(pva_gateway_handle_line(gateway,
										R"({"id":"r1","text":"turn on the lamp"})",
										&response) == PVA_OK);
		std::string text(response);
		pva_string_free(response);
		CHECK(text.find("\"label\":\"alpha\"") != std::string::npos);
		CHECK(text.find("\"route\":\"queue-a\"") != std::string::npos);

		REQUIRE(pva_gateway_handle_line(gateway, "garbage", &response) == PVA_OK);
		text = response;
		pva_string_free(response);
		CHECK(text.find("\"bad_request\"") != std::string::npos);
		CHECK(text.find("\"id\":null") != std::string::npos);

		pva_gateway_close(gateway);
		pva_routes_close(routes);

		SUBCASE("bad route tables are format errors")
		{
			pva_routes *bad = nullptr;
			CHECK(pva_routes_parse("{}", &bad) == PVA_E_FORMAT);
		}
	}

	SUBCASE("embedding model kind")
	{
		pva_train_options ft_options;
		pva_train_options_init(&ft_options, PVA_MODEL_EMBEDDING);
		CHECK(ft_options.epochs == 25);
		CHECK(ft_options.buckets == 2097152);
		ft_options.epochs = 4;
		ft_options.dim = 8;
		ft_options.buckets = 32;

		pva_model *ft = nullptr;
		REQUIRE(pva_train(train, &ft_options, &ft) == PVA_OK);
		CHECK(pva_model_kind(ft) == PVA_MODEL_EMBEDDING);

		pva_prediction top;
		int32_t count = 0;
		REQUIRE(pva_model_predict(ft, "play some music", &top, 1, &count) == PVA_OK);
		CHECK(count == 1);
		CHECK(top.label == 1);
		pva_model_close(ft);
	}

	pva_model_close(model);
	pva_corpus_close(train);
}
