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

/* Command-line front end. Everything engine-related goes through the C API
 * in pva.h; this translation unit owns only flag parsing, process exit
 * codes, and the run manifests. */

#include "pva.h"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_data = 3;
constexpr int exit_training = 4;

int exit_code_for(pva_status status)
{
	switch (status) {
	case PVA_OK:
		return exit_ok;
	case PVA_E_ARG:
		return exit_usage;
	case PVA_E_TRAIN:
		return exit_training;
	default:
		return exit_data;
	}
}

int fail(pva_status status, const std::string &what)
{
	std::cerr << "error: " << what << ": " << pva_status_name(status) << ": "
			  << pva_last_error() << "\n";
	return exit_code_for(status);
}

class stopwatch {
public:
	stopwatch() : begin_(std::chrono::steady_clock::now()) {}
	double ms() const
	{
		return std::chrono::duration<double, std::milli>(
				   std::chrono::steady_clock::now() - begin_)
			.count();
	}

private:
	std::chrono::steady_clock::time_point begin_;
};

bool write_text_file(const std::string &path, const std::string &content)
{
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	out << content;
	out.flush();
	return static_cast<bool>(out);
}

int write_manifest(const std::string &path, const json &manifest)
{
	if (!write_text_file(path, manifest.dump(2) + "\n")) {
		std::cerr << "error: cannot write manifest: " << path << "\n";
		return exit_data;
	}
	return exit_ok;
}

struct corpus_handle {
	pva_corpus *ptr = nullptr;
	~corpus_handle() { pva_corpus_close(ptr); }
};

struct model_handle {
	pva_model *ptr = nullptr;
	~model_handle() { pva_model_close(ptr); }
};

struct report_handle {
	pva_report *ptr = nullptr;
	~report_handle() { pva_report_close(ptr); }
};

struct routes_handle {
	pva_routes *ptr = nullptr;
	~routes_handle() { pva_routes_close(ptr); }
};

struct gateway_handle {
	pva_gateway *ptr = nullptr;
	~gateway_handle() { pva_gateway_close(ptr); }
};

/* ---- prepare ---- */

struct prepare_args {
	std::string data;
	std::vector<std::string> splits{"train", "test"};
	bool strip_headers = false;
	std::string manifest = "pva-prepare-manifest.json";
};

int run_prepare(const prepare_args &args)
{
	json splits_json = json::object();
	for (const auto &split: args.splits) {
		corpus_handle corpus;
		const pva_status st =
			pva_corpus_open(args.data.c_str(), split.c_str(),
							args.strip_headers ? 1 : 0, &corpus.ptr);
		if (st != PVA_OK) {
			return fail(st, "split '" + split + "'");
		}
		const int32_t classes = pva_corpus_class_count(corpus.ptr);
		json per_class = json::object();
		for (int32_t c = 0; c < classes; c++) {
			per_class[pva_corpus_class_name(corpus.ptr, c)] =
				pva_corpus_class_doc_count(corpus.ptr, c);
		}
		splits_json[split] = {{"documents", pva_corpus_doc_count(corpus.ptr)},
							  {"classes", classes},
							  {"per_class", per_class}};
		std::cout << split << ": " << pva_corpus_doc_count(corpus.ptr)
				  << " documents across " << classes << " classes\n";
	}

	json manifest = {{"command", "prepare"},
					 {"flags",
					  {{"data", args.data},
					   {"splits", args.splits},
					   {"strip_headers", args.strip_headers}}},
					 {"data_dir", args.data},
					 {"splits", splits_json}};
	return write_manifest(args.manifest, manifest);
}

/* ---- train ---- */

struct train_args {
	std::string data;
	std::string kind = "linear";
	std::string out;
	std::string split = "train";
	bool strip_headers = false;
	std::string stopwords;
	std::optional<std::uint32_t> min_df;
	std::optional<double> max_df_ratio;
	std::optional<std::int64_t> max_features;
	std::optional<std::int32_t> epochs;
	std::optional<double> lr0;
	std::optional<double> l2;
	std::optional<std::int32_t> batch_size;
	std::optional<std::int32_t> dim;
	std::optional<std::int32_t> max_n;
	std::optional<std::int64_t> buckets;
	std::optional<std::uint64_t> seed;
	std::string manifest = "pva-train-manifest.json";
};

json options_to_json(const pva_train_options &o)
{
	json flags = {{"kind", o.kind == PVA_MODEL_LINEAR ? "linear" : "embedding"},
				  {"min_df", o.min_df},
				  {"max_df_ratio", o.max_df_ratio},
				  {"max_features", o.max_features},
				  {"epochs", o.epochs},
				  {"lr0", o.lr0},
				  {"seed", o.seed}};
	if (o.stopword_file) {
		flags["stopwords"] = o.stopword_file;
	}
	if (o.kind == PVA_MODEL_LINEAR) {
		flags["l2"] = o.l2;
		flags["batch_size"] = o.batch_size;
	}
	else {
		flags["dim"] = o.dim;
		flags["max_ngram"] = o.max_ngram;
		flags["buckets"] = o.buckets;
	}
	return flags;
}

int run_train(const train_args &args)
{
	const int32_t kind =
		args.kind == "embedding" ? PVA_MODEL_EMBEDDING : PVA_MODEL_LINEAR;
	pva_train_options options;
	pva_train_options_init(&options, kind);
	if (args.min_df) options.min_df = *args.min_df;
	if (args.max_df_ratio) options.max_df_ratio = *args.max_df_ratio;
	if (args.max_features) options.max_features = *args.max_features;
	if (args.epochs) options.epochs = *args.epochs;
	if (args.lr0) options.lr0 = *args.lr0;
	if (args.l2) options.l2 = *args.l2;
	if (args.batch_size) options.batch_size = *args.batch_size;
	if (args.dim) options.dim = *args.dim;
	if (args.max_n) options.max_ngram = *args.max_n;
	if (args.buckets) options.buckets = *args.buckets;
	if (args.seed) options.seed = *args.seed;
	if (!args.stopwords.empty()) {
		options.stopword_file = args.stopwords.c_str();
	}

	const stopwatch total;
	stopwatch phase;
	corpus_handle corpus;
	pva_status st = pva_corpus_open(args.data.c_str(), args.split.c_str(),
									args.strip_headers ? 1 : 0, &corpus.ptr);
	if (st != PVA_OK) {
		return fail(st, "loading '" + args.split + "' split");
	}
	const double load_ms = phase.ms();
	std::cout << "loaded " << pva_corpus_doc_count(corpus.ptr) << " documents ("
			  << pva_corpus_class_count(corpus.ptr) << " classes)\n";

	phase = stopwatch();
	model_handle model;
	st = pva_train(corpus.ptr, &options, &model.ptr);
	if (st != PVA_OK) {
		return fail(st, "training");
	}
	const double train_ms = phase.ms();

	phase = stopwatch();
	st = pva_model_save(model.ptr, args.out.c_str());
	if (st != PVA_OK) {
		return fail(st, "saving model");
	}
	const double save_ms = phase.ms();
	std::cout << "trained " << args.kind << " model in " << train_ms / 1000.0
			  << " s, saved to " << args.out << "\n";

	json manifest = {{"command", "train"},
					 {"flags", options_to_json(options)},
					 {"seed", options.seed},
					 {"data_dir", args.data},
					 {"split", args.split},
					 {"strip_headers", args.strip_headers},
					 {"model_path", args.out},
					 {"documents", pva_corpus_doc_count(corpus.ptr)},
					 {"timings_ms",
					  {{"load_data", load_ms},
					   {"train", train_ms},
					   {"save", save_ms},
					   {"total", total.ms()}}}};
	return write_manifest(args.manifest, manifest);
}

/* ---- evaluate ---- */

struct evaluate_args {
	std::string data;
	std::string model;
	std::string split = "test";
	bool strip_headers = false;
	bool bench = false;
	int32_t warmup = 3;
	int32_t repeats = 10;
	std::string report_json;
	std::string report_csv;
	std::string manifest = "pva-evaluate-manifest.json";
};

int run_evaluate(const evaluate_args &args)
{
	const stopwatch total;
	model_handle model;
	pva_status st = pva_model_open(args.model.c_str(), &model.ptr);
	if (st != PVA_OK) {
		return fail(st, "loading model");
	}

	stopwatch phase;
	corpus_handle corpus;
	st = pva_corpus_open(args.data.c_str(), args.split.c_str(),
						 args.strip_headers ? 1 : 0, &corpus.ptr);
	if (st != PVA_OK) {
		return fail(st, "loading '" + args.split + "' split");
	}
	const double load_ms = phase.ms();

	phase = stopwatch();
	report_handle report;
	st = pva_model_evaluate(model.ptr, corpus.ptr, &report.ptr);
	if (st != PVA_OK) {
		return fail(st, "evaluation");
	}
	const double eval_ms = phase.ms();

	std::cout << pva_report_table(report.ptr);

	json bench_json;
	if (args.bench) {
		pva_latency_stats stats{};
		st = pva_model_bench(model.ptr, corpus.ptr, args.warmup, args.repeats, &stats);
		if (st != PVA_OK) {
			return fail(st, "latency bench");
		}
		std::cout << "\nlatency: median pass " << stats.median_ms << " ms over "
				  << stats.item_count << " documents (" << stats.per_item_ms
				  << " ms/doc, p95 pass " << stats.p95_ms << " ms)\n";
		bench_json = {{"median_ms", stats.median_ms},
					  {"p95_ms", stats.p95_ms},
					  {"total_ms", stats.total_ms},
					  {"per_item_ms", stats.per_item_ms},
					  {"item_count", stats.item_count}};
	}

	if (!args.report_json.empty() &&
		!write_text_file(args.report_json, pva_report_json(report.ptr))) {
		std::cerr << "error: cannot write " << args.report_json << "\n";
		return exit_data;
	}
	if (!args.report_csv.empty() &&
		!write_text_file(args.report_csv, pva_report_csv(report.ptr))) {
		std::cerr << "error: cannot write " << args.report_csv << "\n";
		return exit_data;
	}

	json manifest = {{"command", "evaluate"},
					 {"flags",
					  {{"data", args.data},
					   {"model", args.model},
					   {"split", args.split},
					   {"strip_headers", args.strip_headers},
					   {"bench", args.bench}}},
					 {"data_dir", args.data},
					 {"model_path", args.model},
					 {"metrics",
					  {{"accuracy", pva_report_accuracy(report.ptr)},
					   {"weighted_f1", pva_report_weighted_f1(report.ptr)},
					   {"macro_f1", pva_report_macro_f1(report.ptr)}}},
					 {"timings_ms",
					  {{"load_data", load_ms}, {"evaluate", eval_ms}, {"total", total.ms()}}}};
	if (!bench_json.is_null()) {
		manifest["latency"] = bench_json;
	}
	return write_manifest(args.manifest, manifest);
}

/* ---- predict ---- */

struct predict_args {
	std::string model;
	std::optional<std::string> text;
	int32_t top_k = 1;
	std::string manifest = "pva-predict-manifest.json";
};

json predict_record(pva_model *model, const std::string &text, int32_t top_k)
{
	/* Protocol rule: text with no classifiable tokens is an error record,
	 * mirroring the gateway's empty_text response. */
	if (pva_token_count(text.c_str()) == 0) {
		return {{"error",
				 {{"code", "empty_text"},
				  {"message", "no classifiable tokens in request text"}}}};
	}
	std::vector<pva_prediction> ranked(static_cast<std::size_t>(top_k));
	int32_t count = 0;
	const pva_status st =
		pva_model_predict(model, text.c_str(), ranked.data(), top_k, &count);
	if (st != PVA_OK || count < 1) {
		return {{"error", {{"code", "internal"}, {"message", pva_last_error()}}}};
	}
	json alternatives = json::array();
	for (int32_t i = 0; i < count; i++) {
		alternatives.push_back(
			{{"label", pva_model_class_name(model, ranked[static_cast<std::size_t>(i)].label)},
			 {"confidence", ranked[static_cast<std::size_t>(i)].probability}});
	}
	json record = {{"label", alternatives[0]["label"]},
				   {"confidence", alternatives[0]["confidence"]}};
	if (top_k > 1) {
		record["alternatives"] = alternatives;
	}
	return record;
}

int run_predict(const predict_args &args)
{
	model_handle model;
	const pva_status st = pva_model_open(args.model.c_str(), &model.ptr);
	if (st != PVA_OK) {
		return fail(st, "loading model");
	}

	std::int64_t records = 0;
	if (args.text) {
		std::cout << predict_record(model.ptr, *args.text, args.top_k).dump() << "\n";
		records = 1;
	}
	else {
		std::string line;
		while (std::getline(std::cin, line)) {
			if (!line.empty() && line.back() == '\r') {
				line.pop_back();
			}
			std::cout << predict_record(model.ptr, line, args.top_k).dump() << "\n";
			records++;
		}
	}

	json manifest = {{"command", "predict"},
					 {"flags",
					  {{"model", args.model},
					   {"top_k", args.top_k},
					   {"text", args.text ? json(*args.text) : json(nullptr)}}},
					 {"model_path", args.model},
					 {"records", records}};
	return write_manifest(args.manifest, manifest);
}

/* ---- serve ---- */

struct serve_args {
	std::string model;
	std::string routes;
	bool stdio = false;
	std::string listen;
	int32_t top_k = 5;
	int32_t workers = 1;
	std::string manifest = "pva-serve-manifest.json";
};

int run_serve(const serve_args &args)
{
	model_handle model;
	pva_status st = pva_model_open(args.model.c_str(), &model.ptr);
	if (st != PVA_OK) {
		return fail(st, "loading model");
	}
	routes_handle routes;
	st = pva_routes_open(args.routes.c_str(), &routes.ptr);
	if (st != PVA_OK) {
		return fail(st, "loading route table");
	}
	gateway_handle gateway;
	st = pva_gateway_new(model.ptr, routes.ptr, args.top_k, &gateway.ptr);
	if (st != PVA_OK) {
		return fail(st, "starting gateway");
	}

	std::int64_t handled = 0;
	if (!args.listen.empty()) {
		const std::size_t colon = args.listen.rfind(':');
		if (colon == std::string::npos) {
			std::cerr << "error: --listen expects host:port\n";
			return exit_usage;
		}
		const std::string host = args.listen.substr(0, colon);
		const int port = std::atoi(args.listen.c_str() + colon + 1);
		std::cerr << "listening on " << host << ":" << port << "\n";
		st = pva_gateway_serve_tcp(gateway.ptr, host.c_str(), port, args.workers);
		if (st != PVA_OK) {
			return fail(st, "tcp serve");
		}
	}
	else {
		st = pva_gateway_serve_stdio(gateway.ptr, args.workers, &handled);
		if (st != PVA_OK) {
			return fail(st, "stdio serve");
		}
	}

	json manifest = {{"command", "serve"},
					 {"flags",
					  {{"model", args.model},
					   {"routes", args.routes},
					   {"listen", args.listen},
					   {"stdio", args.listen.empty()},
					   {"top_k", args.top_k},
					   {"workers", args.workers}}},
					 {"model_path", args.model},
					 {"requests_handled", handled}};
	return write_manifest(args.manifest, manifest);
}

/* ---- bench ---- */

struct bench_args {
	std::string model;
	std::string data;
	std::string split = "test";
	bool strip_headers = false;
	int32_t warmup = 3;
	int32_t repeats = 10;
	std::string manifest = "pva-bench-manifest.json";
};

int run_bench(const bench_args &args)
{
	model_handle model;
	pva_status st = pva_model_open(args.model.c_str(), &model.ptr);
	if (st != PVA_OK) {
		return fail(st, "loading model");
	}
	corpus_handle corpus;
	st = pva_corpus_open(args.data.c_str(), args.split.c_str(),
						 args.strip_headers ? 1 : 0, &corpus.ptr);
	if (st != PVA_OK) {
		return fail(st, "loading '" + args.split + "' split");
	}

	pva_latency_stats stats{};
	st = pva_model_bench(model.ptr, corpus.ptr, args.warmup, args.repeats, &stats);
	if (st != PVA_OK) {
		return fail(st, "bench");
	}

	std::cout << "documents:        " << stats.item_count << "\n"
			  << "median pass:      " << stats.median_ms << " ms\n"
			  << "p95 pass:         " << stats.p95_ms << " ms\n"
			  << "total timed:      " << stats.total_ms << " ms\n"
			  << "median per doc:   " << stats.per_item_ms << " ms\n";

	json manifest = {{"command", "bench"},
					 {"flags",
					  {{"model", args.model},
					   {"data", args.data},
					   {"split", args.split},
					   {"warmup", args.warmup},
					   {"repeats", args.repeats}}},
					 {"model_path", args.model},
					 {"data_dir", args.data},
					 {"latency",
					  {{"median_ms", stats.median_ms},
					   {"p95_ms", stats.p95_ms},
					   {"total_ms", stats.total_ms},
					   {"per_item_ms", stats.per_item_ms},
					   {"item_count", stats.item_count}}}};
	return write_manifest(args.manifest, manifest);
}

} /* anonymous namespace */

int main(int argc, char **argv)
{
	CLI::App app{"text request classification engine and routing gateway"};
	app.name("pva");
	app.set_version_flag("--version", pva_version());
	app.require_subcommand(1);

	prepare_args prepare;
	auto *prepare_cmd = app.add_subcommand("prepare", "Validate a dataset directory layout");
	prepare_cmd->add_option("--data", prepare.data, "Dataset root directory")->required();
	prepare_cmd->add_option("--splits", prepare.splits, "Splits to validate");
	prepare_cmd->add_flag("--strip-headers", prepare.strip_headers,
						  "Drop everything before the first blank line");
	prepare_cmd->add_option("--manifest", prepare.manifest, "Manifest output path");

	train_args train;
	auto *train_cmd = app.add_subcommand("train", "Train a classifier on a dataset split");
	train_cmd->add_option("--data", train.data, "Dataset root directory")->required();
	train_cmd->add_option("--kind", train.kind, "Model kind")
		->check(CLI::IsMember({"linear", "embedding"}));
	train_cmd->add_option("--out", train.out, "Model output path")->required();
	train_cmd->add_option("--split", train.split, "Split to train on (default train)");
	train_cmd->add_flag("--strip-headers", train.strip_headers,
						"Drop everything before the first blank line");
	train_cmd->add_option("--stopwords", train.stopwords, "Stopword list file");
	train_cmd->add_option("--min-df", train.min_df, "Minimum document frequency");
	train_cmd->add_option("--max-df-ratio", train.max_df_ratio,
						  "Maximum document frequency ratio");
	train_cmd->add_option("--max-features", train.max_features,
						  "Keep only the most frequent tokens");
	train_cmd->add_option("--epochs", train.epochs, "Training epochs");
	train_cmd->add_option("--lr0", train.lr0, "Initial learning rate");
	train_cmd->add_option("--l2", train.l2, "L2 penalty (linear)");
	train_cmd->add_option("--batch-size", train.batch_size, "SGD batch size (linear)");
	train_cmd->add_option("--dim", train.dim, "Embedding dimension (embedding)");
	train_cmd->add_option("--max-n", train.max_n, "Word n-gram order (embedding)");
	train_cmd->add_option("--buckets", train.buckets, "Hashed n-gram buckets (embedding)");
	train_cmd->add_option("--seed", train.seed, "Random seed");
	train_cmd->add_option("--manifest", train.manifest, "Manifest output path");

	evaluate_args evaluate;
	auto *evaluate_cmd =
		app.add_subcommand("evaluate", "Score a model on a dataset split");
	evaluate_cmd->add_option("--data", evaluate.data, "Dataset root directory")->required();
	evaluate_cmd->add_option("--model", evaluate.model, "Model file")->required();
	evaluate_cmd->add_option("--split", evaluate.split, "Split to score (default test)");
	evaluate_cmd->add_flag("--strip-headers", evaluate.strip_headers,
						   "Drop everything before the first blank line");
	evaluate_cmd->add_flag("--bench", evaluate.bench, "Also measure prediction latency");
	evaluate_cmd->add_option("--warmup", evaluate.warmup, "Bench warmup passes");
	evaluate_cmd->add_option("--repeats", evaluate.repeats, "Bench timed passes");
	evaluate_cmd->add_option("--report-json", evaluate.report_json,
							 "Write the report as JSON");
	evaluate_cmd->add_option("--report-csv", evaluate.report_csv,
							 "Write the report as CSV");
	evaluate_cmd->add_option("--manifest", evaluate.manifest, "Manifest output path");

	predict_args predict;
	auto *predict_cmd =
		app.add_subcommand("predict", "Classify text from --text or stdin lines");
	predict_cmd->add_option("--model", predict.model, "Model file")->required();
	predict_cmd->add_option("--text", predict.text, "Text to classify");
	predict_cmd->add_option("--top-k", predict.top_k, "Ranked classes to report")
		->check(CLI::PositiveNumber);
	predict_cmd->add_option("--manifest", predict.manifest, "Manifest output path");

	serve_args serve;
	auto *serve_cmd =
		app.add_subcommand("serve", "Serve newline-delimited requests (stdio or TCP)");
	serve_cmd->add_option("--model", serve.model, "Model file")->required();
	serve_cmd->add_option("--routes", serve.routes, "Route table JSON file")->required();
	serve_cmd->add_flag("--stdio", serve.stdio, "Serve on stdin/stdout (default)");
	serve_cmd->add_option("--listen", serve.listen, "Serve on host:port instead of stdio");
	serve_cmd->add_option("--top-k", serve.top_k, "Alternatives per response")
		->check(CLI::PositiveNumber);
	serve_cmd->add_option("--workers", serve.workers, "Concurrent request workers")
		->check(CLI::PositiveNumber);
	serve_cmd->add_option("--manifest", serve.manifest, "Manifest output path");

	bench_args bench;
	auto *bench_cmd = app.add_subcommand("bench", "Measure prediction latency on a split");
	bench_cmd->add_option("--model", bench.model, "Model file")->required();
	bench_cmd->add_option("--data", bench.data, "Dataset root directory")->required();
	bench_cmd->add_option("--split", bench.split, "Split to time (default test)");
	bench_cmd->add_flag("--strip-headers", bench.strip_headers,
						"Drop everything before the first blank line");
	bench_cmd->add_option("--warmup", bench.warmup, "Warmup passes");
	bench_cmd->add_option("--repeats", bench.repeats, "Timed passes");
	bench_cmd->add_option("--manifest", bench.manifest, "Manifest output path");

	try {
		app.parse(argc, argv);
	}
	catch (const CLI::CallForHelp &e) {
		return app.exit(e);
	}
	catch (const CLI::CallForVersion &e) {
		return app.exit(e);
	}
	catch (const CLI::ParseError &e) {
		app.exit(e);
		return exit_usage;
	}

	if (app.got_subcommand(prepare_cmd)) {
		return run_prepare(prepare);
	}
	if (app.got_subcommand(train_cmd)) {
		return run_train(train);
	}
	if (app.got_subcommand(evaluate_cmd)) {
		return run_evaluate(evaluate);
	}
	if (app.got_subcommand(predict_cmd)) {
		return run_predict(predict);
	}
	if (app.got_subcommand(serve_cmd)) {
		return run_serve(serve);
	}
	if (app.got_subcommand(bench_cmd)) {
		return run_bench(bench);
	}
	return exit_usage;
}
