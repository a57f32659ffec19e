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

#include "pva/model_io.hpp"
#include "pva/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

namespace pva {

namespace {

using nlohmann::json;

void put_u32(std::string &out, std::uint32_t v)
{
	for (int b = 0; b < 4; b++) {
		out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
	}
}

void put_u64(std::string &out, std::uint64_t v)
{
	for (int b = 0; b < 8; b++) {
		out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
	}
}

void put_f32(std::string &out, float v)
{
	std::uint32_t bits;
	std::memcpy(&bits, &v, 4);
	put_u32(out, bits);
}

class byte_reader {
public:
	explicit byte_reader(std::string_view data) : data_(data) {}

	std::size_t position() const { return pos_; }
	std::size_t remaining() const { return data_.size() - pos_; }

	std::string_view take(std::size_t n)
	{
		if (remaining() < n) {
			raise(errc::truncated_payload, "model file ends prematurely");
		}
		auto view = data_.substr(pos_, n);
		pos_ += n;
		return view;
	}

	std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }

	std::uint32_t u32()
	{
		auto bytes = take(4);
		std::uint32_t v = 0;
		for (int b = 3; b >= 0; b--) {
			v = (v << 8) | static_cast<std::uint8_t>(bytes[b]);
		}
		return v;
	}

	std::uint64_t u64()
	{
		auto bytes = take(8);
		std::uint64_t v = 0;
		for (int b = 7; b >= 0; b--) {
			v = (v << 8) | static_cast<std::uint8_t>(bytes[b]);
		}
		return v;
	}

	float f32()
	{
		const std::uint32_t bits = u32();
		float v;
		std::memcpy(&v, &bits, 4);
		return v;
	}

private:
	std::string_view data_;
	std::size_t pos_ = 0;
};

std::string fingerprint_hex(std::uint64_t fp)
{
	char buf[19];
	std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(fp));
	return buf;
}

json header_json(const loaded_model &m)
{
	json header;
	header["format"] = "pva-model";
	header["num_documents"] = m.vocab.num_documents;
	/* The fingerprint the model was trained against, not a recomputation:
	 * loading verifies it against the vocabulary section. */
	header["vocab_fingerprint"] =
		fingerprint_hex(m.kind == model_kind::linear ? m.linear.vocab_fingerprint
													 : m.embedding.vocab_fingerprint);

	if (m.kind == model_kind::linear) {
		header["kind"] = "linear";
		header["label_names"] = m.linear.label_names;
		header["num_classes"] = m.linear.num_classes;
		header["num_features"] = m.linear.num_features;
		const auto &c = m.linear.train_config;
		header["train_config"] = {{"epochs", c.epochs},     {"lr0", c.lr0},
								  {"l2", c.l2},             {"seed", c.seed},
								  {"batch_size", c.batch_size}};
	}
	else {
		header["kind"] = "embedding";
		header["label_names"] = m.embedding.label_names;
		header["num_classes"] = m.embedding.num_classes;
		header["dim"] = m.embedding.dim;
		header["vocab_rows"] = m.embedding.vocab_rows;
		header["buckets"] = m.embedding.buckets;
		header["max_n"] = m.embedding.max_n;
		const auto &c = m.embedding.train_config;
		header["train_config"] = {{"dim", c.dim},       {"epochs", c.epochs},
								  {"lr0", c.lr0},       {"max_n", c.max_n},
								  {"buckets", c.buckets}, {"seed", c.seed}};
	}
	return header;
}

void append_vocabulary(std::string &out, const vocabulary &vocab)
{
	put_u64(out, vocab.size());
	for (std::size_t i = 0; i < vocab.size(); i++) {
		put_u32(out, static_cast<std::uint32_t>(vocab.tokens[i].size()));
		out += vocab.tokens[i];
		put_u32(out, vocab.doc_frequency[i]);
	}
}

vocabulary read_vocabulary(byte_reader &reader, std::uint64_t num_documents)
{
	vocabulary vocab;
	vocab.num_documents = num_documents;
	const std::uint64_t count = reader.u64();
	if (count > reader.remaining()) { /* each token needs >= 8 bytes of framing */
		raise(errc::truncated_payload, "vocabulary count exceeds file size");
	}
	vocab.tokens.reserve(count);
	vocab.doc_frequency.reserve(count);
	for (std::uint64_t i = 0; i < count; i++) {
		const std::uint32_t len = reader.u32();
		vocab.tokens.emplace_back(reader.take(len));
		vocab.doc_frequency.push_back(reader.u32());
	}
	vocab.rebuild_index();
	return vocab;
}

void write_atomically(const std::filesystem::path &path, const std::string &bytes)
{
	const std::filesystem::path tmp = path.string() + ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out) {
			raise(errc::io_failure, "cannot open for writing: " + tmp.string());
		}
		out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
		out.flush();
		if (!out) {
			raise(errc::io_failure, "write failed: " + tmp.string());
		}
	}
	std::error_code ec;
	std::filesystem::rename(tmp, path, ec);
	if (ec) {
		raise(errc::io_failure, "rename failed: " + path.string() + ": " + ec.message());
	}
}

} /* anonymous namespace */

void save_model(const loaded_model &m, const std::filesystem::path &path)
{
	std::string bytes;
	bytes.append(model_magic, 4);
	put_u32(bytes, model_format_version);
	bytes.push_back(static_cast<char>(m.kind));

	/* json objects serialize with sorted keys, so the header is canonical
	 * and save -> load -> save is byte-stable. */
	const std::string header = header_json(m).dump();
	put_u32(bytes, static_cast<std::uint32_t>(header.size()));
	bytes += header;

	if (m.kind == model_kind::linear) {
		bytes.reserve(bytes.size() + 4 * (m.linear.weights.size() + m.linear.biases.size()));
		for (double w: m.linear.weights) {
			put_f32(bytes, static_cast<float>(w));
		}
		for (double b: m.linear.biases) {
			put_f32(bytes, static_cast<float>(b));
		}
	}
	else {
		bytes.reserve(bytes.size() +
					  4 * (m.embedding.input.size() + m.embedding.output.size()));
		for (float v: m.embedding.input) {
			put_f32(bytes, v);
		}
		for (float v: m.embedding.output) {
			put_f32(bytes, v);
		}
	}

	append_vocabulary(bytes, m.vocab);
	write_atomically(path, bytes);
}

loaded_model load_model(const std::filesystem::path &path,
						std::optional<model_kind> expected_kind)
{
	std::string bytes;
	{
		std::ifstream in(path, std::ios::binary);
		if (!in) {
			raise(errc::io_failure, "cannot open model file: " + path.string());
		}
		std::ostringstream buf;
		buf << in.rdbuf();
		if (in.bad()) {
			raise(errc::io_failure, "read failed: " + path.string());
		}
		bytes = std::move(buf).str();
	}

	byte_reader reader(bytes);
	if (std::memcmp(reader.take(4).data(), model_magic, 4) != 0) {
		raise(errc::bad_magic, "not a model file (bad magic): " + path.string());
	}
	const std::uint32_t version = reader.u32();
	if (version != model_format_version) {
		raise(errc::unsupported_version,
			  "unsupported model format version " + std::to_string(version));
	}
	const std::uint8_t kind_byte = reader.u8();
	if (kind_byte != static_cast<std::uint8_t>(model_kind::linear) &&
		kind_byte != static_cast<std::uint8_t>(model_kind::embedding)) {
		raise(errc::truncated_payload,
			  "unknown model kind byte " + std::to_string(kind_byte));
	}
	const model_kind kind = static_cast<model_kind>(kind_byte);
	if (expected_kind && kind != *expected_kind) {
		raise(errc::kind_mismatch, "model file holds a different model kind");
	}

	const std::uint32_t header_len = reader.u32();
	json header;
	try {
		const auto header_bytes = reader.take(header_len);
		header = json::parse(header_bytes.begin(), header_bytes.end());
	}
	catch (const json::exception &e) {
		raise(errc::truncated_payload, std::string("unreadable model header: ") + e.what());
	}

	loaded_model m;
	m.kind = kind;
	std::uint64_t num_documents = 0;
	std::string header_fp;
	try {
		num_documents = header.at("num_documents").get<std::uint64_t>();
		header_fp = header.at("vocab_fingerprint").get<std::string>();
		const std::string header_kind = header.at("kind").get<std::string>();
		if ((kind == model_kind::linear) != (header_kind == "linear")) {
			raise(errc::truncated_payload, "header kind disagrees with kind byte");
		}

		if (kind == model_kind::linear) {
			auto &lin = m.linear;
			lin.label_names = header.at("label_names").get<std::vector<std::string>>();
			lin.num_classes = header.at("num_classes").get<std::int32_t>();
			lin.num_features = header.at("num_features").get<std::int32_t>();
			if (lin.num_classes < 1 || lin.num_features < 0 ||
				lin.label_names.size() != static_cast<std::size_t>(lin.num_classes)) {
				raise(errc::truncated_payload, "inconsistent linear dimensions");
			}
			const auto &c = header.at("train_config");
			lin.train_config.epochs = c.at("epochs").get<int>();
			lin.train_config.lr0 = c.at("lr0").get<double>();
			lin.train_config.l2 = c.at("l2").get<double>();
			lin.train_config.seed = c.at("seed").get<std::uint64_t>();
			lin.train_config.batch_size = c.at("batch_size").get<int>();

			const std::size_t weight_count =
				static_cast<std::size_t>(lin.num_classes) * lin.num_features;
			const std::size_t payload_bytes = 4 * (weight_count + lin.num_classes);
			if (reader.remaining() < payload_bytes) {
				raise(errc::truncated_payload, "payload shorter than declared dimensions");
			}
			lin.weights.resize(weight_count);
			for (auto &w: lin.weights) {
				w = reader.f32();
			}
			lin.biases.resize(lin.num_classes);
			for (auto &b: lin.biases) {
				b = reader.f32();
			}
		}
		else {
			auto &emb = m.embedding;
			emb.label_names = header.at("label_names").get<std::vector<std::string>>();
			emb.num_classes = header.at("num_classes").get<std::int32_t>();
			emb.dim = header.at("dim").get<std::int32_t>();
			emb.vocab_rows = header.at("vocab_rows").get<std::int64_t>();
			emb.buckets = header.at("buckets").get<std::int64_t>();
			emb.max_n = header.at("max_n").get<std::int32_t>();
			if (emb.num_classes < 1 || emb.dim < 1 || emb.vocab_rows < 0 ||
				emb.buckets < 1 ||
				emb.label_names.size() != static_cast<std::size_t>(emb.num_classes)) {
				raise(errc::truncated_payload, "inconsistent embedding dimensions");
			}
			const auto &c = header.at("train_config");
			emb.train_config.dim = c.at("dim").get<int>();
			emb.train_config.epochs = c.at("epochs").get<int>();
			emb.train_config.lr0 = c.at("lr0").get<double>();
			emb.train_config.max_n = c.at("max_n").get<int>();
			emb.train_config.buckets = c.at("buckets").get<std::int64_t>();
			emb.train_config.seed = c.at("seed").get<std::uint64_t>();

			const std::size_t input_count = static_cast<std::size_t>(emb.input_rows()) *
											static_cast<std::size_t>(emb.dim);
			const std::size_t output_count =
				static_cast<std::size_t>(emb.num_classes) * emb.dim;
			if (reader.remaining() < 4 * (input_count + output_count)) {
				raise(errc::truncated_payload, "payload shorter than declared dimensions");
			}
			emb.input.resize(input_count);
			for (auto &v: emb.input) {
				v = reader.f32();
			}
			emb.output.resize(output_count);
			for (auto &v: emb.output) {
				v = reader.f32();
			}
		}
	}
	catch (const json::exception &e) {
		raise(errc::truncated_payload, std::string("bad model header field: ") + e.what());
	}

	m.vocab = read_vocabulary(reader, num_documents);
	if (reader.remaining() != 0) {
		raise(errc::truncated_payload, "trailing bytes after vocabulary section");
	}

	const std::uint64_t actual_fp = m.vocab.fingerprint();
	if (header_fp != fingerprint_hex(actual_fp)) {
		raise(errc::truncated_payload,
			  "vocabulary fingerprint mismatch (model and vocabulary disagree)");
	}
	if (kind == model_kind::linear) {
		m.linear.vocab_fingerprint = actual_fp;
	}
	else {
		m.embedding.vocab_fingerprint = actual_fp;
	}

	m.idf = compute_idf(m.vocab);
	return m;
}

} /* namespace pva */
