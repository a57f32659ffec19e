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

#include "pva/gateway.hpp"
#include "pva/errors.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <csignal>
#include <cstring>
#include <deque>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#ifdef _WIN32
#include <winsock2.h>
#include <ws2tcpip.h>
using socket_t = SOCKET;
static constexpr socket_t invalid_socket = INVALID_SOCKET;
#else
#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>
using socket_t = int;
static constexpr socket_t invalid_socket = -1;
#endif

namespace pva {

using nlohmann::json;

route_table parse_routes(std::string_view json_text)
{
	json doc;
	try {
		doc = json::parse(json_text);
	}
	catch (const json::exception &e) {
		raise(errc::parse_failure, std::string("route table is not valid JSON: ") + e.what());
	}
	if (!doc.is_object() || !doc.contains("default_route") ||
		!doc["default_route"].is_string()) {
		raise(errc::missing_default, "route table needs a string default_route");
	}

	route_table table;
	table.default_route = doc["default_route"].get<std::string>();
	if (table.default_route.empty()) {
		raise(errc::parse_failure, "default_route must be nonempty");
	}
	if (doc.contains("routes")) {
		if (!doc["routes"].is_object()) {
			raise(errc::parse_failure, "routes must be an object");
		}
		for (const auto &[label, route]: doc["routes"].items()) {
			if (!route.is_string() || route.get<std::string>().empty()) {
				raise(errc::parse_failure, "route for '" + label + "' must be a nonempty string");
			}
			table.routes.emplace(label, route.get<std::string>());
		}
	}
	return table;
}

route_table load_routes(const std::filesystem::path &path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		raise(errc::io_failure, "cannot open route table: " + path.string());
	}
	std::ostringstream buf;
	buf << in.rdbuf();
	return parse_routes(buf.str());
}

std::string response_to_json(const gateway_response &r,
							 std::span<const std::string> label_names)
{
	json doc;
	if (r.id_is_null) {
		doc["id"] = nullptr;
	}
	else {
		doc["id"] = r.id;
	}
	doc["latency_ms"] = r.latency_ms;
	if (r.error) {
		doc["error"] = {{"code", r.error->code}, {"message", r.error->message}};
	}
	else {
		doc["label"] = *r.label;
		doc["confidence"] = r.confidence;
		doc["route"] = r.route;
		json alts = json::array();
		for (const auto &alt: r.alternatives) {
			const std::size_t idx = static_cast<std::size_t>(alt.label);
			alts.push_back({{"label", idx < label_names.size()
										  ? label_names[idx]
										  : std::to_string(alt.label)},
							{"confidence", alt.probability}});
		}
		doc["alternatives"] = std::move(alts);
	}
	return doc.dump();
}

gateway::gateway(const loaded_model &model, route_table routes, int top_k)
	: model_(model), routes_(std::move(routes)), top_k_(top_k < 1 ? 1 : top_k)
{
}

gateway_response gateway::handle(const gateway_request &req) const
{
	const auto begin = std::chrono::steady_clock::now();
	gateway_response resp;
	resp.id = req.id;

	auto finish = [&begin](gateway_response &r) -> gateway_response & {
		r.latency_ms = std::chrono::duration<double, std::milli>(
						   std::chrono::steady_clock::now() - begin)
						   .count();
		return r;
	};

	try {
		const auto tokens = tokenize(req.text);
		if (tokens.empty()) {
			resp.error = gateway_error{"empty_text", "no classifiable tokens in request text"};
			return finish(resp);
		}
		const auto ranked = model_.predict_tokens(tokens, top_k_);
		const auto &labels = model_.label_names();
		resp.label = labels[static_cast<std::size_t>(ranked.front().label)];
		resp.confidence = ranked.front().probability;
		resp.alternatives = ranked;
		resp.route = routes_.resolve(*resp.label);
		return finish(resp);
	}
	catch (const std::exception &e) {
		resp.label.reset();
		resp.alternatives.clear();
		resp.route.clear();
		resp.error = gateway_error{"internal", e.what()};
		return finish(resp);
	}
}

std::string gateway::handle_line(std::string_view line) const
{
	gateway_request req;
	json doc;
	bool ok = true;
	try {
		doc = json::parse(line);
		if (!doc.is_object() || !doc.contains("id") || !doc.contains("text") ||
			!doc["text"].is_string()) {
			ok = false;
		}
		else {
			if (doc["id"].is_string()) {
				req.id = doc["id"].get<std::string>();
			}
			else if (doc["id"].is_number_integer()) {
				req.id = std::to_string(doc["id"].get<std::int64_t>());
			}
			else {
				ok = false;
			}
			if (doc.contains("channel")) {
				if (!doc["channel"].is_string()) {
					ok = false;
				}
				else {
					req.channel = doc["channel"].get<std::string>();
				}
			}
			req.text = ok ? doc["text"].get<std::string>() : "";
			if (req.id.empty()) {
				ok = false;
			}
		}
	}
	catch (const json::exception &) {
		ok = false;
	}

	if (!ok) {
		gateway_response resp;
		resp.id_is_null = true;
		resp.error = gateway_error{"bad_request", "expected {\"id\", \"text\"[, \"channel\"]}"};
		return response_to_json(resp, model_.label_names());
	}
	return response_to_json(handle(req), model_.label_names());
}

std::size_t serve_stream(const gateway &gw, std::istream &in, std::ostream &out, int workers)
{
	if (workers < 1) {
		workers = 1;
	}

	std::size_t handled = 0;

	if (workers == 1) {
		std::string line;
		while (std::getline(in, line)) {
			if (!line.empty() && line.back() == '\r') {
				line.pop_back();
			}
			if (line.empty()) {
				continue;
			}
			out << gw.handle_line(line) << '\n';
			out.flush();
			handled++;
		}
		return handled;
	}

	/* Multi-worker mode: responses go out in completion order. */
	std::mutex queue_mutex;
	std::condition_variable queue_cv;
	std::deque<std::string> queue;
	bool done = false;
	std::mutex out_mutex;

	auto worker_loop = [&]() {
		for (;;) {
			std::string line;
			{
				std::unique_lock lock(queue_mutex);
				queue_cv.wait(lock, [&] { return done || !queue.empty(); });
				if (queue.empty()) {
					return;
				}
				line = std::move(queue.front());
				queue.pop_front();
			}
			std::string response = gw.handle_line(line);
			std::lock_guard lock(out_mutex);
			out << response << '\n';
			out.flush();
		}
	};

	std::vector<std::thread> pool;
	pool.reserve(static_cast<std::size_t>(workers));
	for (int w = 0; w < workers; w++) {
		pool.emplace_back(worker_loop);
	}

	std::string line;
	while (std::getline(in, line)) {
		if (!line.empty() && line.back() == '\r') {
			line.pop_back();
		}
		if (line.empty()) {
			continue;
		}
		{
			std::lock_guard lock(queue_mutex);
			queue.push_back(std::move(line));
			handled++;
		}
		queue_cv.notify_one();
	}
	{
		std::lock_guard lock(queue_mutex);
		done = true;
	}
	queue_cv.notify_all();
	for (auto &t: pool) {
		t.join();
	}
	return handled;
}

namespace {

std::atomic<bool> g_stop_requested{false};

void handle_stop_signal(int)
{
	g_stop_requested.store(true);
}

void close_socket(socket_t s)
{
#ifdef _WIN32
	closesocket(s);
#else
	::close(s);
#endif
}

/* Line-at-a-time loop over one connection; responses are written back on
 * the same socket, one per line. */
void serve_connection(const gateway &gw, socket_t client)
{
	std::string pending;
	char buf[4096];
	for (;;) {
#ifdef _WIN32
		const int n = recv(client, buf, sizeof buf, 0);
#else
		const ssize_t n = recv(client, buf, sizeof buf, 0);
#endif
		if (n <= 0) {
			break;
		}
		pending.append(buf, static_cast<std::size_t>(n));
		std::size_t start = 0;
		for (;;) {
			const std::size_t nl = pending.find('\n', start);
			if (nl == std::string::npos) {
				pending.erase(0, start);
				break;
			}
			std::string_view line(pending.data() + start, nl - start);
			if (!line.empty() && line.back() == '\r') {
				line.remove_suffix(1);
			}
			start = nl + 1;
			if (line.empty()) {
				continue;
			}
			std::string response = gw.handle_line(line);
			response.push_back('\n');
			std::size_t sent = 0;
			while (sent < response.size()) {
#ifdef _WIN32
				const int w = send(client, response.data() + sent,
								   static_cast<int>(response.size() - sent), 0);
#else
				const ssize_t w =
					send(client, response.data() + sent, response.size() - sent, 0);
#endif
				if (w <= 0) {
					close_socket(client);
					return;
				}
				sent += static_cast<std::size_t>(w);
			}
		}
	}
	close_socket(client);
}

} /* anonymous namespace */

void serve_tcp(const gateway &gw, const std::string &host, int port, int workers)
{
	if (workers < 1) {
		workers = 1;
	}
#ifdef _WIN32
	WSADATA wsa;
	if (WSAStartup(MAKEWORD(2, 2), &wsa) != 0) {
		raise(errc::bind_failure, "WSAStartup failed");
	}
#endif

	socket_t listener = socket(AF_INET, SOCK_STREAM, 0);
	if (listener == invalid_socket) {
		raise(errc::bind_failure, "cannot create listening socket");
	}
	const int one = 1;
	setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char *>(&one),
			   sizeof one);

	sockaddr_in addr{};
	addr.sin_family = AF_INET;
	addr.sin_port = htons(static_cast<std::uint16_t>(port));
	if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
		close_socket(listener);
		raise(errc::bind_failure, "cannot parse listen address: " + host);
	}
	if (bind(listener, reinterpret_cast<sockaddr *>(&addr), sizeof addr) != 0 ||
		listen(listener, 64) != 0) {
		close_socket(listener);
		raise(errc::bind_failure,
			  "cannot bind " + host + ":" + std::to_string(port) + ": " +
				  std::strerror(errno));
	}

	g_stop_requested.store(false);
#ifdef _WIN32
	std::signal(SIGINT, handle_stop_signal);
	std::signal(SIGTERM, handle_stop_signal);
#else
	/* No SA_RESTART: the blocking accept must return EINTR so the stop flag
	 * gets checked. */
	struct sigaction sa{};
	sa.sa_handler = handle_stop_signal;
	sigemptyset(&sa.sa_mask);
	sa.sa_flags = 0;
	sigaction(SIGINT, &sa, nullptr);
	sigaction(SIGTERM, &sa, nullptr);
#endif

	/* workers bounds the number of concurrently served connections. */
	std::mutex slots_mutex;
	std::condition_variable slots_cv;
	int free_slots = workers;
	std::vector<std::thread> active;

	while (!g_stop_requested.load()) {
		const socket_t client = accept(listener, nullptr, nullptr);
		if (client == invalid_socket) {
			if (g_stop_requested.load()) {
				break;
			}
			if (errno == EINTR) {
				continue;
			}
			break;
		}
		{
			std::unique_lock lock(slots_mutex);
			slots_cv.wait(lock, [&] { return free_slots > 0; });
			free_slots--;
		}
		active.emplace_back([&gw, client, &slots_mutex, &slots_cv, &free_slots]() {
			serve_connection(gw, client);
			std::lock_guard lock(slots_mutex);
			free_slots++;
			slots_cv.notify_one();
		});
	}

	close_socket(listener);
	for (auto &t: active) {
		t.join();
	}
#ifdef _WIN32
	WSACleanup();
#endif
}

} /* namespace pva */
