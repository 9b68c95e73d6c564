#pragma once

// HTTP and WebSocket transport for SessionManager.
//
//   GET  /ws                         upgrade; newline-delimited protocol messages both ways
//   POST /api/sessions               create a session, returns id and seat tokens
//   GET  /api/sessions               list sessions
//   GET  /api/sessions/{id}/state    public state snapshot
//   GET  /api/sessions/{id}/log      JSON-lines event log
//   GET  /...                        files under the static directory (index.html for /)

#include <boost/asio.hpp>
#include <boost/beast.hpp>

#include <deque>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "aljabar/service.hpp"

namespace aljabar::net {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

class StartupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8080;  // 0 picks a free port
  std::filesystem::path static_dir;
  GameConfig defaults = GameConfig::standard();
  std::chrono::milliseconds tick_interval{200};
  unsigned threads = 1;
};

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

namespace detail {

inline Response json_response(const Request& req, http::status st, const Json& body) {
  Response res{st, req.version()};
  res.set(http::field::content_type, "application/json");
  res.set(http::field::access_control_allow_origin, "*");
  res.keep_alive(req.keep_alive());
  res.body() = body.dump() + "\n";
  res.prepare_payload();
  return res;
}

inline Response error_response(const Request& req, http::status st, const std::string& what) {
  return json_response(req, st, {{"error", what}});
}

inline std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".jsonl" || ext == ".txt") return "text/plain; charset=utf-8";
  return "application/octet-stream";
}

inline std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : path) {
    if (ch == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

}  // namespace detail

/// Builds a config from a creation request, falling back to `defaults` field by field.
inline GameConfig config_from_request(const Json& body, const GameConfig& defaults) {
  const GroupParams params{body.value("m", defaults.params.m), body.value("n", defaults.params.n)};
  std::uint64_t seed = 0;
  if (body.contains("seed") && !body["seed"].is_null()) {
    seed = body["seed"].get<std::uint64_t>();
  } else {
    std::random_device rd;
    seed = (std::uint64_t{rd()} << 32) ^ rd();
  }
  return GameConfig::make(params, body.value("players", defaults.players),
                          body.value("copies", defaults.copies), seed);
}

/// Routes one plain HTTP request.
inline Response handle_http(SessionManager& mgr, const ServerOptions& opts, const Request& req) {
  const auto raw = req.target();
  std::string_view target(raw.data(), raw.size());
  target = target.substr(0, target.find('?'));
  const auto parts = detail::split_path(target);
  try {
    if (!parts.empty() && parts[0] == "api") {
      if (parts.size() == 2 && parts[1] == "sessions") {
        if (req.method() == http::verb::get) return detail::json_response(req, http::status::ok, mgr.list_sessions());
        if (req.method() != http::verb::post)
          return detail::error_response(req, http::status::method_not_allowed, "use GET or POST");
        const Json body = req.body().empty() ? Json::object() : Json::parse(req.body());
        const auto config = config_from_request(body, opts.defaults);
        std::vector<std::string> seats;
        if (body.contains("seats")) {
          seats = body["seats"].get<std::vector<std::string>>();
        } else {
          seats.assign(config.players, "greedy");
          seats[0] = "human";
        }
        const auto created = mgr.create_session(config, seats);
        return detail::json_response(req, http::status::created,
                                     {{"session", created.id},
                                      {"tokens", created.tokens},
                                      {"spectator_token", created.spectator_token},
                                      {"seats", seats},
                                      {"config", protocol::config_json(config)}});
      }
      if (parts.size() == 4 && parts[1] == "sessions" && req.method() == http::verb::get) {
        if (parts[3] == "state")
          return detail::json_response(req, http::status::ok, mgr.session_state(parts[2]));
        if (parts[3] == "log") {
          Response res{http::status::ok, req.version()};
          res.set(http::field::content_type, "application/x-ndjson");
          res.keep_alive(req.keep_alive());
          res.body() = mgr.log_text(parts[2]);
          res.prepare_payload();
          return res;
        }
      }
      return detail::error_response(req, http::status::not_found, "no such endpoint");
    }
  } catch (const ServiceError& e) {
    return detail::error_response(req, http::status::not_found, e.what());
  } catch (const std::exception& e) {
    return detail::error_response(req, http::status::bad_request, e.what());
  }

  if (req.method() != http::verb::get && req.method() != http::verb::head)
    return detail::error_response(req, http::status::method_not_allowed, "static files are GET only");
  if (opts.static_dir.empty()) return detail::error_response(req, http::status::not_found, "no static directory");
  std::filesystem::path file = opts.static_dir;
  for (const auto& p : parts) {
    if (p == ".." || p == ".") return detail::error_response(req, http::status::bad_request, "bad path");
    file /= p;
  }
  if (std::filesystem::is_directory(file)) file /= "index.html";
  std::ifstream in(file, std::ios::binary);
  if (!in) return detail::error_response(req, http::status::not_found, "not found");
  std::ostringstream body;
  body << in.rdbuf();
  Response res{http::status::ok, req.version()};
  res.set(http::field::content_type, std::string(detail::mime_type(file)));
  res.keep_alive(req.keep_alive());
  res.body() = req.method() == http::verb::head ? std::string() : body.str();
  res.prepare_payload();
  return res;
}

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, SessionManager& mgr) : ws_(std::move(socket)), mgr_(mgr) {}
  ~WsSession() { close(); }

  void run(Request req) {
    ws_.text(true);
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    std::weak_ptr<WsSession> weak = shared_from_this();
    auto ex = ws_.get_executor();
    id_ = mgr_.connect([weak, ex](const std::string& line) {
      asio::post(ex, [weak, line] {
        if (auto self = weak.lock()) self->queue(line + "\n");
      });
    });
    connected_ = true;
    do_read();
  }

  void do_read() { ws_.async_read(in_, beast::bind_front_handler(&WsSession::on_read, shared_from_this())); }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return close();
    const auto text = beast::buffers_to_string(in_.data());
    in_.consume(in_.size());
    std::size_t start = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      std::string_view line(text.data() + start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) mgr_.handle(id_, line);
      start = end + 1;
    }
    do_read();
  }

  void queue(std::string line) {
    out_.push_back(std::move(line));
    if (out_.size() == 1) do_write();
  }

  void do_write() {
    ws_.async_write(asio::buffer(out_.front()),
                    beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return close();
    out_.pop_front();
    if (!out_.empty()) do_write();
  }

  void close() {
    if (connected_) {
      connected_ = false;
      mgr_.disconnect(id_);
    }
  }

  websocket::stream<beast::tcp_stream> ws_;
  SessionManager& mgr_;
  beast::flat_buffer in_;
  std::deque<std::string> out_;
  ClientId id_ = 0;
  bool connected_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, SessionManager& mgr, const ServerOptions& opts)
      : stream_(std::move(socket)), mgr_(mgr), opts_(opts) {}

  void run() {
    asio::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::do_read, shared_from_this()));
  }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(60));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) return shutdown();
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      const auto raw = req_.target();
      std::string_view target(raw.data(), raw.size());
      if (target.substr(0, target.find('?')) != "/ws") return write(detail::error_response(req_, http::status::not_found, "websocket endpoint is /ws"));
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), mgr_)->run(std::move(req_));
      return;
    }
    write(handle_http(mgr_, opts_, req_));
  }

  void write(Response res) {
    auto sp = std::make_shared<Response>(std::move(res));
    http::async_write(stream_, *sp, [self = shared_from_this(), sp](beast::error_code ec, std::size_t) {
      if (ec) return;
      if (!sp->keep_alive()) return self->shutdown();
      self->do_read();
    });
  }

  void shutdown() {
    beast::error_code ec;
    stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
  }

  beast::tcp_stream stream_;
  SessionManager& mgr_;
  const ServerOptions& opts_;
  beast::flat_buffer buffer_;
  Request req_;
};

class Server {
 public:
  /// Binds immediately; throws StartupError if the address cannot be used.
  Server(SessionManager& mgr, ServerOptions opts)
      : mgr_(mgr), opts_(std::move(opts)), acceptor_(ioc_), timer_(ioc_) {
    const auto where = opts_.address + ":" + std::to_string(opts_.port);
    try {
      const tcp::endpoint ep{asio::ip::make_address(opts_.address), opts_.port};
      acceptor_.open(ep.protocol());
      acceptor_.set_option(asio::socket_base::reuse_address(true));
      acceptor_.bind(ep);
      acceptor_.listen(asio::socket_base::max_listen_connections);
    } catch (const boost::system::system_error& e) {
      if (e.code() == asio::error::address_in_use)
        throw StartupError("cannot listen on " + where + ": address already in use");
      throw StartupError("cannot listen on " + where + ": " + e.code().message());
    }
  }

  ~Server() { stop(); }

  unsigned short port() const { return acceptor_.local_endpoint().port(); }

  /// Serves on background threads until stop().
  void start() {
    do_accept();
    schedule_tick();
    for (unsigned i = 0; i < std::max(1u, opts_.threads); ++i) threads_.emplace_back([this] { ioc_.run(); });
  }

  /// Serves on the calling thread (plus extra workers) until stop() or SIGINT/SIGTERM.
  void run() {
    asio::signal_set signals(ioc_, SIGINT, SIGTERM);
    signals.async_wait([this](beast::error_code, int) { ioc_.stop(); });
    do_accept();
    schedule_tick();
    for (unsigned i = 1; i < std::max(1u, opts_.threads); ++i) threads_.emplace_back([this] { ioc_.run(); });
    ioc_.run();
    stop();
  }

  void stop() {
    ioc_.stop();
    for (auto& t : threads_)
      if (t.joinable()) t.join();
    threads_.clear();
  }

 private:
  void do_accept() {
    acceptor_.async_accept(asio::make_strand(ioc_), [this](beast::error_code ec, tcp::socket socket) {
      if (!ec) std::make_shared<HttpSession>(std::move(socket), mgr_, opts_)->run();
      if (acceptor_.is_open()) do_accept();
    });
  }

  void schedule_tick() {
    timer_.expires_after(opts_.tick_interval);
    timer_.async_wait([this](beast::error_code ec) {
      if (ec) return;
      try {
        mgr_.tick();
      } catch (const std::exception& e) {
        std::fprintf(stderr, "fallback move failed: %s\n", e.what());
      }
      schedule_tick();
    });
  }

  SessionManager& mgr_;
  ServerOptions opts_;
  asio::io_context ioc_;
  tcp::acceptor acceptor_;
  asio::steady_timer timer_;
  std::vector<std::thread> threads_;
};

}  // namespace aljabar::net
