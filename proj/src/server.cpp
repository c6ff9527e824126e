#include "skitrain/server.hpp"

#include <atomic>
#include <chrono>
#include <deque>
#include <iostream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "skitrain/version.hpp"

namespace skitrain {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

using SteadyClock = std::chrono::steady_clock;

double seconds_since(SteadyClock::time_point origin) {
  return std::chrono::duration<double>(SteadyClock::now() - origin).count();
}

tcp::endpoint parse_bind(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorKind::InvalidInput, "bind address must be host:port, got '" + bind + "'");
  std::string host = bind.substr(0, colon);
  const std::string portText = bind.substr(colon + 1);
  if (host.size() > 1 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  unsigned long port = 0;
  try {
    std::size_t used = 0;
    port = std::stoul(portText, &used);
    if (used != portText.size() || port > 65535) throw std::invalid_argument("port");
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "invalid port '" + portText + "'");
  }
  boost::system::error_code ec;
  const auto address = asio::ip::make_address(host.empty() ? "0.0.0.0" : host, ec);
  if (ec) throw Error(ErrorKind::InvalidInput, "invalid bind host '" + host + "'");
  return {address, static_cast<unsigned short>(port)};
}

struct Shared {
  SessionConfig config;
  std::shared_ptr<LevelCache> cache = std::make_shared<LevelCache>();
  SteadyClock::time_point origin = SteadyClock::now();
  std::atomic<std::uint64_t> sessions{0};
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, std::shared_ptr<Shared> shared)
      : ws_(std::move(socket)),
        timer_(ws_.get_executor()),
        shared_(std::move(shared)),
        engine_(shared_->config, shared_->cache, "session" + std::to_string(++shared_->sessions)) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.set_option(websocket::stream_base::decorator(
        [](websocket::response_type& res) { res.set(http::field::server, std::string(kVersionTag)); }));
    ws_.text(true);
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    period_ = std::chrono::duration_cast<SteadyClock::duration>(std::chrono::duration<double>(1.0 / shared_->config.tickHz));
    nextTick_ = SteadyClock::now() + period_;
    schedule_tick();
    do_read();
  }

  void do_read() { ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this())); }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      closed_ = true;
      timer_.cancel();
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    send(engine_.handle(text, seconds_since(shared_->origin)));
    do_read();
  }

  void schedule_tick() {
    timer_.expires_at(nextTick_);
    timer_.async_wait(beast::bind_front_handler(&WsSession::on_tick, shared_from_this()));
  }

  void on_tick(beast::error_code ec) {
    if (ec || closed_) return;
    send(engine_.tick(seconds_since(shared_->origin)));
    nextTick_ += period_;
    const auto now = SteadyClock::now();
    if (nextTick_ < now) nextTick_ = now;
    schedule_tick();
  }

  void send(std::vector<std::string> messages) {
    if (closed_) return;
    for (auto& m : messages) queue_.push_back(std::move(m));
    if (!writing_ && !queue_.empty()) do_write();
  }

  void do_write() {
    writing_ = true;
    ws_.async_write(asio::buffer(queue_.front()), beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    queue_.pop_front();
    if (ec) {
      closed_ = true;
      writing_ = false;
      queue_.clear();
      timer_.cancel();
      return;
    }
    if (queue_.empty()) writing_ = false;
    else do_write();
  }

  websocket::stream<beast::tcp_stream> ws_;
  asio::steady_timer timer_;
  std::shared_ptr<Shared> shared_;
  SessionEngine engine_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  bool writing_ = false;
  bool closed_ = false;
  SteadyClock::duration period_{};
  SteadyClock::time_point nextTick_{};
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, std::shared_ptr<Shared> shared) : stream_(std::move(socket)), shared_(std::move(shared)) {}

  void run() { do_read(); }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (websocket::is_upgrade(req_)) {
      if (req_.target() == "/session") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), shared_)->run(std::move(req_));
        return;
      }
      respond(http::status::not_found, "text/plain", "not found\n");
      return;
    }
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      respond(http::status::method_not_allowed, "text/plain", "method not allowed\n");
    } else if (req_.target() == "/health") {
      respond(http::status::ok, "text/plain", "ok");
    } else if (req_.target() == "/levels") {
      respond(http::status::ok, "application/json", level_presets_json().dump() + "\n");
    } else {
      respond(http::status::not_found, "text/plain", "not found\n");
    }
  }

  void respond(http::status status, std::string_view contentType, std::string body) {
    auto res = std::make_shared<http::response<http::string_body>>(status, req_.version());
    res->set(http::field::server, std::string(kVersionTag));
    res->set(http::field::content_type, std::string(contentType));
    res->keep_alive(req_.keep_alive());
    if (req_.method() != http::verb::head) res->body() = std::move(body);
    res->prepare_payload();
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
      if (ec) return;
      if (!res->keep_alive()) {
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
        return;
      }
      self->do_read();
    });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  std::shared_ptr<Shared> shared_;
};

}  // namespace

struct Server::Impl {
  ServerOptions options;
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::shared_ptr<Shared> shared = std::make_shared<Shared>();
  std::vector<std::thread> threads;
  asio::executor_work_guard<asio::io_context::executor_type> work{ioc.get_executor()};

  void do_accept() {
    acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        if (ec == asio::error::operation_aborted) return;
      } else {
        std::make_shared<HttpSession>(std::move(socket), shared)->run();
      }
      if (acceptor.is_open()) do_accept();
    });
  }
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>()) {
  // Validates the session configuration up front.
  SessionEngine probe(options.session);
  if (options.threads < 1) throw Error(ErrorKind::InvalidParams, "threads must be >= 1");
  impl_->options = std::move(options);
  impl_->shared->config = impl_->options.session;
  const tcp::endpoint endpoint = parse_bind(impl_->options.bind);
  beast::error_code ec;
  impl_->acceptor.open(endpoint.protocol(), ec);
  if (!ec) impl_->acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) impl_->acceptor.bind(endpoint, ec);
  if (!ec) impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot listen on " + impl_->options.bind + ": " + ec.message());
  impl_->do_accept();
}

Server::~Server() { stop(); }

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::start() {
  if (!impl_->threads.empty()) return;
  for (int i = 0; i < impl_->options.threads; ++i) impl_->threads.emplace_back([this] { impl_->ioc.run(); });
}

void Server::run() {
  asio::signal_set signals(impl_->ioc, SIGINT, SIGTERM);
  signals.async_wait([this](beast::error_code, int) {
    impl_->work.reset();
    impl_->ioc.stop();
  });
  start();
  for (auto& t : impl_->threads)
    if (t.joinable()) t.join();
  impl_->threads.clear();
}

void Server::stop() {
  if (!impl_) return;
  impl_->work.reset();
  impl_->ioc.stop();
  for (auto& t : impl_->threads)
    if (t.joinable()) t.join();
  impl_->threads.clear();
}

}  // namespace skitrain
