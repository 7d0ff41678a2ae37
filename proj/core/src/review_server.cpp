#include "rac/review_server.hpp"

#include <httplib.h>

#include <thread>

#include "rac/error.hpp"
#include "rac/random.hpp"

namespace rac::review {
namespace {

constexpr const char* kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>rac-forge review</title></head>
<body>
<h1>rac-forge review service</h1>
<p>No UI bundle configured. Start the server with <code>--ui-dir</code> pointing at the
built review UI, or use the JSON API under <code>/api/sessions</code>.</p>
</body></html>
)";

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, int status, const std::string& message) {
  Reply(res, status, {{"error", message}});
}

// Maps library errors onto HTTP statuses.
template <class F>
void Guard(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const NotFoundError& e) {
    ReplyError(res, 404, e.what());
  } catch (const ValidationError& e) {
    Reply(res, 400, {{"error", e.what()}, {"path", e.path()}});
  } catch (const ConfigError& e) {
    ReplyError(res, 400, e.what());
  } catch (const std::exception& e) {
    ReplyError(res, 500, e.what());
  }
}

json ParseBody(const httplib::Request& req) {
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ValidationError("", "request body must be a JSON object");
  }
  return j;
}

}  // namespace

struct ReviewServer::Impl {
  ReviewStore& store;
  ServerOptions opts;
  httplib::Server server;
  std::thread thread;

  Impl(ReviewStore& s, ServerOptions o) : store(s), opts(std::move(o)) { Routes(); }

  void Routes() {
    server.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      Guard(res, [&] {
        const json body = ParseBody(req);
        if (!body.contains("dataset") || !body.at("dataset").is_string()) {
          throw ValidationError("dataset", "expected string path");
        }
        const auto size = body.value("sample_size", kDefaultSampleSize);
        const auto seed = body.value("seed", kDefaultSeed);
        const auto s = store.create_session_from_file(
            body.at("dataset").get<std::string>(), size, seed);
        Reply(res, 201, {{"session_id", s.id}, {"sample_size", s.sample_size()}});
      });
    });

    server.Get(R"(/api/sessions/([^/]+)/next)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 Guard(res, [&] {
                   auto pair = store.next_unreviewed(req.matches[1]);
                   Reply(res, 200, pair ? to_json(*pair) : json{{"done", true}});
                 });
               });

    server.Post(R"(/api/sessions/([^/]+)/verdicts)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  Guard(res, [&] {
                    const std::string session_id = req.matches[1];
                    store.session(session_id);  // 404 before validation
                    json body = ParseBody(req);
                    for (const char* k : {"session_id", "timestamp"}) {
                      if (body.contains(k)) throw ValidationError(k, "set by the server");
                    }
                    ReviewVerdict v = verdict_from_json(body);
                    v.session_id = session_id;
                    const auto saved = store.record_verdict(std::move(v));
                    Reply(res, 200, {{"acknowledged", true},
                                     {"pair_id", saved.pair_id},
                                     {"timestamp", saved.timestamp}});
                  });
                });

    server.Get(R"(/api/sessions/([^/]+)/summary)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 Guard(res, [&] { Reply(res, 200, to_json(store.summary(req.matches[1]))); });
               });

    if (opts.ui_dir) {
      server.set_mount_point("/", opts.ui_dir->string());
    } else {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kPlaceholderPage, "text/html");
      });
    }
  }

};

ReviewServer::ReviewServer(ReviewStore& store, ServerOptions opts)
    : impl_(std::make_unique<Impl>(store, std::move(opts))) {}

ReviewServer::~ReviewServer() { stop(); }

bool ReviewServer::listen() { return impl_->server.listen(impl_->opts.host, impl_->opts.port); }

int ReviewServer::start() {
  int port = impl_->opts.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(impl_->opts.host);
  } else if (!impl_->server.bind_to_port(impl_->opts.host, port)) {
    port = -1;
  }
  if (port < 0) return -1;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void ReviewServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace rac::review
