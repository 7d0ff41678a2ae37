#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "rac/review.hpp"

namespace rac::review {

inline constexpr int kDefaultPort = 8787;

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = kDefaultPort;
  // Static review-ui bundle served at "/". A placeholder page otherwise.
  std::optional<std::filesystem::path> ui_dir;
};

// HTTP front end for a ReviewStore:
//   POST /api/sessions                {dataset, sample_size, seed} -> {session_id}
//   GET  /api/sessions/{id}/next      pair record or {"done": true}
//   POST /api/sessions/{id}/verdicts  {pair_id, question_ok, answer_ok,
//                                      explanation_ok, accept, notes}
//   GET  /api/sessions/{id}/summary   summary document
class ReviewServer {
 public:
  ReviewServer(ReviewStore& store, ServerOptions opts);
  ~ReviewServer();

  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Blocks until stop(). Returns false if the port cannot be bound.
  bool listen();

  // Binds (port 0 picks a free one) and serves on a background thread.
  // Returns the bound port, or -1.
  int start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rac::review
