#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "rac/model.hpp"

namespace rac::review {

inline constexpr std::size_t kDefaultSampleSize = 200;

struct ReviewSession {
  std::string id;
  std::string dataset;  // reference to the source file
  std::uint64_t seed = 0;
  std::size_t requested = kDefaultSampleSize;
  std::vector<std::string> pair_ids;  // sample order
  std::string created_at;

  std::size_t sample_size() const { return pair_ids.size(); }
};

json to_json(const ReviewSession& s);
ReviewSession session_from_json(const json& j);

struct ReviewVerdict {
  std::string session_id;
  std::string pair_id;
  bool question_ok = false;
  bool answer_ok = false;
  bool explanation_ok = false;
  bool accept = false;
  std::string notes;
  std::string timestamp;
};

json to_json(const ReviewVerdict& v);
ReviewVerdict verdict_from_json(const json& j);

// accept implies all three component flags. Throws ValidationError.
void check_verdict(const ReviewVerdict& v);

struct RejectionReasons {
  std::size_t question = 0;
  std::size_t answer = 0;
  std::size_t explanation = 0;
  bool operator==(const RejectionReasons&) const = default;
};

struct Summary {
  std::string session_id;
  std::size_t sample_size = 0;
  std::size_t reviewed = 0;
  std::size_t remaining = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  RejectionReasons reasons;  // false flags among rejected verdicts
  double acceptance_rate = 0.0;  // accepted / reviewed

  bool operator==(const Summary&) const = default;
};

json to_json(const Summary& s);

// Replays a verdict log, last write per pair winning.
Summary summarize(const ReviewSession& session, const std::vector<ReviewVerdict>& log);

// Seeded sample without replacement of min(sample_size, |dataset|) ids.
// Throws ValidationError on an empty dataset.
ReviewSession make_session(const std::vector<McqPair>& dataset, std::string dataset_ref,
                           std::size_t sample_size, std::uint64_t seed);

// Sessions and verdicts persisted under one directory:
//   <dir>/<id>.session.json    session record
//   <dir>/<id>.pairs.jsonl     the sampled pairs
//   <dir>/<id>.verdicts.jsonl  append-only verdict log
// Writes are serialized; readers take an immutable snapshot.
class ReviewStore {
 public:
  explicit ReviewStore(std::filesystem::path dir);

  ReviewSession create_session(const std::vector<McqPair>& dataset,
                               std::string dataset_ref, std::size_t sample_size,
                               std::uint64_t seed);
  ReviewSession create_session_from_file(const std::filesystem::path& dataset,
                                         std::size_t sample_size, std::uint64_t seed);

  // Throws NotFoundError for unknown sessions.
  ReviewSession session(const std::string& id) const;
  std::optional<McqPair> next_unreviewed(const std::string& session_id) const;
  Summary summary(const std::string& session_id) const;
  std::vector<ReviewVerdict> verdicts(const std::string& session_id) const;

  // Validates, stamps the time, appends to the log and publishes a new
  // snapshot. Throws NotFoundError or ValidationError.
  ReviewVerdict record_verdict(ReviewVerdict verdict);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  struct SessionState {
    ReviewSession session;
    std::shared_ptr<const std::map<std::string, McqPair>> pairs;
    std::vector<ReviewVerdict> log;
    std::map<std::string, ReviewVerdict> latest;
  };
  using Snapshot = std::map<std::string, std::shared_ptr<const SessionState>>;

  std::shared_ptr<const Snapshot> snapshot() const;
  std::shared_ptr<const SessionState> find(const std::string& id) const;
  void publish(std::shared_ptr<const Snapshot> next);
  void load();

  std::filesystem::path dir_;
  std::mutex write_mu_;
  mutable std::shared_mutex ptr_mu_;
  std::shared_ptr<const Snapshot> snapshot_;
};

}  // namespace rac::review
