#include "rac/review.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <set>
#include <sstream>

#include "rac/error.hpp"
#include "rac/io.hpp"
#include "rac/random.hpp"

namespace rac::review {
namespace {

namespace fs = std::filesystem;

std::string NowIso8601() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch()) % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3)
     << std::setfill('0') << ms.count() << 'Z';
  return ss.str();
}

template <class T>
T Field(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(key, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(key, "wrong type");
  }
}

fs::path SessionFile(const fs::path& dir, const std::string& id) {
  return dir / (id + ".session.json");
}
fs::path PairsFile(const fs::path& dir, const std::string& id) {
  return dir / (id + ".pairs.jsonl");
}
fs::path VerdictsFile(const fs::path& dir, const std::string& id) {
  return dir / (id + ".verdicts.jsonl");
}

}  // namespace

json to_json(const ReviewSession& s) {
  return {{"session_id", s.id},
          {"dataset", s.dataset},
          {"seed", s.seed},
          {"requested", s.requested},
          {"sample_size", s.sample_size()},
          {"pair_ids", s.pair_ids},
          {"created_at", s.created_at}};
}

ReviewSession session_from_json(const json& j) {
  ReviewSession s;
  s.id = Field<std::string>(j, "session_id");
  s.dataset = Field<std::string>(j, "dataset");
  s.seed = Field<std::uint64_t>(j, "seed");
  s.requested = Field<std::size_t>(j, "requested");
  s.pair_ids = Field<std::vector<std::string>>(j, "pair_ids");
  s.created_at = j.value("created_at", "");
  return s;
}

json to_json(const ReviewVerdict& v) {
  return {{"session_id", v.session_id},
          {"pair_id", v.pair_id},
          {"question_ok", v.question_ok},
          {"answer_ok", v.answer_ok},
          {"explanation_ok", v.explanation_ok},
          {"accept", v.accept},
          {"notes", v.notes},
          {"timestamp", v.timestamp}};
}

ReviewVerdict verdict_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("", "verdict must be an object");
  ReviewVerdict v;
  v.session_id = j.value("session_id", "");
  v.pair_id = Field<std::string>(j, "pair_id");
  v.question_ok = Field<bool>(j, "question_ok");
  v.answer_ok = Field<bool>(j, "answer_ok");
  v.explanation_ok = Field<bool>(j, "explanation_ok");
  v.accept = Field<bool>(j, "accept");
  if (j.contains("notes") && !j.at("notes").is_null()) v.notes = Field<std::string>(j, "notes");
  v.timestamp = j.value("timestamp", "");
  return v;
}

void check_verdict(const ReviewVerdict& v) {
  if (v.accept && !(v.question_ok && v.answer_ok && v.explanation_ok)) {
    throw ValidationError("accept",
                          "accept requires question_ok, answer_ok and explanation_ok");
  }
}

json to_json(const Summary& s) {
  return {{"session_id", s.session_id},
          {"sample_size", s.sample_size},
          {"reviewed", s.reviewed},
          {"remaining", s.remaining},
          {"accepted", s.accepted},
          {"rejected", s.rejected},
          {"acceptance_rate", s.acceptance_rate},
          {"rejection_reasons",
           {{"question", s.reasons.question},
            {"answer", s.reasons.answer},
            {"explanation", s.reasons.explanation}}}};
}

Summary summarize(const ReviewSession& session, const std::vector<ReviewVerdict>& log) {
  std::map<std::string, const ReviewVerdict*> latest;
  const std::set<std::string> ids(session.pair_ids.begin(), session.pair_ids.end());
  for (const auto& v : log) {
    if (ids.contains(v.pair_id)) latest[v.pair_id] = &v;
  }
  Summary s;
  s.session_id = session.id;
  s.sample_size = session.sample_size();
  s.reviewed = latest.size();
  s.remaining = s.sample_size - s.reviewed;
  for (const auto& [_, v] : latest) {
    if (v->accept) {
      ++s.accepted;
      continue;
    }
    ++s.rejected;
    s.reasons.question += v->question_ok ? 0 : 1;
    s.reasons.answer += v->answer_ok ? 0 : 1;
    s.reasons.explanation += v->explanation_ok ? 0 : 1;
  }
  s.acceptance_rate = s.reviewed == 0 ? 0.0
                                      : static_cast<double>(s.accepted) /
                                            static_cast<double>(s.reviewed);
  return s;
}

ReviewSession make_session(const std::vector<McqPair>& dataset, std::string dataset_ref,
                           std::size_t sample_size, std::uint64_t seed) {
  if (dataset.empty()) throw ValidationError("dataset", "empty dataset");
  if (sample_size == 0) throw ConfigError("sample size must be >= 1");
  if (auto dups = duplicate_ids(dataset); !dups.empty()) {
    throw ValidationError("dataset", "duplicate id " + dups.front());
  }
  ReviewSession s;
  s.dataset = std::move(dataset_ref);
  s.seed = seed;
  s.requested = sample_size;
  for (std::size_t i : sample_indices(dataset.size(), sample_size, seed)) {
    s.pair_ids.push_back(dataset[i].id);
  }
  std::uint64_t h = fnv1a64(s.dataset);
  h = fnv1a64(std::to_string(seed) + "/" + std::to_string(sample_size), h);
  std::ostringstream id;
  id << 's' << std::hex << std::setw(16) << std::setfill('0') << h;
  s.id = id.str();
  return s;
}

ReviewStore::ReviewStore(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
  load();
}

void ReviewStore::load() {
  auto snap = std::make_shared<Snapshot>();
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const std::string name = entry.path().filename().string();
    const std::string suffix = ".session.json";
    if (name.size() <= suffix.size() || !name.ends_with(suffix)) continue;
    auto state = std::make_shared<SessionState>();
    state->session = session_from_json(io::read_json(entry.path()));
    auto pairs = std::make_shared<std::map<std::string, McqPair>>();
    for (auto& p : io::read_pairs(PairsFile(dir_, state->session.id))) {
      pairs->emplace(p.id, std::move(p));
    }
    state->pairs = std::move(pairs);
    const fs::path log = VerdictsFile(dir_, state->session.id);
    if (fs::exists(log)) {
      for (const json& j : io::read_jsonl(log)) {
        auto v = verdict_from_json(j);
        state->latest[v.pair_id] = v;
        state->log.push_back(std::move(v));
      }
    }
    (*snap)[state->session.id] = std::move(state);
  }
  publish(std::move(snap));
}

std::shared_ptr<const ReviewStore::Snapshot> ReviewStore::snapshot() const {
  std::shared_lock lock(ptr_mu_);
  return snapshot_;
}

void ReviewStore::publish(std::shared_ptr<const Snapshot> next) {
  std::unique_lock lock(ptr_mu_);
  snapshot_ = std::move(next);
}

std::shared_ptr<const ReviewStore::SessionState> ReviewStore::find(
    const std::string& id) const {
  auto snap = snapshot();
  auto it = snap->find(id);
  if (it == snap->end()) throw NotFoundError("unknown session " + id);
  return it->second;
}

ReviewSession ReviewStore::create_session(const std::vector<McqPair>& dataset,
                                          std::string dataset_ref,
                                          std::size_t sample_size, std::uint64_t seed) {
  ReviewSession s = make_session(dataset, std::move(dataset_ref), sample_size, seed);
  s.created_at = NowIso8601();

  std::lock_guard write(write_mu_);
  auto current = snapshot();
  const std::string base = s.id;
  for (int n = 2; current->contains(s.id); ++n) s.id = base + "-" + std::to_string(n);

  auto pairs = std::make_shared<std::map<std::string, McqPair>>();
  std::vector<McqPair> sampled;
  std::map<std::string, const McqPair*> by_id;
  for (const auto& p : dataset) by_id[p.id] = &p;
  for (const auto& id : s.pair_ids) {
    sampled.push_back(*by_id.at(id));
    pairs->emplace(id, *by_id.at(id));
  }
  io::write_pairs(PairsFile(dir_, s.id), sampled);
  io::write_json(SessionFile(dir_, s.id), to_json(s));

  auto state = std::make_shared<SessionState>();
  state->session = s;
  state->pairs = std::move(pairs);
  auto next = std::make_shared<Snapshot>(*current);
  (*next)[s.id] = std::move(state);
  publish(std::move(next));
  return s;
}

ReviewSession ReviewStore::create_session_from_file(const fs::path& dataset,
                                                    std::size_t sample_size,
                                                    std::uint64_t seed) {
  return create_session(io::read_pairs(dataset), dataset.string(), sample_size, seed);
}

ReviewSession ReviewStore::session(const std::string& id) const {
  return find(id)->session;
}

std::optional<McqPair> ReviewStore::next_unreviewed(const std::string& session_id) const {
  auto state = find(session_id);
  for (const auto& id : state->session.pair_ids) {
    if (!state->latest.contains(id)) return state->pairs->at(id);
  }
  return std::nullopt;
}

Summary ReviewStore::summary(const std::string& session_id) const {
  auto state = find(session_id);
  return summarize(state->session, state->log);
}

std::vector<ReviewVerdict> ReviewStore::verdicts(const std::string& session_id) const {
  return find(session_id)->log;
}

ReviewVerdict ReviewStore::record_verdict(ReviewVerdict verdict) {
  check_verdict(verdict);
  std::lock_guard write(write_mu_);
  auto current = snapshot();
  auto it = current->find(verdict.session_id);
  if (it == current->end()) throw NotFoundError("unknown session " + verdict.session_id);
  const SessionState& old = *it->second;
  if (!old.pairs->contains(verdict.pair_id)) {
    throw ValidationError("pair_id", "pair " + verdict.pair_id + " is not in session " +
                                         verdict.session_id);
  }
  verdict.timestamp = NowIso8601();
  io::append_line(VerdictsFile(dir_, verdict.session_id),
                  to_json(verdict).dump(-1, ' ', false, json::error_handler_t::replace));

  auto state = std::make_shared<SessionState>(old);
  state->latest[verdict.pair_id] = verdict;
  state->log.push_back(verdict);
  auto next = std::make_shared<Snapshot>(*current);
  (*next)[verdict.session_id] = std::move(state);
  publish(std::move(next));
  return verdict;
}

}  // namespace rac::review
