#include "rac/taxonomy.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "rac/error.hpp"
#include "rac/io.hpp"
#include "rac/text.hpp"

namespace rac::curation {
namespace {

Taxonomy MakeDefault() {
  Taxonomy t;
  t.name = "networking-9";
  t.categories = {
      {"Physical layer & Transmission",
       {"physical layer", "bandwidth", "signal", "modulation", "encoding", "bit rate",
        "nyquist", "shannon", "fiber", "optical fiber", "coaxial", "twisted pair",
        "attenuation", "multiplexing", "fdm", "tdm", "baud", "transmission medium",
        "propagation delay", "noise"}},
      {"Data link layer & LANs",
       {"data link", "data link layer", "ethernet", "mac address", "frame", "frames",
        "switch", "switches", "lan", "vlan", "csma", "csma/cd", "arp", "crc",
        "error detection", "parity", "hamming", "spanning tree", "ppp", "hdlc"}},
      {"Network layer and Routing",
       {"network layer", "routing", "router", "routers", "routing table", "ospf", "bgp",
        "rip", "ip address", "ipv4", "ipv6", "subnet", "subnetting", "cidr",
        "forwarding", "dijkstra", "distance vector", "link state", "icmp", "nat",
        "autonomous system", "datagram"}},
      {"Transport layer",
       {"transport layer", "tcp", "udp", "port", "ports", "segment", "handshake",
        "three-way handshake", "congestion control", "flow control",
        "sliding window", "retransmission", "acknowledgment", "sequence number",
        "slow start", "socket", "sockets"}},
      {"Application layer & Protocols",
       {"application layer", "http", "https", "dns", "smtp", "ftp", "pop3", "imap",
        "web", "url", "email", "dhcp", "cdn", "peer-to-peer", "p2p",
        "client-server", "cookie", "html"}},
      {"Network security",
       {"security", "encryption", "decryption", "cryptography", "firewall", "vpn",
        "tls", "ssl", "certificate", "authentication", "attack", "malware",
        "public key", "private key", "hash", "signature", "digital signature",
        "ipsec", "denial of service", "ddos", "intrusion"}},
      {"Network management",
       {"network management", "snmp", "mib", "management information base",
        "monitoring", "configuration", "netconf", "syslog", "fault management",
        "sdn", "software-defined", "controller", "openflow", "telemetry"}},
      {"Wireless & Mobile networks",
       {"wireless", "wi-fi", "wifi", "802.11", "cellular", "mobile", "lte", "5g", "4g",
        "handoff", "handover", "base station", "access point", "bluetooth",
        "mobility", "roaming", "csma/ca", "mimo", "ofdm"}},
      {"Performance & QoS",
       {"throughput", "latency", "delay", "jitter", "qos", "quality of service",
        "queue", "queueing", "queuing", "packet loss", "utilization", "scheduling",
        "traffic shaping", "token bucket", "leaky bucket", "diffserv", "intserv",
        "performance"}},
  };
  return t;
}

const std::unordered_set<std::string>& StopWords() {
  static const std::unordered_set<std::string> kWords = {
      "a", "about", "above", "after", "again", "against", "all", "also", "am", "an",
      "and", "any", "are", "as", "at", "be", "because", "been", "before", "being",
      "below", "between", "both", "but", "by", "can", "could", "did", "do", "does",
      "doing", "down", "during", "each", "few", "following", "for", "from", "further",
      "had", "has", "have", "having", "he", "her", "here", "hers", "him", "his", "how",
      "i", "if", "in", "into", "is", "it", "its", "itself", "just", "may", "me", "more",
      "most", "must", "my", "no", "nor", "not", "now", "of", "off", "on", "once",
      "one", "only", "or", "other", "our", "ours", "out", "over", "own", "same",
      "she", "should", "so", "some", "such", "than", "that", "the", "their",
      "theirs", "them", "then", "there", "these", "they", "this", "those", "through",
      "to", "too", "under", "until", "up", "used", "using", "very", "was", "we",
      "were", "what", "when", "where", "which", "while", "who", "whom", "why",
      "will", "with", "would", "you", "your", "yours", "true", "false", "statement",
      "statements", "correct", "incorrect", "following", "best", "describes",
      "primary", "main", "purpose", "function", "role", "typically", "commonly",
  };
  return kWords;
}

// Whole-word occurrences of `phrase` (already tokenized) in `words`.
std::size_t CountPhrase(const std::vector<std::string>& words,
                        const std::vector<std::string>& phrase) {
  if (phrase.empty() || phrase.size() > words.size()) return 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + phrase.size() <= words.size(); ++i) {
    if (std::equal(phrase.begin(), phrase.end(), words.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
  }
  return n;
}

}  // namespace

void Taxonomy::validate() const {
  if (categories.size() != kCategoryCount) {
    throw ValidationError("categories", "expected exactly 9 categories, got " +
                                            std::to_string(categories.size()));
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    const auto& c = categories[i];
    if (text::trim(c.name).empty()) {
      throw ValidationError("categories[" + std::to_string(i) + "].name", "empty");
    }
    if (c.name == kUncategorized) {
      throw ValidationError("categories[" + std::to_string(i) + "].name",
                            "\"uncategorized\" is reserved");
    }
    if (!names.insert(c.name).second) {
      throw ValidationError("categories[" + std::to_string(i) + "].name",
                            "duplicate category \"" + c.name + "\"");
    }
  }
}

const Taxonomy& default_taxonomy() {
  static const Taxonomy kDefault = MakeDefault();
  return kDefault;
}

Taxonomy taxonomy_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("", "taxonomy must be an object");
  if (!j.contains("name") || !j.at("name").is_string()) {
    throw ValidationError("name", "expected string");
  }
  if (!j.contains("categories") || !j.at("categories").is_array()) {
    throw ValidationError("categories", "expected array");
  }
  Taxonomy t;
  t.name = j.at("name").get<std::string>();
  const json& cats = j.at("categories");
  for (std::size_t i = 0; i < cats.size(); ++i) {
    const std::string path = "categories[" + std::to_string(i) + "]";
    const json& c = cats[i];
    if (!c.is_object() || !c.contains("name") || !c.at("name").is_string()) {
      throw ValidationError(path + ".name", "expected string");
    }
    Category cat;
    cat.name = c.at("name").get<std::string>();
    if (c.contains("keywords")) {
      if (!c.at("keywords").is_array()) throw ValidationError(path + ".keywords", "expected array");
      for (const json& k : c.at("keywords")) {
        if (!k.is_string()) throw ValidationError(path + ".keywords", "expected strings");
        cat.keywords.push_back(text::to_lower_ascii(k.get<std::string>()));
      }
    }
    t.categories.push_back(std::move(cat));
  }
  t.validate();
  return t;
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
  return taxonomy_from_json(io::read_json(path));
}

json to_json(const Taxonomy& t) {
  json cats = json::array();
  for (const auto& c : t.categories) cats.push_back({{"name", c.name}, {"keywords", c.keywords}});
  return {{"name", t.name}, {"categories", cats}};
}

std::string classify_subdomain(const McqPair& pair, const Taxonomy& taxonomy) {
  std::string all = pair.question;
  for (const auto& c : pair.choices) {
    all += '\n';
    all += c;
  }
  const auto words = text::words(all);
  std::size_t best = 0;
  const Category* winner = nullptr;
  for (const auto& cat : taxonomy.categories) {
    std::size_t score = 0;
    for (const auto& kw : cat.keywords) score += CountPhrase(words, text::words(kw));
    if (score > best) {
      best = score;
      winner = &cat;
    }
  }
  return winner ? winner->name : std::string(kUncategorized);
}

std::vector<McqPair> tag_subdomains(std::vector<McqPair> pairs, const Taxonomy& taxonomy) {
  for (auto& p : pairs) p.subdomain = classify_subdomain(p, taxonomy);
  return pairs;
}

bool is_stop_word(std::string_view word) {
  return StopWords().contains(std::string(word));
}

StatsReport stats(const std::vector<McqPair>& pairs, const Taxonomy& taxonomy,
                  std::size_t top_k) {
  StatsReport r;
  r.taxonomy = taxonomy.name;
  r.total = pairs.size();
  std::map<std::string, std::size_t> index;
  for (const auto& c : taxonomy.categories) {
    index[c.name] = r.categories.size();
    r.categories.push_back({c.name, 0, 0.0});
  }
  const std::size_t uncategorized = r.categories.size();
  r.categories.push_back({std::string(kUncategorized), 0, 0.0});

  std::map<std::string, std::size_t> terms;
  for (const McqPair& p : pairs) {
    std::string cat = p.subdomain && index.contains(*p.subdomain)
                          ? *p.subdomain
                          : classify_subdomain(p, taxonomy);
    auto it = index.find(cat);
    ++r.categories[it == index.end() ? uncategorized : it->second].count;
    for (const auto& w : text::words(p.question)) {
      if (w.size() < 2 || is_stop_word(w)) continue;
      if (std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; })) continue;
      ++terms[w];
    }
  }
  for (auto& c : r.categories) {
    c.fraction = r.total == 0 ? 0.0
                              : static_cast<double>(c.count) / static_cast<double>(r.total);
  }
  for (const auto& [term, count] : terms) r.top_terms.push_back({term, count});
  std::stable_sort(r.top_terms.begin(), r.top_terms.end(),
                   [](const TermCount& a, const TermCount& b) { return a.count > b.count; });
  if (r.top_terms.size() > top_k) r.top_terms.resize(top_k);
  if (!pairs.empty()) r.bias = position_bias(pairs);
  return r;
}

json to_json(const StatsReport& r) {
  json cats = json::array();
  for (const auto& c : r.categories) {
    cats.push_back({{"name", c.name}, {"count", c.count}, {"fraction", c.fraction}});
  }
  json terms = json::array();
  for (const auto& t : r.top_terms) terms.push_back({{"term", t.term}, {"count", t.count}});
  return {{"taxonomy", r.taxonomy},
          {"total", r.total},
          {"categories", cats},
          {"top_terms", terms},
          {"bias", r.bias ? to_json(*r.bias) : json(nullptr)}};
}

}  // namespace rac::curation
