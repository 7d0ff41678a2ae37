#include "fixtures.hpp"

#include <atomic>
#include <string_view>

#include <unistd.h>

namespace rac::testing {
namespace {

constexpr std::string_view kWords[] = {
    "router",   "packet",     "switch",  "latency", "frame",   "TCP",      "UDP",
    "OSPF",     "BGP",        "subnet",  "VLAN",    "Wi-Fi",   "congestion", "window",
    "réseau",   "Übertragung", "网络",     "\"quoted\"", "back\\slash", "it's",  "50%",
    "<tag>",    "{brace}",    "emoji🙂", "tab\there"};

std::string Phrase(SeededRng& rng, std::size_t min_words, std::size_t max_words) {
  const std::size_t n = min_words + rng.below(max_words - min_words + 1);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += rng.below(12) == 0 ? "\n" : " ";
    out += kWords[rng.below(std::size(kWords))];
  }
  return out;
}

constexpr std::string_view kProse[] = {
    "A router forwards packets between networks using a routing table.",
    "OSPF floods link-state advertisements and runs Dijkstra's algorithm.",
    "TCP provides reliable ordered delivery with sequence numbers and acknowledgments.",
    "Congestion control reduces the sending window when loss is detected.",
    "Ethernet frames carry a source and destination MAC address.",
    "A switch learns MAC addresses and forwards frames within a VLAN.",
    "DNS resolves host names into IP addresses for applications.",
    "TLS encrypts application data and authenticates the server with certificates.",
    "SNMP agents expose management information to a network manager.",
    "Wireless stations associate with an access point before sending data.",
    "Queueing delay grows as link utilization approaches capacity.",
    "Fiber links carry light pulses with very low attenuation.",
    "BGP exchanges reachability information between autonomous systems.",
    "A firewall filters traffic according to an ordered rule set.",
    "UDP offers a connectionless datagram service without retransmission.",
    "Quality of service schemes give priority to latency-sensitive flows."};

}  // namespace

McqPair osi_pair() {
  McqPair p;
  p.question = "Which layer of the OSI model is responsible for routing packets between networks?";
  p.choices = {"Transport layer", "Network layer", "Data link layer", "Physical layer"};
  p.correct_label = Label::B;
  p.rephrase = "The question asks which OSI layer moves packets across network boundaries.";
  p.explanations = {
      {Label::A, "The transport layer handles end-to-end delivery between processes, not routing."},
      {Label::B, "The network layer addresses packets and chooses routes between networks."},
      {Label::C, "The data link layer moves frames within a single link."},
      {Label::D, "The physical layer transmits raw bits over the medium."}};
  return with_id(std::move(p));
}

McqPair random_pair(SeededRng& rng, std::size_t serial) {
  McqPair p;
  p.question = "Q" + std::to_string(serial) + " " + Phrase(rng, 2, 12) + "?";
  for (Label l : kLabels) {
    p.choices[index_of(l)] = std::string(1, to_char(l)) + std::to_string(serial) + " " +
                             Phrase(rng, 1, 6);
  }
  p.correct_label = label_at(rng.below(4));
  if (rng.below(2)) {
    p.rephrase = Phrase(rng, 1, 10);
    for (Label l : kLabels) p.explanations[l] = Phrase(rng, 1, 10);
  }
  if (rng.below(2)) p.subdomain = "Transport layer";
  if (rng.below(2)) {
    p.source = Source{"book-" + std::to_string(rng.below(5)),
                      {"Chapter " + Phrase(rng, 1, 2), "Section"},
                      "b" + std::to_string(rng.below(1000))};
  }
  return with_id(std::move(p));
}

std::vector<McqPair> synthetic_pairs(std::size_t n, std::uint64_t seed,
                                     std::optional<Label> label) {
  SeededRng rng(seed);
  std::vector<McqPair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    McqPair p;
    p.question = "Synthetic question " + std::to_string(i) + " about " +
                 std::string(kWords[rng.below(14)]) + "?";
    for (Label l : kLabels) {
      p.choices[index_of(l)] = "option " + std::to_string(i) + "-" + to_char(l);
    }
    p.correct_label = label ? *label : label_at(rng.below(4));
    p.rephrase = "Restating question " + std::to_string(i) + ".";
    for (Label l : kLabels) {
      p.explanations[l] = "Why option " + std::to_string(i) + "-" + to_char(l) +
                          (l == p.correct_label ? " is right." : " is wrong.");
    }
    out.push_back(with_id(std::move(p)));
  }
  return out;
}

std::string synthetic_book(std::size_t sections, std::size_t paragraphs, std::uint64_t seed) {
  SeededRng rng(seed);
  std::string out;
  for (std::size_t s = 0; s < sections; ++s) {
    out += "# Chapter " + std::to_string(s + 1) + "\n\n";
    for (std::size_t p = 0; p < paragraphs; ++p) {
      for (int k = 0; k < 3; ++k) {
        if (k) out += " ";
        out += kProse[rng.below(std::size(kProse))];
      }
      out += " Note " + std::to_string(s) + "." + std::to_string(p) + " applies here.\n\n";
    }
  }
  return out;
}

std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(RAC_TEST_DATA_DIR) / name;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("rac-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace rac::testing
