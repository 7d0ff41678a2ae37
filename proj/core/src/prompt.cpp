#include <regex>

#include "rac/generation.hpp"
#include "rac/text.hpp"

namespace rac::gen {
namespace {

bool LooksLikeFence(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && line[i] == '\\') ++i;
  return line.substr(i).starts_with("<<<");
}

}  // namespace

std::string escape_passage(std::string_view t) {
  std::string out;
  bool first = true;
  for (std::string_view line : text::split_lines(t)) {
    if (!first) out += '\n';
    first = false;
    if (LooksLikeFence(line)) out += '\\';
    out += line;
  }
  return out;
}

std::string unescape_passage(std::string_view t) {
  std::string out;
  bool first = true;
  for (std::string_view line : text::split_lines(t)) {
    if (!first) out += '\n';
    first = false;
    if (line.starts_with("\\") && LooksLikeFence(line)) line.remove_prefix(1);
    out += line;
  }
  return out;
}

std::string build_prompt(const ingest::CorpusSegment& segment,
                         const GenerationConfig& cfg) {
  const std::string n = std::to_string(cfg.questions_per_segment);
  std::string p;
  p += "You are a computer networking instructor writing multiple-choice exam "
       "questions.\n\n";

  p += kTaskHeading;
  p += "\nCreate questions targeting networking knowledge from the passage at "
       "the end of this message. Each question must test understanding of a "
       "networking concept, mechanism or protocol that the passage explains. "
       "Do not ask about the passage itself (page layout, wording, authors).\n\n";

  p += kRequirementsHeading;
  p += "\nNumber of questions: " + n + "\n";
  p += "- Write exactly " + n + " questions.\n";
  p += "- Each question has exactly 4 options, labeled A, B, C and D.\n";
  p += "- Exactly one option is correct; the other three are plausible but wrong.\n";
  p += "- Each option is self-contained: no \"all of the above\", \"none of the "
       "above\" or references to other options.\n";
  p += "- The four options of a question must be distinct from each other and "
       "from the question.\n";
  p += "- Each question is answerable without seeing the passage.\n\n";

  p += kStrategyHeading;
  p += "\nFor every question, write the explanation in three steps.\n";
  p += "Step 1 (rephrase): restate the question in your own words, making clear "
       "what is being asked.\n";
  p += "Step 2 (correct option): explain why the correct option is correct.\n";
  p += "Step 3 (contrast): for each incorrect option, explain why it is wrong in "
       "contrast to the correct option.\n\n";

  p += kFormatHeading;
  p += "\nRespond with exactly one fenced block. Its first line is ```jsonl and "
       "its last line is ```. Between them write one JSON object per line, one "
       "line per question, with exactly these keys:\n";
  p += R"({"question": "...", "choices": {"A": "...", "B": "...", "C": "...", "D": "..."}, "answer": "A", "rephrase": "...", "explanations": {"A": "...", "B": "...", "C": "...", "D": "..."}})";
  p += "\n\"answer\" is the label of the correct option. \"rephrase\" holds the "
       "step 1 text. \"explanations\" holds the step 2 text under the correct "
       "label and the step 3 contrast under each incorrect label. Put nothing "
       "else inside the block.\n\n";

  p += kPassageHeading;
  p += '\n';
  p += kPassageBegin;
  p += '\n';
  p += escape_passage(segment.text);
  p += '\n';
  p += kPassageEnd;
  p += '\n';
  return p;
}

std::string build_retry_prompt(std::string_view prompt, std::string_view error) {
  std::string p(prompt);
  p += "\n## Correction\nYour previous response was rejected: ";
  p += text::single_line(error);
  p += "\nRespond again, following the output format exactly.\n";
  return p;
}

std::optional<std::string> extract_passage(std::string_view prompt) {
  const auto lines = text::split_lines(prompt);
  std::optional<std::size_t> begin, end;
  std::size_t begins = 0, ends = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i] == kPassageBegin) {
      ++begins;
      begin = i;
    } else if (lines[i] == kPassageEnd) {
      ++ends;
      end = i;
    }
  }
  if (begins != 1 || ends != 1 || *end <= *begin) return std::nullopt;
  std::string body;
  for (std::size_t i = *begin + 1; i < *end; ++i) {
    if (i > *begin + 1) body += '\n';
    body += lines[i];
  }
  return unescape_passage(body);
}

std::optional<int> requested_count(std::string_view prompt) {
  static const std::regex kCount(R"((^|\n)Number of questions: (\d+))");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(prompt.begin(), prompt.end(), m, kCount)) {
    return std::nullopt;
  }
  return std::stoi(m[2].str());
}

}  // namespace rac::gen
