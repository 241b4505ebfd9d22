#include "dmrc/textprep.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace dmrc {

namespace {

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0; }
bool is_digit(unsigned char c) { return std::isdigit(c) != 0; }

bool all_digits(const Token& t) {
  if (t.empty()) return false;
  for (unsigned char c : t)
    if (!is_digit(c)) return false;
  return true;
}

}  // namespace

TokenSequence tokenize(std::string_view text) {
  TokenSequence out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char c = text[i];
    // U+2019 often stands in for the ASCII apostrophe.
    if (c == 0xE2 && i + 2 < n && static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        static_cast<unsigned char>(text[i + 2]) == 0x99) {
      c = '\'';
      i += 2;
    }
    if (is_word_char(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
      continue;
    }
    if (c == '\'' && i + 1 < n && std::isalpha(static_cast<unsigned char>(text[i + 1]))) {
      flush();  // contraction suffix: keep the apostrophe with the new token
      cur.push_back('\'');
      continue;
    }
    bool between_digits = !cur.empty() && is_digit(static_cast<unsigned char>(cur.back())) &&
                          i + 1 < n && is_digit(static_cast<unsigned char>(text[i + 1]));
    if ((c == ':' || c == '.') && between_digits) {
      cur.push_back(static_cast<char>(c));
      continue;
    }
    if (c == ',' && between_digits) continue;  // digit grouping: 1,290 -> 1290
    flush();
  }
  flush();
  return out;
}

namespace {

const std::unordered_map<std::string, int>& unit_words() {
  static const std::unordered_map<std::string, int> m = {
      {"zero", 0}, {"one", 1}, {"two", 2},   {"three", 3}, {"four", 4},
      {"five", 5}, {"six", 6}, {"seven", 7}, {"eight", 8}, {"nine", 9}};
  return m;
}

const std::unordered_map<std::string, int>& teen_words() {
  static const std::unordered_map<std::string, int> m = {
      {"ten", 10},      {"eleven", 11},  {"twelve", 12},    {"thirteen", 13},
      {"fourteen", 14}, {"fifteen", 15}, {"sixteen", 16},   {"seventeen", 17},
      {"eighteen", 18}, {"nineteen", 19}};
  return m;
}

const std::unordered_map<std::string, int>& tens_words() {
  static const std::unordered_map<std::string, int> m = {
      {"twenty", 20}, {"thirty", 30}, {"forty", 40},  {"fifty", 50},
      {"sixty", 60},  {"seventy", 70}, {"eighty", 80}, {"ninety", 90}};
  return m;
}

std::optional<int> lookup(const std::unordered_map<std::string, int>& m, const Token& t) {
  auto it = m.find(t);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

// Greedy cardinal parse, capped at 9,999. Returns the value and how many
// tokens it consumed; nullopt when seq[i] does not start a number.
std::optional<std::pair<long, std::size_t>> parse_number_run(const TokenSequence& seq,
                                                             std::size_t i) {
  long total = 0;
  long current = 0;
  bool has_small = false;     // a unit/teen already sits in `current`
  bool has_tens = false;
  bool has_hundred = false;
  bool has_thousand = false;
  std::size_t j = i;
  while (j < seq.size()) {
    const Token& w = seq[j];
    if (auto u = lookup(unit_words(), w)) {
      if (has_small) break;
      current += *u;
      has_small = true;
    } else if (auto t = lookup(teen_words(), w)) {
      if (has_small || has_tens) break;
      current += *t;
      has_small = true;
    } else if (auto t = lookup(tens_words(), w)) {
      if (has_small || has_tens) break;
      current += *t;
      has_tens = true;
    } else if (w == "hundred") {
      if (current < 1 || current > 99 || has_hundred) break;
      current *= 100;
      has_hundred = true;
      has_small = has_tens = false;
    } else if (w == "thousand") {
      if (current < 1 || current > 9 || has_thousand) break;
      total = current * 1000;
      current = 0;
      has_thousand = true;
      has_small = has_tens = has_hundred = false;
    } else if (w == "and") {
      // "one hundred and five"; consumed only when a digit group must follow,
      // so a conjunction between two numbers never merges them.
      if (!(has_hundred || has_thousand) || has_small || has_tens) break;
      if (j + 1 >= seq.size()) break;
      const Token& next = seq[j + 1];
      if (!lookup(unit_words(), next) && !lookup(teen_words(), next) &&
          !lookup(tens_words(), next))
        break;
    } else {
      break;
    }
    ++j;
  }
  if (j == i) return std::nullopt;
  long value = total + current;
  if (value > 9999) return std::nullopt;
  return std::make_pair(value, j - i);
}

// am/pm marker at seq[j], either one token or split as ("a","m").
std::optional<std::pair<bool, std::size_t>> parse_meridiem(const TokenSequence& seq,
                                                           std::size_t j) {
  if (j >= seq.size()) return std::nullopt;
  if (seq[j] == "am") return std::make_pair(false, std::size_t{1});
  if (seq[j] == "pm") return std::make_pair(true, std::size_t{1});
  if ((seq[j] == "a" || seq[j] == "p") && j + 1 < seq.size() && seq[j + 1] == "m")
    return std::make_pair(seq[j] == "p", std::size_t{2});
  return std::nullopt;
}

struct Clock {
  int hour = 0;
  int minute = 0;
};

std::optional<Clock> parse_clock_token(const Token& t) {
  auto colon = t.find(':');
  if (colon == std::string::npos || t.find(':', colon + 1) != std::string::npos)
    return std::nullopt;
  std::string h = t.substr(0, colon), m = t.substr(colon + 1);
  if (h.empty() || h.size() > 2 || m.empty() || m.size() > 2) return std::nullopt;
  if (!all_digits(h) || !all_digits(m)) return std::nullopt;
  Clock c{std::stoi(h), std::stoi(m)};
  if (c.hour > 23 || c.minute > 59) return std::nullopt;
  return c;
}

std::string format_clock(int hour, int minute) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%d:%02d", hour, minute);
  return buf;
}

int to_24h(int hour12, bool pm) {
  int h = hour12 % 12;
  return pm ? h + 12 : h;
}

// Spelled minutes: a teen word, or twenty..fifty optionally followed by a unit.
std::optional<std::pair<int, std::size_t>> parse_spelled_minutes(const TokenSequence& seq,
                                                                 std::size_t j) {
  if (j >= seq.size()) return std::nullopt;
  if (auto t = lookup(teen_words(), seq[j])) return std::make_pair(*t, std::size_t{1});
  if (auto t = lookup(tens_words(), seq[j])) {
    if (*t > 50) return std::nullopt;
    if (j + 1 < seq.size()) {
      if (auto u = lookup(unit_words(), seq[j + 1]); u && *u > 0)
        return std::make_pair(*t + *u, std::size_t{2});
    }
    return std::make_pair(*t, std::size_t{1});
  }
  return std::nullopt;
}

std::optional<int> hour_word(const Token& t) {
  if (auto u = lookup(unit_words(), t); u && *u >= 1) return *u;
  if (auto v = lookup(teen_words(), t); v && *v <= 12) return *v;
  return std::nullopt;
}

std::optional<int> hour_digits(const Token& t) {
  if (!all_digits(t) || t.size() > 2) return std::nullopt;
  int v = std::stoi(t);
  if (v < 1 || v > 12) return std::nullopt;
  return v;
}

}  // namespace

TokenSequence normalize_text(const TokenSequence& tokens) {
  TokenSequence out;
  out.reserve(tokens.size());
  const std::size_t n = tokens.size();
  std::size_t i = 0;
  while (i < n) {
    const Token& t = tokens[i];

    if (auto clock = parse_clock_token(t)) {
      if (auto mer = parse_meridiem(tokens, i + 1); mer && clock->hour >= 1 && clock->hour <= 12) {
        out.push_back(format_clock(to_24h(clock->hour, mer->first), clock->minute));
        i += 1 + mer->second;
      } else {
        out.push_back(t);  // already (or ambiguously) 24-hour: keep the literal
        ++i;
      }
      continue;
    }

    if (auto h = hour_digits(t)) {
      if (auto mer = parse_meridiem(tokens, i + 1)) {
        out.push_back(format_clock(to_24h(*h, mer->first), 0));
        i += 1 + mer->second;
        continue;
      }
    }

    // "<hour> o'clock", hour spelled or digits
    if (i + 2 < n && tokens[i + 1] == "o" && tokens[i + 2] == "'clock") {
      std::optional<int> h = hour_digits(t);
      if (!h) h = hour_word(t);
      if (h) {
        std::size_t consumed = 3;
        bool pm = false, have_mer = false;
        if (auto mer = parse_meridiem(tokens, i + 3)) {
          pm = mer->first;
          have_mer = true;
          consumed += mer->second;
        }
        out.push_back(format_clock(have_mer ? to_24h(*h, pm) : *h, 0));
        i += consumed;
        continue;
      }
    }

    // spelled "<hour> <minutes>", e.g. "ten fifty"
    if (auto h = hour_word(t)) {
      if (auto mins = parse_spelled_minutes(tokens, i + 1)) {
        std::size_t consumed = 1 + mins->second;
        int hour = *h;
        if (auto mer = parse_meridiem(tokens, i + consumed)) {
          hour = to_24h(hour, mer->first);
          consumed += mer->second;
        }
        out.push_back(format_clock(hour, mins->first));
        i += consumed;
        continue;
      }
    }

    if (auto run = parse_number_run(tokens, i)) {
      out.push_back(std::to_string(run->first));
      i += run->second;
      continue;
    }

    out.push_back(t);
    ++i;
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Boundaries: a run of {. ! ?} followed by whitespace (or end of text); the
// delimiters stay with the sentence.
std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    char c = text[i];
    cur.push_back(c);
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == n || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      auto s = trim(cur);
      if (!s.empty()) out.push_back(s);
      cur.clear();
    }
  }
  auto s = trim(cur);
  if (!s.empty()) out.push_back(s);
  return out;
}

bool starts_with_no(const std::string& turn_text) {
  auto sentences = split_sentences(turn_text);
  if (sentences.empty()) return false;
  auto toks = tokenize(sentences.front());
  if (toks.empty()) return false;
  return toks[0] == "no" || toks[0] == "nope" || toks[0] == "nah";
}

}  // namespace

Dialogue negation_filter(const Dialogue& dialogue) {
  Dialogue out;
  out.id = dialogue.id;
  for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
    const Turn& turn = dialogue.turns[i];
    bool next_denies =
        i + 1 < dialogue.turns.size() && starts_with_no(dialogue.turns[i + 1].text);
    std::string kept;
    for (const auto& sentence : split_sentences(turn.text)) {
      if (next_denies && sentence.back() == '?') continue;
      if (!kept.empty()) kept += ' ';
      kept += sentence;
    }
    if (!kept.empty()) out.turns.push_back({turn.speaker, kept});
  }
  return out;
}

namespace {

const WordSet& male_mentions() {
  static const WordSet s = {"man", "boy", "he", "his", "him"};
  return s;
}
const WordSet& female_mentions() {
  static const WordSet s = {"woman", "girl", "she", "her"};
  return s;
}

}  // namespace

SpeakerQuery resolve_target_speaker(const std::string& question, const Dialogue& dialogue) {
  bool male = false, female = false;
  for (const auto& tok : tokenize(question)) {
    male = male || male_mentions().count(tok);
    female = female || female_mentions().count(tok);
  }
  if (male == female) return {};  // neither or both: ambiguous

  std::set<std::string> present;
  for (const auto& turn : dialogue.turns) {
    if (male && turn.speaker == "M") present.insert(turn.speaker);
    if (female && (turn.speaker == "W" || turn.speaker == "F")) present.insert(turn.speaker);
  }
  if (present.size() == 1) return {*present.begin()};
  return {};
}

TokenSequence speaker_view(const Dialogue& dialogue, const SpeakerQuery& q) {
  TokenSequence out;
  for (const auto& turn : dialogue.turns) {
    if (!q.wildcard() && turn.speaker != q.target) continue;
    auto toks = normalize_text(tokenize(turn.text));
    out.insert(out.end(), toks.begin(), toks.end());
  }
  return out;
}

WordSet word_set(const TokenSequence& tokens) {
  return WordSet(tokens.begin(), tokens.end());
}

StopWordList StopWordList::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stop word list: " + path);
  StopWordList list;
  std::string line;
  while (std::getline(in, line)) {
    auto w = trim(line);
    if (!w.empty()) list.words_.insert(w);
  }
  if (list.words_.empty()) throw std::runtime_error("stop word list is empty: " + path);
  return list;
}

const StopWordList& StopWordList::bundled() {
  static const StopWordList list = [] {
#ifdef DMRC_BUNDLED_STOPWORDS
    return load(DMRC_BUNDLED_STOPWORDS);
#else
    throw std::runtime_error("no bundled stop word list configured");
#endif
  }();
  return list;
}

}  // namespace dmrc
