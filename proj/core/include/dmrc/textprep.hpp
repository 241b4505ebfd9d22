#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dmrc/corpus.hpp"

namespace dmrc {

using Token = std::string;
using TokenSequence = std::vector<Token>;
using WordSet = std::unordered_set<Token>;

inline constexpr const char* kAllSpeakers = "*";

struct SpeakerQuery {
  std::string target{kAllSpeakers};
  bool wildcard() const { return target == kAllSpeakers; }
  bool operator==(const SpeakerQuery&) const = default;
};

class StopWordList {
 public:
  static StopWordList load(const std::string& path);
  // The list shipped with the library (classic 127-word English list).
  static const StopWordList& bundled();

  bool contains(const Token& w) const { return words_.count(w) != 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<Token> words_;
};

// Lowercase word tokens. Letters/digits form tokens; an apostrophe followed by
// letters starts a new token that keeps the apostrophe ("i'm" -> ["i","'m"]);
// ':' or '.' between digits stays inside the token ("10:50", "1.5"); all other
// punctuation separates.
TokenSequence tokenize(std::string_view text);

// Rewrites spelled-out numbers (up to 9,999) to digit tokens and clock times to
// 24-hour "h:mm" tokens. Idempotent; unknown/ambiguous forms pass through.
TokenSequence normalize_text(const TokenSequence& tokens);

// Drops question sentences that the next turn answers with no/nope/nah.
// Turns left without any sentence are removed entirely.
Dialogue negation_filter(const Dialogue& dialogue);

// Picks the speaker tag a question asks about, or "*" when unresolvable.
SpeakerQuery resolve_target_speaker(const std::string& question, const Dialogue& dialogue);

// Normalized tokens of the turns spoken by q.target ("*" = every turn).
TokenSequence speaker_view(const Dialogue& dialogue, const SpeakerQuery& q);

WordSet word_set(const TokenSequence& tokens);

}  // namespace dmrc
