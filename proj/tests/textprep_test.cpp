#include <string>
#include <vector>

#include "dmrc/textprep.hpp"
#include "doctest.h"

using namespace dmrc;

namespace {
TokenSequence toks(std::initializer_list<const char*> xs) {
  return TokenSequence(xs.begin(), xs.end());
}
}  // namespace

TEST_CASE("tokenize basics") {
  CHECK(tokenize("I'm interested in renting!") == toks({"i", "'m", "interested", "in", "renting"}));
  CHECK(tokenize("") == TokenSequence{});
  CHECK(tokenize("Two-bedroom apartment.") == toks({"two", "bedroom", "apartment"}));
  CHECK(tokenize("Hello,   world") == toks({"hello", "world"}));
  CHECK(tokenize("don't") == toks({"don", "'t"}));
}

TEST_CASE("tokenize keeps clock and decimal punctuation inside digit runs") {
  CHECK(tokenize("It's 10:50 PM.") == toks({"it", "'s", "10:50", "pm"}));
  CHECK(tokenize("about 1.5 hours") == toks({"about", "1.5", "hours"}));
  CHECK(tokenize("costs $1,290 total") == toks({"costs", "1290", "total"}));
  CHECK(tokenize("end: start") == toks({"end", "start"}));
  CHECK(tokenize("a.b") == toks({"a", "b"}));
}

TEST_CASE("tokenize unicode apostrophe behaves like ascii") {
  CHECK(tokenize("I\xe2\x80\x99m fine") == toks({"i", "'m", "fine"}));
}

TEST_CASE("tokenize is a fixpoint on its own output") {
  const char* samples[] = {
      "I'm interested in renting!", "It's 10:50 PM.", "Two-bedroom apartment.",
      "costs $1,290 total",         "What's up, Doc?",
  };
  for (const char* s : samples) {
    auto once = tokenize(s);
    std::string glued;
    for (const auto& t : once) {
      if (!glued.empty()) glued += " ";
      glued += t;
    }
    CHECK(tokenize(glued) == once);
  }
}

TEST_CASE("normalize_text number words") {
  CHECK(normalize_text(toks({"twenty", "minutes"})) == toks({"20", "minutes"}));
  CHECK(normalize_text(toks({"twenty", "five"})) == toks({"25"}));
  CHECK(normalize_text(toks({"alpha", "beta"})) == toks({"alpha", "beta"}));
  CHECK(normalize_text(toks({"one", "hundred", "and", "five"})) == toks({"105"}));
  CHECK(normalize_text(toks({"three", "thousand", "two", "hundred"})) == toks({"3200"}));
  CHECK(normalize_text(toks({"zero"})) == toks({"0"}));
}

TEST_CASE("normalize_text clock forms") {
  CHECK(normalize_text(toks({"10:50", "pm"})) == toks({"22:50"}));
  CHECK(normalize_text(toks({"10:50", "am"})) == toks({"10:50"}));
  CHECK(normalize_text(toks({"12:30", "am"})) == toks({"0:30"}));
  CHECK(normalize_text(toks({"12:15", "pm"})) == toks({"12:15"}));
  CHECK(normalize_text(toks({"10", "pm"})) == toks({"22:00"}));
  CHECK(normalize_text(tokenize("ten o'clock")) == toks({"10:00"}));
  CHECK(normalize_text(tokenize("ten o'clock pm")) == toks({"22:00"}));
  CHECK(normalize_text(toks({"ten", "fifty"})) == toks({"10:50"}));
  CHECK(normalize_text(toks({"ten", "fifteen", "pm"})) == toks({"22:15"}));
  CHECK(normalize_text(toks({"seven", "thirty", "five"})) == toks({"7:35"}));
}

TEST_CASE("normalize_text leaves ambiguous or partial forms alone") {
  CHECK(normalize_text(toks({"pm"})) == toks({"pm"}));
  CHECK(normalize_text(tokenize("o'clock")) == tokenize("o'clock"));
  CHECK(normalize_text(toks({"25:10"})) == toks({"25:10"}));
}

TEST_CASE("normalize_text is idempotent") {
  std::vector<TokenSequence> cases = {
      toks({"twenty", "minutes"}),
      toks({"10:50", "pm"}),
      toks({"ten", "fifty"}),
      toks({"seven", "thirty", "five", "pm"}),
      toks({"one", "hundred", "and", "five", "cats"}),
      tokenize("meet at ten o'clock sharp"),
      toks({"alpha", "beta"}),
  };
  for (const auto& c : cases) {
    auto once = normalize_text(c);
    CHECK(normalize_text(once) == once);
  }
}

TEST_CASE("negation_filter drops the questioned sentence") {
  Dialogue d;
  d.id = "d";
  d.turns = {{"M", "Did you watch the match? I did."}, {"W", "No I didn't."}};
  Dialogue out = negation_filter(d);
  REQUIRE(out.turns.size() == 2);
  CHECK(out.turns[0].text == "I did.");
  CHECK(out.turns[1].text == "No I didn't.");
}

TEST_CASE("negation_filter keeps everything without a question") {
  Dialogue d;
  d.id = "d";
  d.turns = {{"M", "I watched the match."}, {"W", "No you didn't."}};
  CHECK(negation_filter(d) == d);
}

TEST_CASE("negation_filter keeps question answered yes") {
  Dialogue d;
  d.id = "d";
  d.turns = {{"M", "Did you watch the match?"}, {"W", "Yes."}};
  CHECK(negation_filter(d) == d);
}

TEST_CASE("negation_filter removes a turn emptied of sentences") {
  Dialogue d;
  d.id = "d";
  d.turns = {{"M", "Coming?"}, {"W", "Nope."}, {"M", "Fine."}};
  Dialogue out = negation_filter(d);
  REQUIRE(out.turns.size() == 2);
  CHECK(out.turns[0].text == "Nope.");
  CHECK(out.turns[1].text == "Fine.");
}

TEST_CASE("negation_filter only looks at the reply's first sentence") {
  Dialogue d;
  d.id = "d";
  d.turns = {{"M", "Coming?"}, {"W", "Sure. No problem."}};
  CHECK(negation_filter(d) == d);
}

TEST_CASE("resolve_target_speaker mention map") {
  Dialogue d;
  d.id = "d";
  d.turns = {{"M", "hello."}, {"W", "hi."}};
  CHECK(resolve_target_speaker("What is the date of the man's birthday?", d).target == "M");
  CHECK(resolve_target_speaker("What will the woman do?", d).target == "W");
  CHECK(resolve_target_speaker("Where does he live?", d).target == "M");
  CHECK(resolve_target_speaker("What did she buy him?", d).target == "*");
  CHECK(resolve_target_speaker("What is the probable relationship between the two speakers?", d)
            .wildcard());
}

TEST_CASE("resolve_target_speaker requires the tag in the dialogue") {
  Dialogue d;
  d.id = "d";
  d.turns = {{"A", "hello."}, {"B", "hi."}};
  CHECK(resolve_target_speaker("What will the man do?", d).target == "*");

  Dialogue two_female;
  two_female.id = "d2";
  two_female.turns = {{"W", "hello."}, {"F", "hi."}};
  // "woman" maps to both W and F -> two distinct present tags -> wildcard
  CHECK(resolve_target_speaker("What will the woman do?", two_female).target == "*");

  Dialogue one_female;
  one_female.id = "d3";
  one_female.turns = {{"M", "hello."}, {"F", "hi."}};
  CHECK(resolve_target_speaker("What will the girl do?", one_female).target == "F");
}

TEST_CASE("speaker_view selects and normalizes") {
  Dialogue d;
  d.id = "d";
  d.turns = {{"M", "I'll take twenty."}, {"W", "See you at 10:50 pm."}, {"M", "Good."}};
  CHECK(speaker_view(d, SpeakerQuery{"M"}) ==
        TokenSequence{"i", "'ll", "take", "20", "good"});
  CHECK(speaker_view(d, SpeakerQuery{"W"}) == TokenSequence{"see", "you", "at", "22:50"});
  CHECK(speaker_view(d, SpeakerQuery{}) ==
        TokenSequence{"i", "'ll", "take", "20", "see", "you", "at", "22:50", "good"});
  CHECK(speaker_view(d, SpeakerQuery{"X"}).empty());
}

TEST_CASE("speaker views partition the wildcard view") {
  Dialogue d;
  d.id = "d";
  d.turns = {{"M", "one two."}, {"W", "three."}, {"M", "four five."}, {"W", "six."}};
  auto all = speaker_view(d, SpeakerQuery{});
  auto m = speaker_view(d, SpeakerQuery{"M"});
  auto w = speaker_view(d, SpeakerQuery{"W"});
  CHECK(m.size() + w.size() == all.size());
  // Order-preserving interleave: M tokens appear in `all` in order, same for W.
  auto is_subsequence = [](const TokenSequence& sub, const TokenSequence& seq) {
    std::size_t i = 0;
    for (const auto& t : seq)
      if (i < sub.size() && sub[i] == t) ++i;
    return i == sub.size();
  };
  CHECK(is_subsequence(m, all));
  CHECK(is_subsequence(w, all));
}

TEST_CASE("stop word list") {
  const auto& stops = StopWordList::bundled();
  CHECK(stops.size() == 127);
  CHECK(stops.contains("the"));
  CHECK(stops.contains("i"));
  CHECK(!stops.contains("train"));
}
