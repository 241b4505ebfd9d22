#pragma once

#include <array>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmrc {

struct Turn {
  std::string speaker;  // "M", "W", "F", ... ; "UNK" when the raw line had no tag
  std::string text;
  bool operator==(const Turn&) const = default;
};

struct Dialogue {
  std::string id;
  std::vector<Turn> turns;
  bool operator==(const Dialogue&) const = default;
};

struct QuestionInstance {
  std::string dialogue_id;
  int ordinal = 0;  // 0-based position within the dialogue's question list
  std::string question;
  std::array<std::string, 3> options;
  int answer_index = 0;
  bool operator==(const QuestionInstance&) const = default;
};

enum class SentenceScope { single, multiple };

struct QuestionTypeAnnotation {
  std::string dialogue_id;
  int question_ordinal = 0;
  std::set<std::string> categories;  // subset of known_categories(); never empty
  SentenceScope scope = SentenceScope::single;
  bool operator==(const QuestionTypeAnnotation&) const = default;
};

const std::set<std::string>& known_categories();

struct DatasetSplit {
  std::string name;  // "train" | "dev" | "test" | arbitrary
  std::vector<Dialogue> dialogues;
  std::vector<QuestionInstance> questions;
  bool operator==(const DatasetSplit&) const = default;

  const Dialogue* find_dialogue(const std::string& id) const;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

DatasetSplit parse_dataset(const std::string& path, const std::string& split_name);
DatasetSplit parse_dataset_text(const std::string& json_text, const std::string& split_name,
                                const std::string& origin = "<string>");
std::string serialize_dataset(const DatasetSplit& split);

DatasetSplit merge_splits(const std::vector<const DatasetSplit*>& splits, const std::string& name);

// Option-count and answer-membership problems surface as parse errors; the
// QuestionInstance type cannot represent them.
enum class ViolationKind {
  empty_dialogue,
  too_many_turns,
  empty_speaker,
  empty_turn_text,
  answer_out_of_range,
  dangling_dialogue_ref,
};
const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string dialogue_id;
  std::string detail;
};

struct ValidateOptions {
  int max_turns_per_dialogue = 48;
};

// Empty result iff every structural invariant holds.
std::vector<Violation> validate_dataset(const DatasetSplit& split, const ValidateOptions& opts = {});

struct DatasetStats {
  std::size_t dialogues = 0;
  std::size_t questions = 0;
  std::size_t turns = 0;
  double avg_turns = 0;
  std::size_t max_turns = 0;
  double avg_questions_per_dialogue = 0;
  std::size_t max_questions_per_dialogue = 0;
  double avg_speakers = 0;
  std::size_t max_speakers = 0;
  double avg_question_tokens = 0;
  std::size_t max_question_tokens = 0;
  double avg_option_tokens = 0;
  std::size_t max_option_tokens = 0;
  double avg_dialogue_tokens = 0;
  std::size_t max_dialogue_tokens = 0;
  std::size_t vocabulary = 0;  // distinct tokens over turns + questions + options
};

DatasetStats dataset_stats(const DatasetSplit& split);
std::string format_stats(const DatasetStats& s, const std::string& label);

// Sidecar CSV: dialogue_id,question_ordinal,categories,sentence_scope
// categories are |-separated; any of summary/logic/arithmetic/commonsense implies reasoning.
std::vector<QuestionTypeAnnotation> load_annotations(const std::string& path);

}  // namespace dmrc
