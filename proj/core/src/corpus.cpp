#include "dmrc/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "dmrc/textprep.hpp"

namespace dmrc {

using nlohmann::json;

const std::set<std::string>& known_categories() {
  static const std::set<std::string> cats = {"matching",   "reasoning", "summary",
                                             "logic",      "arithmetic", "commonsense"};
  return cats;
}

const Dialogue* DatasetSplit::find_dialogue(const std::string& id) const {
  for (const auto& d : dialogues)
    if (d.id == id) return &d;
  return nullptr;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open dataset file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// line:column for a byte offset, for parse error messages.
std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Turn parse_turn(const std::string& raw, const std::string& dialogue_id) {
  auto sep = raw.find(": ");
  if (sep == std::string::npos) {
    std::cerr << "warning: turn without speaker tag in dialogue " << dialogue_id << "\n";
    return {"UNK", raw};
  }
  return {raw.substr(0, sep), raw.substr(sep + 2)};
}

}  // namespace

DatasetSplit parse_dataset_text(const std::string& json_text, const std::string& split_name,
                                const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(json_text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                     e.what());
  }
  if (!root.is_array())
    throw ParseError(origin + ": top-level value must be an array of dialogue entries");

  DatasetSplit split;
  split.name = split_name;
  for (const auto& entry : root) {
    if (!entry.is_array() || entry.size() != 3)
      throw ParseError(origin + ": each entry must be [turns, questions, id]");
    if (!entry[2].is_string())
      throw ParseError(origin + ": dialogue id must be a string");
    Dialogue d;
    d.id = entry[2].get<std::string>();
    if (!entry[0].is_array())
      throw ParseError(origin + ": turns must be an array in dialogue " + d.id);
    for (const auto& t : entry[0]) {
      if (!t.is_string()) throw ParseError(origin + ": turn must be a string in dialogue " + d.id);
      d.turns.push_back(parse_turn(t.get<std::string>(), d.id));
    }
    if (!entry[1].is_array())
      throw ParseError(origin + ": questions must be an array in dialogue " + d.id);
    int ordinal = 0;
    for (const auto& qj : entry[1]) {
      QuestionInstance q;
      q.dialogue_id = d.id;
      q.ordinal = ordinal++;
      if (!qj.is_object() || !qj.contains("question") || !qj.contains("choice") ||
          !qj.contains("answer"))
        throw ParseError(origin + ": question needs question/choice/answer in dialogue " + d.id);
      q.question = qj["question"].get<std::string>();
      const auto& choice = qj["choice"];
      if (!choice.is_array() || choice.size() != 3)
        throw ValidationError("dialogue " + d.id + ": expected exactly 3 options, got " +
                              std::to_string(choice.size()));
      for (std::size_t i = 0; i < 3; ++i) q.options[i] = choice[i].get<std::string>();
      auto answer = qj["answer"].get<std::string>();
      auto hit = std::find(q.options.begin(), q.options.end(), answer);
      if (hit == q.options.end())
        throw ValidationError("dialogue " + d.id + ": answer string not among the options: \"" +
                              answer + "\"");
      q.answer_index = static_cast<int>(hit - q.options.begin());
      split.questions.push_back(std::move(q));
    }
    split.dialogues.push_back(std::move(d));
  }
  return split;
}

DatasetSplit parse_dataset(const std::string& path, const std::string& split_name) {
  return parse_dataset_text(read_file(path), split_name, path);
}

std::string serialize_dataset(const DatasetSplit& split) {
  json root = json::array();
  std::unordered_map<std::string, std::vector<const QuestionInstance*>> by_dialogue;
  for (const auto& q : split.questions) by_dialogue[q.dialogue_id].push_back(&q);
  for (const auto& d : split.dialogues) {
    json turns = json::array();
    for (const auto& t : d.turns) turns.push_back(t.speaker + ": " + t.text);
    json questions = json::array();
    for (const QuestionInstance* q : by_dialogue[d.id]) {
      questions.push_back({{"question", q->question},
                           {"choice", {q->options[0], q->options[1], q->options[2]}},
                           {"answer", q->options[q->answer_index]}});
    }
    root.push_back({turns, questions, d.id});
  }
  return root.dump(2);
}

DatasetSplit merge_splits(const std::vector<const DatasetSplit*>& splits, const std::string& name) {
  DatasetSplit out;
  out.name = name;
  for (const auto* s : splits) {
    out.dialogues.insert(out.dialogues.end(), s->dialogues.begin(), s->dialogues.end());
    out.questions.insert(out.questions.end(), s->questions.begin(), s->questions.end());
  }
  return out;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::empty_dialogue: return "empty-dialogue";
    case ViolationKind::too_many_turns: return "too-many-turns";
    case ViolationKind::empty_speaker: return "empty-speaker";
    case ViolationKind::empty_turn_text: return "empty-turn-text";
    case ViolationKind::answer_out_of_range: return "answer-out-of-range";
    case ViolationKind::dangling_dialogue_ref: return "dangling-dialogue-ref";
  }
  return "unknown";
}

std::vector<Violation> validate_dataset(const DatasetSplit& split, const ValidateOptions& opts) {
  std::vector<Violation> out;
  std::unordered_set<std::string> ids;
  for (const auto& d : split.dialogues) {
    ids.insert(d.id);
    if (d.turns.empty()) out.push_back({ViolationKind::empty_dialogue, d.id, "dialogue has no turns"});
    if (opts.max_turns_per_dialogue > 0 &&
        d.turns.size() > static_cast<std::size_t>(opts.max_turns_per_dialogue))
      out.push_back({ViolationKind::too_many_turns, d.id,
                     std::to_string(d.turns.size()) + " turns exceeds max " +
                         std::to_string(opts.max_turns_per_dialogue)});
    for (std::size_t i = 0; i < d.turns.size(); ++i) {
      if (d.turns[i].speaker.empty())
        out.push_back({ViolationKind::empty_speaker, d.id, "turn " + std::to_string(i)});
      if (d.turns[i].text.empty())
        out.push_back({ViolationKind::empty_turn_text, d.id, "turn " + std::to_string(i)});
    }
  }
  for (const auto& q : split.questions) {
    if (q.answer_index < 0 || q.answer_index > 2) {
      out.push_back({ViolationKind::answer_out_of_range, q.dialogue_id,
                     "question " + std::to_string(q.ordinal) + ": answer index " +
                         std::to_string(q.answer_index)});
    }
    if (!ids.count(q.dialogue_id))
      out.push_back({ViolationKind::dangling_dialogue_ref, q.dialogue_id,
                     "question " + std::to_string(q.ordinal) + " references a missing dialogue"});
  }
  return out;
}

DatasetStats dataset_stats(const DatasetSplit& split) {
  DatasetStats s;
  s.dialogues = split.dialogues.size();
  s.questions = split.questions.size();
  std::unordered_set<std::string> vocab;
  std::size_t dialogue_token_sum = 0;
  std::size_t speaker_sum = 0;
  for (const auto& d : split.dialogues) {
    s.turns += d.turns.size();
    s.max_turns = std::max(s.max_turns, d.turns.size());
    std::unordered_set<std::string> speakers;
    std::size_t dialogue_tokens = 0;
    for (const auto& t : d.turns) {
      speakers.insert(t.speaker);
      auto toks = tokenize(t.text);
      dialogue_tokens += toks.size();
      vocab.insert(toks.begin(), toks.end());
    }
    speaker_sum += speakers.size();
    s.max_speakers = std::max(s.max_speakers, speakers.size());
    dialogue_token_sum += dialogue_tokens;
    s.max_dialogue_tokens = std::max(s.max_dialogue_tokens, dialogue_tokens);
  }
  std::unordered_map<std::string, std::size_t> questions_per;
  std::size_t q_token_sum = 0, o_token_sum = 0, o_count = 0;
  for (const auto& q : split.questions) {
    ++questions_per[q.dialogue_id];
    auto qt = tokenize(q.question);
    q_token_sum += qt.size();
    s.max_question_tokens = std::max(s.max_question_tokens, qt.size());
    vocab.insert(qt.begin(), qt.end());
    for (const auto& opt : q.options) {
      auto ot = tokenize(opt);
      o_token_sum += ot.size();
      ++o_count;
      s.max_option_tokens = std::max(s.max_option_tokens, ot.size());
      vocab.insert(ot.begin(), ot.end());
    }
  }
  for (const auto& [id, count] : questions_per)
    s.max_questions_per_dialogue = std::max(s.max_questions_per_dialogue, count);
  if (s.dialogues > 0) {
    s.avg_turns = static_cast<double>(s.turns) / s.dialogues;
    s.avg_questions_per_dialogue = static_cast<double>(s.questions) / s.dialogues;
    s.avg_speakers = static_cast<double>(speaker_sum) / s.dialogues;
    s.avg_dialogue_tokens = static_cast<double>(dialogue_token_sum) / s.dialogues;
  }
  if (s.questions > 0) s.avg_question_tokens = static_cast<double>(q_token_sum) / s.questions;
  if (o_count > 0) s.avg_option_tokens = static_cast<double>(o_token_sum) / o_count;
  s.vocabulary = vocab.size();
  return s;
}

std::string format_stats(const DatasetStats& s, const std::string& label) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << label << "\n"
     << "  dialogues:              " << s.dialogues << "\n"
     << "  questions:              " << s.questions << "\n"
     << "  turns:                  " << s.turns << "\n"
     << "  turns/dialogue:         avg " << s.avg_turns << ", max " << s.max_turns << "\n"
     << "  questions/dialogue:     avg " << s.avg_questions_per_dialogue << ", max "
     << s.max_questions_per_dialogue << "\n"
     << "  speakers/dialogue:      avg " << s.avg_speakers << ", max " << s.max_speakers << "\n"
     << "  question length:        avg " << s.avg_question_tokens << ", max "
     << s.max_question_tokens << "\n"
     << "  option length:          avg " << s.avg_option_tokens << ", max " << s.max_option_tokens
     << "\n"
     << "  dialogue length:        avg " << s.avg_dialogue_tokens << ", max "
     << s.max_dialogue_tokens << "\n"
     << "  vocabulary:             " << s.vocabulary << "\n";
  return os.str();
}

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<QuestionTypeAnnotation> load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open annotation file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty annotation file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "dialogue_id,question_ordinal,categories,sentence_scope")
    throw ParseError(path + ": unexpected header: " + line);
  std::vector<QuestionTypeAnnotation> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_on(line, ',');
    if (fields.size() != 4)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 4 fields");
    QuestionTypeAnnotation a;
    a.dialogue_id = fields[0];
    try {
      a.question_ordinal = std::stoi(fields[1]);
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad ordinal: " + fields[1]);
    }
    for (const auto& cat : split_on(fields[2], '|')) {
      if (cat.empty()) continue;
      if (!known_categories().count(cat))
        throw ParseError(path + ":" + std::to_string(lineno) + ": unknown category: " + cat);
      a.categories.insert(cat);
    }
    if (a.categories.empty())
      throw ParseError(path + ":" + std::to_string(lineno) + ": no categories");
    // every non-matching subtype is a kind of reasoning
    for (const char* sub : {"summary", "logic", "arithmetic", "commonsense"})
      if (a.categories.count(sub)) a.categories.insert("reasoning");
    if (fields[3] == "single") {
      a.scope = SentenceScope::single;
    } else if (fields[3] == "multiple") {
      a.scope = SentenceScope::multiple;
    } else {
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad sentence_scope: " + fields[3]);
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace dmrc
