#include "dmrc/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "dmrc/pipeline.hpp"

namespace dmrc {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string key_of(const std::string& dialogue_id, int ordinal) {
  return dialogue_id + "\x1f" + std::to_string(ordinal);
}

constexpr const char* kCsvHeader = "dialogue_id,question_ordinal,chosen_index,score0,score1,score2,method";

}  // namespace

void write_predictions_csv(const std::string& path, const std::vector<PredictionRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw EvalError("cannot write predictions file: " + path);
  out << kCsvHeader << "\n";
  for (const auto& r : records) {
    out << r.dialogue_id << ',' << r.question_ordinal << ',' << r.chosen << ','
        << fmt_double(r.scores[0]) << ',' << fmt_double(r.scores[1]) << ','
        << fmt_double(r.scores[2]) << ',' << r.method << "\n";
  }
  if (!out) throw EvalError("short write to " + path);
}

std::vector<PredictionRecord> read_predictions_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EvalError("cannot open predictions file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw EvalError(path + ": empty predictions file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw EvalError(path + ": unexpected header: " + line);
  std::vector<PredictionRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    fields.push_back(cur);
    if (fields.size() != 7)
      throw EvalError(path + ":" + std::to_string(lineno) + ": expected 7 fields");
    PredictionRecord r;
    r.dialogue_id = fields[0];
    try {
      r.question_ordinal = std::stoi(fields[1]);
      r.chosen = std::stoi(fields[2]);
      for (int i = 0; i < 3; ++i) r.scores[i] = std::stod(fields[3 + i]);
    } catch (const std::exception&) {
      throw EvalError(path + ":" + std::to_string(lineno) + ": malformed numeric field");
    }
    if (r.chosen < 0 || r.chosen > 2)
      throw EvalError(path + ":" + std::to_string(lineno) + ": chosen index out of range");
    r.method = fields[6];
    out.push_back(std::move(r));
  }
  return out;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& gold) {
  if (predicted.size() != gold.size())
    throw EvalError("prediction/gold size mismatch: " + std::to_string(predicted.size()) +
                    " vs " + std::to_string(gold.size()));
  if (predicted.empty()) throw EvalError("cannot compute accuracy of an empty prediction list");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == gold[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

namespace {

std::unordered_map<std::string, const QuestionInstance*> question_index(const DatasetSplit& split) {
  std::unordered_map<std::string, const QuestionInstance*> map;
  for (const auto& q : split.questions) map.emplace(key_of(q.dialogue_id, q.ordinal), &q);
  return map;
}

}  // namespace

std::vector<int> gold_answers(const DatasetSplit& split,
                              const std::vector<PredictionRecord>& records) {
  auto index = question_index(split);
  std::vector<int> gold;
  gold.reserve(records.size());
  for (const auto& r : records) {
    auto it = index.find(key_of(r.dialogue_id, r.question_ordinal));
    if (it == index.end())
      throw EvalError("prediction references unknown question: " + r.dialogue_id + " #" +
                      std::to_string(r.question_ordinal));
    gold.push_back(it->second->answer_index);
  }
  return gold;
}

std::map<std::string, CellStats> breakdown_by_type(const std::vector<PredictionRecord>& records,
                                                   const DatasetSplit& split,
                                                   const std::vector<QuestionTypeAnnotation>& ann) {
  auto index = question_index(split);
  std::unordered_map<std::string, const QuestionTypeAnnotation*> by_key;
  for (const auto& a : ann) by_key.emplace(key_of(a.dialogue_id, a.question_ordinal), &a);

  std::map<std::string, CellStats> cells;
  for (const auto& r : records) {
    auto qit = index.find(key_of(r.dialogue_id, r.question_ordinal));
    if (qit == index.end())
      throw EvalError("prediction references unknown question: " + r.dialogue_id + " #" +
                      std::to_string(r.question_ordinal));
    auto ait = by_key.find(key_of(r.dialogue_id, r.question_ordinal));
    if (ait == by_key.end()) continue;  // not every question is annotated
    const bool correct = r.chosen == qit->second->answer_index;
    for (const auto& cat : ait->second->categories) {
      auto& cell = cells[cat];
      ++cell.total;
      if (correct) ++cell.correct;
    }
    auto& scope_cell =
        cells[ait->second->scope == SentenceScope::single ? "single" : "multiple"];
    ++scope_cell.total;
    if (correct) ++scope_cell.correct;
  }
  return cells;
}

std::vector<TurnBucket> breakdown_by_turns(const std::vector<PredictionRecord>& records,
                                           const DatasetSplit& split,
                                           const std::vector<int>& edges) {
  if (edges.size() < 2) throw EvalError("turn buckets need at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i] <= edges[i - 1]) throw EvalError("turn bucket edges must be strictly increasing");

  std::unordered_map<std::string, int> turns;
  for (const auto& d : split.dialogues) turns[d.id] = static_cast<int>(d.turns.size());
  auto index = question_index(split);

  std::vector<TurnBucket> buckets;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    buckets.push_back({edges[i], edges[i + 1], {}});

  for (const auto& r : records) {
    auto qit = index.find(key_of(r.dialogue_id, r.question_ordinal));
    if (qit == index.end())
      throw EvalError("prediction references unknown question: " + r.dialogue_id + " #" +
                      std::to_string(r.question_ordinal));
    auto tit = turns.find(r.dialogue_id);
    if (tit == turns.end()) continue;
    for (auto& b : buckets) {
      if (tit->second >= b.lo && tit->second < b.hi) {
        ++b.stats.total;
        if (r.chosen == qit->second->answer_index) ++b.stats.correct;
        break;
      }
    }
  }
  return buckets;
}

double fuzzy_match_score(const TokenSequence& option, const TokenSequence& dialogue) {
  const std::size_t m = option.size();
  if (m == 0) return 0.0;

  auto lcs = [&](std::size_t begin, std::size_t end) {
    const std::size_t w = end - begin;
    std::vector<std::size_t> prev(w + 1, 0), cur(w + 1, 0);
    for (std::size_t i = 1; i <= m; ++i) {
      for (std::size_t j = 1; j <= w; ++j) {
        if (option[i - 1] == dialogue[begin + j - 1])
          cur[j] = prev[j - 1] + 1;
        else
          cur[j] = std::max(prev[j], cur[j - 1]);
      }
      std::swap(prev, cur);
    }
    return prev[w];
  };

  std::size_t best = 0;
  if (dialogue.size() <= m) {
    best = lcs(0, dialogue.size());
  } else {
    for (std::size_t j = 0; j + m <= dialogue.size(); ++j)
      best = std::max(best, lcs(j, j + m));
  }
  return static_cast<double>(best) / static_cast<double>(m);
}

DistractorReport distractor_analysis(const DatasetSplit& split,
                                     const std::vector<std::vector<PredictionRecord>>& methods) {
  std::unordered_map<std::string, const Dialogue*> dialogues;
  for (const auto& d : split.dialogues) dialogues.emplace(d.id, &d);

  // wrong-by-every-method question keys
  std::unordered_map<std::string, std::size_t> wrong_counts;
  for (const auto& method : methods) {
    auto gold = gold_answers(split, method);
    for (std::size_t i = 0; i < method.size(); ++i)
      if (method[i].chosen != gold[i])
        ++wrong_counts[key_of(method[i].dialogue_id, method[i].question_ordinal)];
  }

  DistractorReport report;
  for (const auto& q : split.questions) {
    auto dit = dialogues.find(q.dialogue_id);
    if (dit == dialogues.end()) continue;
    const TokenSequence dialogue_tokens = speaker_view(*dit->second, {});
    std::array<double, 3> fuzzy{};
    for (int i = 0; i < 3; ++i)
      fuzzy[i] = fuzzy_match_score(normalize_text(tokenize(q.options[i])), dialogue_tokens);
    bool confusing = false;
    for (int i = 0; i < 3; ++i)
      if (i != q.answer_index && fuzzy[i] > fuzzy[q.answer_index]) confusing = true;

    ++report.total;
    if (confusing) report.confusing_fraction += 1;
    auto wit = wrong_counts.find(key_of(q.dialogue_id, q.ordinal));
    if (!methods.empty() && wit != wrong_counts.end() && wit->second == methods.size()) {
      ++report.all_wrong_total;
      if (confusing) report.all_wrong_confusing_fraction += 1;
    }
  }
  if (report.total > 0) report.confusing_fraction /= static_cast<double>(report.total);
  if (report.all_wrong_total > 0)
    report.all_wrong_confusing_fraction /= static_cast<double>(report.all_wrong_total);
  return report;
}

std::vector<PredictionRecord> majority_vote(
    const std::vector<std::vector<PredictionRecord>>& methods) {
  if (methods.size() < 2) throw EvalError("majority vote needs at least two prediction lists");
  const std::size_t n = methods[0].size();
  for (const auto& m : methods)
    if (m.size() != n) throw EvalError("majority vote inputs have different lengths");

  std::vector<PredictionRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& m : methods)
      if (m[i].dialogue_id != methods[0][i].dialogue_id ||
          m[i].question_ordinal != methods[0][i].question_ordinal)
        throw EvalError("majority vote inputs are not aligned at row " + std::to_string(i));
    std::array<double, 3> votes{};
    for (const auto& m : methods) ++votes[m[i].chosen];
    const double top = std::max({votes[0], votes[1], votes[2]});
    int chosen = -1;
    for (const auto& m : methods) {
      if (votes[m[i].chosen] == top) {
        chosen = m[i].chosen;  // earliest method voting for a modal option
        break;
      }
    }
    PredictionRecord r;
    r.dialogue_id = methods[0][i].dialogue_id;
    r.question_ordinal = methods[0][i].question_ordinal;
    r.chosen = chosen;
    r.scores = votes;
    r.method = "ensemble";
    out.push_back(std::move(r));
  }
  return out;
}

EvalReport evaluate_predictions(const std::vector<PredictionRecord>& records,
                                const DatasetSplit& split,
                                const std::vector<QuestionTypeAnnotation>* annotations,
                                const std::vector<int>& turn_edges,
                                const std::string& fingerprint) {
  if (records.empty()) throw EvalError("no predictions to evaluate");
  EvalReport report;
  report.method = records[0].method;
  for (const auto& r : records)
    if (r.method != report.method) {
      report.method = "mixed";
      break;
    }
  report.config_fingerprint = fingerprint;
  auto gold = gold_answers(split, records);
  report.overall.total = records.size();
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].chosen == gold[i]) ++report.overall.correct;
  if (annotations) report.by_category = breakdown_by_type(records, split, *annotations);
  report.by_turns = breakdown_by_turns(records, split, turn_edges);
  return report;
}

namespace {

json cell_json(const CellStats& c) {
  json j{{"correct", c.correct}, {"total", c.total}};
  if (auto acc = c.accuracy())
    j["accuracy"] = *acc;
  else
    j["accuracy"] = nullptr;
  return j;
}

}  // namespace

std::string report_json(const EvalReport& report) {
  json j;
  j["method"] = report.method;
  j["config_fingerprint"] = report.config_fingerprint;
  j["overall"] = cell_json(report.overall);
  json cats = json::object();
  for (const auto& [name, cell] : report.by_category) cats[name] = cell_json(cell);
  j["by_category"] = cats;
  json buckets = json::array();
  for (const auto& b : report.by_turns) {
    json bj = cell_json(b.stats);
    bj["turns_lo"] = b.lo;
    bj["turns_hi"] = b.hi;
    buckets.push_back(bj);
  }
  j["by_turn_bucket"] = buckets;
  return j.dump(2);
}

namespace {

std::string cell_text(const CellStats& c) {
  if (auto acc = c.accuracy()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%6.2f%%  (%zu/%zu)", *acc * 100.0, c.correct, c.total);
    return buf;
  }
  return "   n/a   (no questions)";
}

}  // namespace

std::string format_report(const EvalReport& report) {
  std::ostringstream os;
  os << "method: " << report.method << "\n";
  os << "config: " << report.config_fingerprint << "\n";
  os << "overall:        " << cell_text(report.overall) << "\n";
  for (const auto& [name, cell] : report.by_category)
    os << "  " << name << std::string(name.size() < 14 ? 14 - name.size() : 1, ' ')
       << cell_text(cell) << "\n";
  for (const auto& b : report.by_turns)
    os << "  turns [" << b.lo << "," << b.hi << ")     " << cell_text(b.stats) << "\n";
  return os.str();
}

const std::vector<std::string>& ablation_components(Method method) {
  static const std::vector<std::string> dswpp = {"dialogue-structure", "ce"};
  static const std::vector<std::string> gbdtpp = {
      "bag-of-words", "rule-features", "matching-position", "dialogue-structure",
      "pmi",          "cr",            "ce",                "pmi-cr-ce"};
  static const std::vector<std::string> none;
  switch (method) {
    case Method::dswpp: return dswpp;
    case Method::gbdtpp: return gbdtpp;
    default: return none;
  }
}

namespace {

double dev_accuracy(const std::vector<PredictionRecord>& records, const DatasetSplit& dev) {
  auto gold = gold_answers(dev, records);
  std::vector<int> chosen;
  chosen.reserve(records.size());
  for (const auto& r : records) chosen.push_back(r.chosen);
  return accuracy(chosen, gold);
}

FeatureBlocks blocks_without(const std::string& component) {
  FeatureBlocks b;
  if (component == "bag-of-words") b.bag = false;
  else if (component == "rule-features") b.rule = false;
  else if (component == "matching-position") b.position = false;
  else if (component == "dialogue-structure") b.speaker = false;
  else if (component == "pmi") b.pmi = false;
  else if (component == "cr") b.cr = false;
  else if (component == "ce") b.ce = false;
  else if (component == "pmi-cr-ce") b.pmi = b.cr = b.ce = false;
  return b;
}

}  // namespace

std::vector<AblationRow> run_ablation(const AblationSetup& setup,
                                      const std::vector<std::string>& components) {
  if (setup.method != Method::dswpp && setup.method != Method::gbdtpp)
    throw EvalError("ablation supports only dswpp and gbdtpp");
  if (!setup.dev) throw EvalError("ablation needs a dev split");
  if (setup.method == Method::gbdtpp && !setup.train)
    throw EvalError("gbdtpp ablation needs a training split");

  const auto& valid = ablation_components(setup.method);
  std::vector<std::string> todo = components.empty() ? valid : components;
  for (const auto& c : todo) {
    if (std::find(valid.begin(), valid.end(), c) == valid.end()) {
      std::string names;
      for (const auto& v : valid) names += (names.empty() ? "" : ", ") + v;
      throw EvalError("unknown ablation component '" + c + "' (valid: " + names + ")");
    }
  }

  const FeatureResources& res = setup.resources;

  std::vector<AblationRow> rows;
  auto evaluate_variant = [&](const std::string& component) {
    if (setup.method == Method::dswpp) {
      DswppOptions opts;
      if (component == "dialogue-structure") opts.use_dialogue_structure = false;
      if (component == "ce") opts.use_ce = false;
      auto records = solve_split(*setup.dev, Method::dswpp, res, setup.seed, setup.jobs, opts);
      return dev_accuracy(records, *setup.dev);
    }
    FeatureBlocks blocks = component == "full" ? FeatureBlocks{} : blocks_without(component);
    auto model = train_on_split(*setup.train, res, setup.params, blocks, setup.vocab_min_count,
                                setup.jobs);
    auto records = predict_split(model, *setup.dev, res, setup.jobs);
    return dev_accuracy(records, *setup.dev);
  };

  const double full = evaluate_variant("full");
  rows.push_back({"full", full, 0.0});
  for (const auto& component : todo) {
    const double acc = evaluate_variant(component);
    rows.push_back({component, acc, acc - full});
  }
  return rows;
}

std::string format_ablation(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "configuration            dev accuracy    delta\n";
  for (const auto& r : rows) {
    char buf[96];
    std::string label = r.component == "full" ? "full" : "- " + r.component;
    std::snprintf(buf, sizeof buf, "%-24s %9.2f%%   %+6.2f\n", label.c_str(),
                  r.dev_accuracy * 100.0, r.delta * 100.0);
    os << buf;
  }
  return os.str();
}

}  // namespace dmrc
