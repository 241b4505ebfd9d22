#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmrc/corpus.hpp"
#include "dmrc/features.hpp"
#include "dmrc/gbdt.hpp"
#include "dmrc/solvers.hpp"

namespace dmrc {

struct PredictionRecord {
  std::string dialogue_id;
  int question_ordinal = 0;
  int chosen = 0;
  std::array<double, 3> scores{};
  std::string method;
  bool operator==(const PredictionRecord&) const = default;
};

// CSV: dialogue_id,question_ordinal,chosen_index,score0,score1,score2,method
void write_predictions_csv(const std::string& path, const std::vector<PredictionRecord>& records);
std::vector<PredictionRecord> read_predictions_csv(const std::string& path);

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double accuracy(const std::vector<int>& predicted, const std::vector<int>& gold);

// Gold answers aligned to `records` by (dialogue_id, ordinal); unknown keys throw.
std::vector<int> gold_answers(const DatasetSplit& split, const std::vector<PredictionRecord>& records);

struct CellStats {
  std::size_t correct = 0;
  std::size_t total = 0;
  std::optional<double> accuracy() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(total);
  }
};

// Cells: one per category plus "single"/"multiple"; a question can feed
// several category cells but exactly one scope cell.
std::map<std::string, CellStats> breakdown_by_type(const std::vector<PredictionRecord>& records,
                                                   const DatasetSplit& split,
                                                   const std::vector<QuestionTypeAnnotation>& ann);

struct TurnBucket {
  int lo = 0;  // inclusive
  int hi = 0;  // exclusive
  CellStats stats;
};

// Half-open buckets [edges[k], edges[k+1]); edges must be strictly increasing.
std::vector<TurnBucket> breakdown_by_turns(const std::vector<PredictionRecord>& records,
                                           const DatasetSplit& split,
                                           const std::vector<int>& edges = {0, 10, 49});

// LCS(option, best dialogue window of the option's length) / |option|.
double fuzzy_match_score(const TokenSequence& option, const TokenSequence& dialogue);

struct DistractorReport {
  double confusing_fraction = 0;      // some distractor strictly out-scores the answer
  std::size_t total = 0;
  double all_wrong_confusing_fraction = 0;  // same, among questions every method missed
  std::size_t all_wrong_total = 0;
};

DistractorReport distractor_analysis(const DatasetSplit& split,
                                     const std::vector<std::vector<PredictionRecord>>& methods);

// Modal vote per question; ties go to the earliest-listed method whose vote is
// among the tied candidates. Lists must be aligned (same questions, same order).
std::vector<PredictionRecord> majority_vote(const std::vector<std::vector<PredictionRecord>>& methods);

struct EvalReport {
  std::string method;
  std::string config_fingerprint;
  CellStats overall;
  std::map<std::string, CellStats> by_category;
  std::vector<TurnBucket> by_turns;
};

EvalReport evaluate_predictions(const std::vector<PredictionRecord>& records,
                                const DatasetSplit& split,
                                const std::vector<QuestionTypeAnnotation>* annotations,
                                const std::vector<int>& turn_edges,
                                const std::string& fingerprint);

std::string report_json(const EvalReport& report);
std::string format_report(const EvalReport& report);

struct AblationRow {
  std::string component;  // "full" for the unmodified system
  double dev_accuracy = 0;
  double delta = 0;       // dev_accuracy - full dev_accuracy
};

struct AblationSetup {
  Method method = Method::dswpp;        // dswpp or gbdtpp
  const DatasetSplit* train = nullptr;  // gbdtpp only
  const DatasetSplit* dev = nullptr;
  FeatureResources resources;
  GbdtParams params;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::size_t vocab_min_count = 2;
};

const std::vector<std::string>& ablation_components(Method method);

// components empty -> every component valid for the method. Unknown names throw.
std::vector<AblationRow> run_ablation(const AblationSetup& setup,
                                      const std::vector<std::string>& components = {});

std::string format_ablation(const std::vector<AblationRow>& rows);

}  // namespace dmrc
