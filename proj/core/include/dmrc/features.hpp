#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dmrc/knowledge.hpp"
#include "dmrc/solvers.hpp"

namespace dmrc {

struct FeatureBlocks {
  bool bag = true;
  bool rule = true;       // sliding-window + distance scores
  bool position = true;   // matching position
  bool pmi = true;
  bool cr = true;         // relation counts
  bool ce = true;         // embedding similarity
  bool speaker = true;    // false: zero every speaker-focused sub-block
  bool operator==(const FeatureBlocks&) const = default;
};

// Fixed layout; disabled blocks keep their width and are written as zeros so a
// knockout never changes the dimension:
//   bag       3*|V|  per-option counts over the training-option vocabulary
//   rule      12     sw*_{1..3}, sw^s_{1..3}, d*_{1..3}, d^s_{1..3}
//   position  6      p*_{1..3}, p^s_{1..3}
//   pmi       18     {max,min,avg} x {s,*} x option
//   cr        3*|R|  option-major relation counts
//   ce        6      cs*_{1..3}, cs^s_{1..3}
struct FeatureLayout {
  std::vector<std::string> vocabulary;  // sorted
  std::vector<std::string> relations;   // sorted
  FeatureBlocks enabled;

  std::size_t bag_offset() const { return 0; }
  std::size_t bag_size() const { return 3 * vocabulary.size(); }
  std::size_t rule_offset() const { return bag_size(); }
  static constexpr std::size_t rule_size() { return 12; }
  std::size_t position_offset() const { return rule_offset() + rule_size(); }
  static constexpr std::size_t position_size() { return 6; }
  std::size_t pmi_offset() const { return position_offset() + position_size(); }
  static constexpr std::size_t pmi_size() { return 18; }
  std::size_t cr_offset() const { return pmi_offset() + pmi_size(); }
  std::size_t cr_size() const { return 3 * relations.size(); }
  std::size_t ce_offset() const { return cr_offset() + cr_size(); }
  static constexpr std::size_t ce_size() { return 6; }
  std::size_t dim() const { return ce_offset() + ce_size(); }

  bool operator==(const FeatureLayout&) const = default;
};

struct FeatureResources {
  const EmbeddingTable* embeddings = nullptr;
  const RelationTriples* triples = nullptr;
  const CooccurrenceIndex* cooccurrence = nullptr;
  const StopWordList* stops = nullptr;  // nullptr -> bundled list
};

// Tokens appearing at least min_count times across the split's options, sorted.
std::vector<std::string> build_option_vocabulary(const DatasetSplit& train,
                                                 std::size_t min_count = 2);

// Blocks whose resource is missing are switched off (and thus zero-filled).
FeatureLayout make_layout(std::vector<std::string> vocabulary, const FeatureResources& res,
                          FeatureBlocks requested = {});

std::vector<double> extract_features(const QuestionContext& ctx, const FeatureLayout& layout,
                                     const FeatureResources& res);

}  // namespace dmrc
