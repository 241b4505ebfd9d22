#pragma once

#include <cstdint>
#include <optional>

#include "dmrc/eval.hpp"

namespace dmrc {

// Owns the loaded knowledge resources; pass view() to the drivers. Optional
// members stay empty when the corresponding file was not configured.
struct Resources {
  StopWordList stops;
  std::optional<EmbeddingTable> embeddings;
  std::optional<RelationTriples> triples;
  std::optional<CooccurrenceIndex> cooccurrence;

  Resources() : stops(StopWordList::bundled()) {}

  FeatureResources view() const {
    FeatureResources r;
    r.stops = &stops;
    if (embeddings) r.embeddings = &*embeddings;
    if (triples) r.triples = &*triples;
    if (cooccurrence) r.cooccurrence = &*cooccurrence;
    return r;
  }
};

// Runs a rule method over a split; output order follows split.questions and is
// independent of jobs.
std::vector<PredictionRecord> solve_split(const DatasetSplit& split, Method method,
                                          const FeatureResources& res, std::uint64_t seed,
                                          unsigned jobs = 1, const DswppOptions& opts = {});

BoostedModel train_on_split(const DatasetSplit& train, const FeatureResources& res,
                            const GbdtParams& params, FeatureBlocks blocks = {},
                            std::size_t vocab_min_count = 2, unsigned jobs = 1);

std::vector<PredictionRecord> predict_split(const BoostedModel& model, const DatasetSplit& split,
                                            const FeatureResources& res, unsigned jobs = 1);

}  // namespace dmrc
