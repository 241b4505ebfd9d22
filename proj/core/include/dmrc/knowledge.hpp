#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dmrc/textprep.hpp"

namespace dmrc {

class EmbeddingTable {
 public:
  // Text format: one "token v1 .. vd" row per line, optional "N d" header row.
  // Duplicate tokens: last row wins (warning to stderr). Mixed dims: error.
  static EmbeddingTable load(const std::string& path);

  void insert(const Token& token, std::vector<float> vec);
  const std::vector<float>* find(const Token& token) const;
  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return rows_.size(); }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<Token, std::vector<float>> rows_;
};

// Max over context windows of cosine between mean option embedding and mean
// window embedding. Unknown tokens contribute zero vectors; an all-zero option
// mean or a too-short context gives 0. Result clamped to [-1, 1].
double window_similarity(const TokenSequence& option, const TokenSequence& context,
                         const EmbeddingTable& table);

// (cs over the target-speaker view + cs over the whole dialogue) / 2.
double similarity_blend(const TokenSequence& option, const Dialogue& dialogue,
                        const SpeakerQuery& q, const EmbeddingTable& table);

class RelationTriples {
 public:
  // TSV rows: head \t relation \t tail (lowercased, deduplicated).
  static RelationTriples load(const std::string& path);

  void add(const std::string& head, const std::string& relation, const std::string& tail);
  const std::vector<std::string>& relations() const;  // sorted distinct labels
  std::size_t size() const { return count_; }

  // counts[j] = #triples (w1, relations()[j], w2), w1 in option, w2 in dialogue.
  std::vector<long long> relation_counts(const WordSet& option_words,
                                         const WordSet& dialogue_words) const;

 private:
  void reindex() const;

  std::size_t count_ = 0;
  std::unordered_map<std::string, std::vector<std::pair<std::uint32_t, std::string>>> by_head_;
  mutable std::vector<std::string> relations_;
  mutable std::unordered_map<std::string, std::uint32_t> relation_ids_;
  mutable bool dirty_ = false;
};

class CooccurrenceIndex {
 public:
  explicit CooccurrenceIndex(unsigned k = 10);

  unsigned window() const { return k_; }
  std::uint64_t total_tokens() const { return total_; }
  std::size_t vocabulary_size() const { return vocab_.size(); }
  std::size_t pair_count() const { return c2_.size(); }

  std::uint64_t unigram(const Token& w) const;
  std::uint64_t pair(const Token& a, const Token& b) const;  // symmetric

  // Counts unigrams over `tokens` and pairs over positions < K apart. The
  // optional carry prefix (tail of the previous shard) participates only as
  // the left side of pairs, so shard-by-shard accumulation with a K-1 token
  // overlap reproduces the single-stream counts exactly.
  void add_stream(const TokenSequence& tokens, const TokenSequence& carry_prefix = {});

  void merge(const CooccurrenceIndex& other);  // requires equal K

  // Byte-deterministic binary format (magic "COOC1", little-endian, vocab and
  // pair tables sorted).
  void save(const std::string& path) const;
  static CooccurrenceIndex load(const std::string& path);

 private:
  std::uint32_t id_of(const Token& w);

  unsigned k_;
  std::uint64_t total_ = 0;
  std::unordered_map<Token, std::uint32_t> ids_;
  std::vector<Token> vocab_;
  std::vector<std::uint64_t> c1_;
  std::unordered_map<std::uint64_t, std::uint64_t> c2_;  // key (min_id<<32)|max_id
};

// Whole-stream build; throws on an empty stream or k < 2.
CooccurrenceIndex build_cooccurrence_index(const TokenSequence& corpus, unsigned k);

// One document per line, tokenize+normalize applied, pairs never cross lines.
// jobs > 1 shards the lines and merges; the result is identical to jobs == 1.
CooccurrenceIndex index_corpus_file(const std::string& path, unsigned k, unsigned jobs = 1);

struct PmiTriple {
  double max = 0, min = 0, avg = 0;
};

// Mean over option tokens of {max,min,avg} pointwise mutual information against
// the context words; zero-count pairs are skipped, option tokens with no
// co-occurring context word contribute 0.
PmiTriple pmi_features(const TokenSequence& option, const WordSet& context_words,
                       const CooccurrenceIndex& index);

}  // namespace dmrc
